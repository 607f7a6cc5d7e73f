#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "hrm/presets.hpp"
#include "hrm/solver.hpp"
#include "hrm/diagnostics.hpp"
#include "hrm/entropy.hpp"
#include "oracles.hpp"

using namespace hrm;

namespace {
const EosModel kEos{};
const ConservedState kRef{6.8, 6.8, 0.8};

Eigen::MatrixXd constant_field(int n, const ConservedState& U) {
  Eigen::MatrixXd S(n, 3);
  for (int i = 0; i < n; ++i) S.row(i) = U.vec();
  return S;
}
}  // namespace

TEST_CASE("physical flux") {
  const Eigen::Vector3d F = physical_flux(kRef, kEos);
  CHECK(F[0] == 6.8);  // first component is exactly the momentum slot
  CHECK(F[1] == doctest::Approx(8.8).epsilon(1e-14));
  CHECK(F[2] == doctest::Approx(0.8).epsilon(1e-14));

  const Eigen::Vector3d F0 = physical_flux(cons_from_prim({2.0, 0.0, 0.4}, kEos), kEos);
  CHECK(F0[0] == 0.0);
  CHECK(F0[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(F0[2] == 0.0);
}

TEST_CASE("rusanov flux: consistency, antisymmetry, jump term") {
  // consistency
  const Eigen::Vector3d F = numerical_flux(kRef, kRef, kEos);
  CHECK((F - physical_flux(kRef, kEos)).cwiseAbs().maxCoeff() < 1e-14);

  // mirrored velocities, same (p, alpha): zero mass flux
  const ConservedState L = cons_from_prim({2.0, 1.0, 0.4}, kEos);
  const ConservedState R = cons_from_prim({2.0, -1.0, 0.4}, kEos);
  CHECK(std::abs(numerical_flux(L, R, kEos)[0]) < 1e-14);

  // jump term against explicit recomputation
  oracles::StateSampler sample(kEos, 2024);
  for (int s = 0; s < 50; ++s) {
    const ConservedState UL = cons_from_prim(sample(), kEos);
    const ConservedState UR = cons_from_prim(sample(), kEos);
    const double smax = std::max(max_signal_speed(UL, kEos), max_signal_speed(UR, kEos));
    const Eigen::Vector3d expect =
        0.5 * (physical_flux(UL, kEos) + physical_flux(UR, kEos)) -
        0.5 * smax * (UR.vec() - UL.vec());
    CHECK((numerical_flux(UL, UR, kEos) - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("hyperbolic step: constant preservation and conservation") {
  Grid1D grid;
  grid.n_cells = 64;
  const double dt = 0.3 * grid.dx() / max_signal_speed(kRef, kEos);

  // spatially constant field is a fixed point
  const Eigen::MatrixXd S0 = constant_field(64, kRef);
  const Eigen::MatrixXd S1 = hyperbolic_step(S0, dt, grid, kEos, 0.0);
  CHECK((S1 - S0).cwiseAbs().maxCoeff() == 0.0);

  // conservation of rho_m and m over many steps, periodic, with and without viscosity
  for (double nu : {0.0, 1e-4}) {
    PresetSpec ps;
    Eigen::MatrixXd S(64, 3);
    const auto ic = preset_initial_condition(ps, grid, kEos);
    for (int i = 0; i < 64; ++i) S.row(i) = cons_from_prim(ic[i], kEos).vec();
    const double mass0 = S.col(0).sum() * grid.dx();
    const double mom0 = S.col(1).sum() * grid.dx();
    double step = 0.3 * grid.dx() / 2.0;
    if (nu > 0.0) step = std::min(step, 0.4 * grid.dx() * grid.dx() / nu);
    for (int k = 0; k < 100; ++k) S = hyperbolic_step(S, step, grid, kEos, nu);
    CHECK(S.col(0).sum() * grid.dx() == doctest::Approx(mass0).epsilon(1e-13));
    CHECK(S.col(1).sum() * grid.dx() - mom0 == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("hyperbolic step: three-point stencil locality") {
  Grid1D grid;
  grid.n_cells = 32;
  Eigen::MatrixXd S = constant_field(32, kRef);
  S.row(16) = cons_from_prim({2.2, 0.0, alpha_eq(2.2, kEos)}, kEos).vec();
  const double dt = 0.3 * grid.dx() / 3.0;
  const Eigen::MatrixXd S1 = hyperbolic_step(S, dt, grid, kEos, 0.0);
  for (int i = 0; i < 32; ++i) {
    const bool touched = (S1.row(i) - S.row(i)).cwiseAbs().maxCoeff() > 1e-14;
    if (i < 15 || i > 17) CHECK_FALSE(touched);
  }
}

TEST_CASE("hyperbolic step: step-size violations are rejected") {
  Grid1D grid;
  grid.n_cells = 16;
  const Eigen::MatrixXd S = constant_field(16, kRef);
  const double dt_bad = 1.1 * grid.dx() / max_signal_speed(kRef, kEos);
  CHECK_THROWS_AS(hyperbolic_step(S, dt_bad, grid, kEos, 0.0), NumericsError);

  const double nu = 1e-2;
  const double dt_visc_bad = 0.7 * grid.dx() * grid.dx() / nu;
  CHECK_THROWS_AS(hyperbolic_step(S, dt_visc_bad, grid, kEos, nu), NumericsError);
}

TEST_CASE("hyperbolic step: over-compressing a cell raises a state error with its index") {
  // Center cell sits near the alpha -> 0 boundary (W = rho_l - rho_m + Gamma
  // barely positive); converging neighbors push it over in one step.
  Grid1D grid;
  grid.n_cells = 8;
  grid.boundary = Boundary::outflow;
  const ConservedState thin{10.5, 0.0, 0.6};                 // alpha = 0.01
  const ConservedState push_r{10.8, 10.8 * 3.0, 1.5};        // converging from the left
  const ConservedState push_l{10.8, -10.8 * 3.0, 1.5};       // converging from the right
  Eigen::MatrixXd S(8, 3);
  for (int i = 0; i < 8; ++i) S.row(i) = (i < 3 ? push_r : i > 3 ? push_l : thin).vec();
  double smax = 0.0;
  for (int i = 0; i < 8; ++i)
    smax = std::max(smax, max_signal_speed(ConservedState::from_vec(S.row(i)), kEos));
  const double dt = 0.95 * grid.dx() / smax;
  bool threw = false;
  try {
    for (int k = 0; k < 10; ++k) S = hyperbolic_step(S, dt, grid, kEos, 0.0);
  } catch (const StateError& e) {
    threw = true;
    CHECK(std::string(e.what()).find("cell") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("relaxation substep: cells without an admissible fixed point abort loudly") {
  // At rho_m = 2 the attainable equilibrium-density range is never reached:
  // the source drives Gamma toward zero and a large implicit step has no
  // admissible solution.
  const ConservedState U{2.0, 0.0, 0.5};
  CHECK_THROWS_AS(relaxation_substep(U, 1.0, 1e-3, kEos, SourceScheme::backward_euler),
                  StateError);
  CHECK_THROWS_AS(relaxation_substep(U, 1.0, 1e-3, kEos, SourceScheme::exact_affine), StateError);
}

TEST_CASE("relaxation substep: equilibrium cells are fixed points") {
  const ConservedState Ueq = cons_from_prim({2.0, 1.0, alpha_eq(2.0, kEos)}, kEos);
  for (SourceScheme scheme : {SourceScheme::exact_affine, SourceScheme::backward_euler}) {
    for (double dt : {1e-6, 1e-3, 1.0, 100.0}) {
      const ConservedState U1 = relaxation_substep(Ueq, dt, 1e-3, kEos, scheme);
      CHECK(U1.Gamma == doctest::Approx(Ueq.Gamma).epsilon(1e-14));
      CHECK(U1.rho_m == Ueq.rho_m);
      CHECK(U1.m == Ueq.m);
    }
  }
}

TEST_CASE("relaxation substep: off-equilibrium cell from the worked example") {
  // Gamma = 0.9 at rho_m = 6.8: alpha = 0.41, p = 2.19512..., alpha_eq = 0.39024...
  const ConservedState U{6.8, 6.8, 0.9};
  const PrimitiveState V = prim_from_cons(U, kEos);
  CHECK(V.alpha == doctest::Approx(0.41).epsilon(1e-12));
  CHECK(V.p == doctest::Approx(2.1951219512195124).epsilon(1e-12));
  CHECK(alpha_eq(V.p, kEos) == doctest::Approx(0.3902439024390244).epsilon(1e-12));

  // source initially decreases Gamma
  const double eps = 1e-3;
  const ConservedState U1 = relaxation_substep(U, 1e-5, eps, kEos, SourceScheme::exact_affine);
  CHECK(U1.Gamma < U.Gamma);

  // exact closed-form flow matches micro-stepped RK4 integration
  for (double ratio : {0.1, 1.0, 10.0}) {
    const double dt = ratio * eps;
    const double Gref = oracles::rk4_cell_ode(U, dt, eps, kEos, 10000);
    const double Ge = relaxation_substep(U, dt, eps, kEos, SourceScheme::exact_affine).Gamma;
    CHECK(Ge == doctest::Approx(Gref).epsilon(1e-8));
  }

  // backward Euler carries its first-order defect but converges as dt -> 0
  for (double ratio : {0.1, 1.0, 10.0}) {
    const double dt = ratio * eps;
    const double Gref = oracles::rk4_cell_ode(U, dt, eps, kEos, 10000);
    const double Gb = relaxation_substep(U, dt, eps, kEos, SourceScheme::backward_euler).Gamma;
    CHECK(std::abs(Gb - Gref) / Gref <= 0.05 * ratio * ratio + 1e-9);
  }
  const double dt_small = 1e-3 * eps;
  const double Gref = oracles::rk4_cell_ode(U, dt_small, eps, kEos, 1000);
  const double Gb = relaxation_substep(U, dt_small, eps, kEos, SourceScheme::backward_euler).Gamma;
  CHECK(Gb == doctest::Approx(Gref).epsilon(1e-8));
}

TEST_CASE("relaxation substep: stiff limit contracts monotonically to equilibrium") {
  for (SourceScheme scheme : {SourceScheme::exact_affine, SourceScheme::backward_euler}) {
    ConservedState U{6.8, 0.0, 0.9};
    const double eps = 1e-3;
    double prev = 1e300;
    for (int k = 0; k < 6; ++k) {
      U = relaxation_substep(U, 2.0 * eps, eps, kEos, scheme);
      const PrimitiveState V = prim_from_cons(U, kEos);
      const double dev = std::abs(V.alpha - alpha_eq(V.p, kEos));
      CHECK(dev <= prev);
      prev = dev;
    }
    CHECK(prev < 1e-2);
  }
}

TEST_CASE("relaxation substep: exact flow vs RK4 over random relaxation cells") {
  oracles::StateSampler sample(kEos, 3030);
  for (double ratio : {0.1, 1.0, 10.0}) {
    for (int s = 0; s < 30; ++s) {
      const ConservedState U = sample.relaxation_cell(0.1);
      const double eps = 1e-3, dt = ratio * eps;
      const double Gref = oracles::rk4_cell_ode(U, dt, eps, kEos, 10000);
      const double Ge = relaxation_substep(U, dt, eps, kEos, SourceScheme::exact_affine).Gamma;
      CHECK(Ge == doctest::Approx(Gref).epsilon(1e-8));
    }
  }
}

TEST_CASE("relaxation substep: logistic map goes through the implicit path") {
  EosModel e = kEos;
  e.alpha_model.kind = AlphaEqKind::logistic;
  const ConservedState U{6.8, 0.0, 0.9};
  const double eps = 1e-3;
  // exact_affine falls back to backward Euler for non-affine maps
  const double Ga = relaxation_substep(U, eps, eps, e, SourceScheme::exact_affine).Gamma;
  const double Gb = relaxation_substep(U, eps, eps, e, SourceScheme::backward_euler).Gamma;
  CHECK(Ga == doctest::Approx(Gb).epsilon(1e-12));
  const double Gref = oracles::rk4_cell_ode(U, 1e-3 * eps, eps, e, 1000);
  const double Gs = relaxation_substep(U, 1e-3 * eps, eps, e, SourceScheme::backward_euler).Gamma;
  CHECK(Gs == doctest::Approx(Gref).epsilon(1e-8));
}

TEST_CASE("run: constant equilibrium data is an exact steady state") {
  Grid1D grid;
  grid.n_cells = 32;
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.t_end = 0.05;
  cfg.record_every = 0.01;
  PresetSpec ps;
  ps.name = "constant_eq";
  const auto ic = preset_initial_condition(ps, grid, kEos);
  const SolutionField f = run(ic, cfg, grid, kEos);
  REQUIRE(f.n_times() >= 2);
  for (const auto& S : f.states)
    CHECK((S - f.states.front()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(f.times.front() == 0.0);
  CHECK(f.times.back() == doctest::Approx(cfg.t_end));
  for (int k = 0; k + 1 < f.n_times(); ++k) CHECK(f.times[k] < f.times[k + 1]);
}

TEST_CASE("run: conservation and positivity on the gaussian preset") {
  Grid1D grid;
  grid.n_cells = 200;
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.t_end = 0.1;
  cfg.record_every = 0.02;
  PresetSpec ps;
  const auto ic = preset_initial_condition(ps, grid, kEos);
  const SolutionField f = run(ic, cfg, grid, kEos);

  const double dx = grid.dx();
  const double mass0 = f.states.front().col(0).sum() * dx;
  const double mom0 = f.states.front().col(1).sum() * dx;
  for (const auto& S : f.states) {
    CHECK(S.col(0).sum() * dx == doctest::Approx(mass0).epsilon(1e-12));
    CHECK(std::abs(S.col(1).sum() * dx - mom0) < 1e-12 * std::abs(mass0));
    for (int i = 0; i < grid.n_cells; ++i) {
      const PrimitiveState V = prim_from_cons(ConservedState::from_vec(S.row(i)), kEos);
      CHECK(V.alpha > 0.0);
      CHECK(V.alpha < 1.0);
      CHECK(V.p > 0.0);
    }
  }
}

TEST_CASE("run: equilibrium-projected data stays near the manifold") {
  Grid1D grid;
  grid.n_cells = 100;
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.t_end = 0.02;
  cfg.record_every = 0.01;
  PresetSpec ps;
  ps.name = "constant_eq";
  ps.p_bar = 2.0;
  ps.u_bar = 0.4;  // uniform advection of an equilibrium state
  const auto ic = preset_initial_condition(ps, grid, kEos);
  const SolutionField f = run(ic, cfg, grid, kEos);
  for (const auto& S : f.states)
    for (int i = 0; i < grid.n_cells; ++i) {
      const PrimitiveState V = prim_from_cons(ConservedState::from_vec(S.row(i)), kEos);
      CHECK(std::abs(V.alpha - alpha_eq(V.p, kEos)) < 1e-10);
    }
}

TEST_CASE("run: total entropy decays on the gaussian pulse") {
  // thermodynamically consistent calibration at the base pressure
  EosModel eos = kEos;
  eos.A_g = calibrated_gas_constant(2.0, kEos);
  Grid1D grid;
  grid.n_cells = 800;
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.t_end = 0.1;
  cfg.record_every = 0.005;
  PresetSpec ps;
  const auto ic = preset_initial_condition(ps, grid, eos);
  const SolutionField f = run(ic, cfg, grid, eos);
  const Eigen::ArrayXd S = total_entropy_series(f, eos);
  for (int k = 0; k + 1 < S.size(); ++k) CHECK(S[k + 1] <= S[k] + 1e-12 * std::abs(S[0]));
  CHECK(S[S.size() - 1] < S[0]);
}

TEST_CASE("run: first-order self-convergence on smooth data") {
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.t_end = 0.05;
  cfg.record_every = 0.05;
  PresetSpec ps;

  auto final_p = [&](int n) {
    Grid1D g;
    g.n_cells = n;
    const auto ic = preset_initial_condition(ps, g, kEos);
    const SolutionField f = run(ic, cfg, g, kEos);
    Eigen::ArrayXd p(n);
    for (int i = 0; i < n; ++i)
      p[i] = prim_from_cons(ConservedState::from_vec(f.states.back().row(i)), kEos).p;
    return p;
  };
  auto coarsen = [](const Eigen::ArrayXd& f) {
    Eigen::ArrayXd c(f.size() / 2);
    for (int i = 0; i < c.size(); ++i) c[i] = 0.5 * (f[2 * i] + f[2 * i + 1]);
    return c;
  };

  const Eigen::ArrayXd p100 = final_p(100);
  const Eigen::ArrayXd p200 = final_p(200);
  const Eigen::ArrayXd p400 = final_p(400);
  const double e_coarse = (coarsen(p200) - p100).matrix().norm() / std::sqrt(100.0);
  const double e_fine = (coarsen(p400) - p200).matrix().norm() / std::sqrt(200.0);
  CHECK(e_coarse / e_fine > 1.4);  // at least first-order-ish contraction
  CHECK(e_coarse / e_fine < 3.0);
}

TEST_CASE("run: artificial viscosity path completes and conserves") {
  Grid1D grid;
  grid.n_cells = 100;
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.nu = 1e-3;
  cfg.t_end = 0.02;
  cfg.record_every = 0.01;
  PresetSpec ps;
  const auto ic = preset_initial_condition(ps, grid, kEos);
  const SolutionField f = run(ic, cfg, grid, kEos);
  CHECK(f.states.back().allFinite());
  const double dx = grid.dx();
  CHECK(f.states.back().col(0).sum() * dx ==
        doctest::Approx(f.states.front().col(0).sum() * dx).epsilon(1e-12));
}

TEST_CASE("run: stiff-limit stability at dt/eps around 1e3") {
  Grid1D grid;
  grid.n_cells = 100;
  SolverConfig cfg;
  cfg.eps = 3e-6;
  cfg.t_end = 0.01;
  cfg.record_every = 0.005;
  PresetSpec ps;
  for (SourceScheme scheme : {SourceScheme::exact_affine, SourceScheme::backward_euler}) {
    cfg.source_scheme = scheme;
    const auto ic = preset_initial_condition(ps, grid, kEos);
    const SolutionField f = run(ic, cfg, grid, kEos);
    CHECK(f.states.back().allFinite());
  }
}

TEST_CASE("run: deterministic replay") {
  Grid1D grid;
  grid.n_cells = 64;
  SolverConfig cfg;
  cfg.eps = 1e-3;
  cfg.t_end = 0.03;
  cfg.record_every = 0.01;
  PresetSpec ps;
  const auto ic = preset_initial_condition(ps, grid, kEos);
  const SolutionField a = run(ic, cfg, grid, kEos);
  const SolutionField b = run(ic, cfg, grid, kEos);
  REQUIRE(a.n_times() == b.n_times());
  for (int k = 0; k < a.n_times(); ++k)
    CHECK((a.states[k] - b.states[k]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("run: rejects mismatched profiles and bad configs") {
  Grid1D grid;
  grid.n_cells = 32;
  SolverConfig cfg;
  PresetSpec ps;
  const auto ic = preset_initial_condition(ps, grid, kEos);
  Grid1D other = grid;
  other.n_cells = 16;
  CHECK_THROWS_AS(run(ic, cfg, other, kEos), UsageError);
  SolverConfig bad = cfg;
  bad.eps = 0.0;
  CHECK_THROWS_AS(run(ic, bad, grid, kEos), ConfigError);
  bad = cfg;
  bad.cfl = 1.5;
  CHECK_THROWS_AS(run(ic, bad, grid, kEos), ConfigError);
}

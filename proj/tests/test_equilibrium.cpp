#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "hrm/diagnostics.hpp"
#include "hrm/entropy.hpp"
#include "hrm/equilibrium.hpp"
#include "hrm/presets.hpp"

using namespace hrm;

namespace {
const EosModel kEos{};
}

TEST_CASE("equilibrium flux") {
  const Eigen::Vector2d F = eq_flux({6.8, 6.8}, kEos);
  CHECK(F[0] == 6.8);
  CHECK(F[1] == doctest::Approx(8.8).epsilon(1e-10));
  const Eigen::Vector2d F0 = eq_flux({6.8, 0.0}, kEos);
  CHECK(F0[0] == 0.0);
  CHECK(F0[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("equilibrium flux agrees with the relaxation flux on the manifold") {
  for (double p : {1.0, 2.0, 4.0, 6.5}) {
    for (double u : {-1.0, 0.0, 0.7}) {
      const ConservedState U = cons_from_prim({p, u, alpha_eq(p, kEos)}, kEos);
      const Eigen::Vector3d F3 = physical_flux(U, kEos);
      const Eigen::Vector2d F2 = eq_flux({U.rho_m, U.m}, kEos);
      CHECK(F2[0] == doctest::Approx(F3[0]).epsilon(1e-10));
      CHECK(F2[1] == doctest::Approx(F3[1]).epsilon(1e-10));
    }
  }
}

TEST_CASE("eq_run: constant state and conservation") {
  Grid1D grid;
  grid.n_cells = 64;
  SolverConfig cfg;
  cfg.t_end = 0.05;
  cfg.record_every = 0.01;

  Eigen::ArrayXd p0 = Eigen::ArrayXd::Constant(64, 2.0);
  Eigen::ArrayXd u0 = Eigen::ArrayXd::Constant(64, 0.3);
  const SolutionField f = eq_run(p0, u0, cfg, grid, kEos);
  for (const auto& S : f.states)
    CHECK((S - f.states.front()).cwiseAbs().maxCoeff() < 1e-12);

  PresetSpec ps;
  preset_pu_profile(ps, grid, kEos, p0, u0);
  const SolutionField g = eq_run(p0, u0, cfg, grid, kEos);
  const double dx = grid.dx();
  const double mass0 = g.states.front().col(0).sum() * dx;
  const double mom0 = g.states.front().col(1).sum() * dx;
  for (const auto& S : g.states) {
    CHECK(S.col(0).sum() * dx == doctest::Approx(mass0).epsilon(1e-12));
    CHECK(std::abs(S.col(1).sum() * dx - mom0) < 1e-12 * mass0);
  }
}

TEST_CASE("eq_run: riemann fan stays inside the equilibrium signal cone") {
  Grid1D grid;
  grid.n_cells = 400;
  grid.boundary = Boundary::outflow;
  SolverConfig cfg;
  cfg.t_end = 0.05;
  cfg.record_every = 0.05;

  PresetSpec ps;
  ps.name = "riemann";  // p_L=3, p_R=1.5, u=0, split at midpoint
  Eigen::ArrayXd p0, u0;
  preset_pu_profile(ps, grid, kEos, p0, u0);
  const SolutionField f = eq_run(p0, u0, cfg, grid, kEos);

  double smax = 0.0;
  for (double p : {1.5, 3.0})
    smax = std::max(smax, std::sqrt(1.0 / equilibrium_density_slope(p, kEos)));
  // The material front stays inside the signal cone; beyond it only the
  // numerical-diffusion tail remains, which dies off within a few diffusion
  // lengths sqrt(2 D t), D = s dx / 2.
  const auto& S = f.states.back();
  const double jump = std::abs(equilibrium_mixture_density(3.0, kEos) -
                               equilibrium_mixture_density(1.5, kEos));
  double front = 0.0;
  for (int i = 0; i < grid.n_cells; ++i)
    if (std::abs(S(i, 0) - f.states.front()(i, 0)) > 0.01 * jump)
      front = std::max(front, std::abs(grid.center(i) - 0.5));
  const double diff_len = std::sqrt(2.0 * 0.5 * smax * grid.dx() * cfg.t_end);
  CHECK(front <= smax * cfg.t_end + 3.0 * diff_len + 3.0 * grid.dx());
  const double tail_reach = smax * cfg.t_end + 5.0 * diff_len + 3.0 * grid.dx();
  for (int i = 0; i < grid.n_cells; ++i) {
    if (std::abs(grid.center(i) - 0.5) > tail_reach) {
      CHECK(std::abs(S(i, 0) - f.states.front()(i, 0)) < 1e-6 * jump);
      CHECK(std::abs(S(i, 1) - f.states.front()(i, 1)) < 1e-6 * jump);
    }
  }
}

TEST_CASE("eq_run: first-order self-convergence on smooth data") {
  SolverConfig cfg;
  cfg.t_end = 0.05;
  cfg.record_every = 0.05;
  PresetSpec ps;

  auto final_rho = [&](int n) {
    Grid1D g;
    g.n_cells = n;
    Eigen::ArrayXd p0, u0;
    preset_pu_profile(ps, g, kEos, p0, u0);
    const SolutionField f = eq_run(p0, u0, cfg, g, kEos);
    return Eigen::ArrayXd(f.states.back().col(0).array());
  };
  auto coarsen = [](const Eigen::ArrayXd& f) {
    Eigen::ArrayXd c(f.size() / 2);
    for (int i = 0; i < c.size(); ++i) c[i] = 0.5 * (f[2 * i] + f[2 * i + 1]);
    return c;
  };
  const Eigen::ArrayXd r100 = final_rho(100);
  const Eigen::ArrayXd r200 = final_rho(200);
  const Eigen::ArrayXd r400 = final_rho(400);
  const double e_coarse = (coarsen(r200) - r100).matrix().norm() / std::sqrt(100.0);
  const double e_fine = (coarsen(r400) - r200).matrix().norm() / std::sqrt(200.0);
  CHECK(e_coarse / e_fine > 1.4);
  CHECK(e_coarse / e_fine < 3.0);
}

TEST_CASE("eq_run: canonical entropy is non-increasing up to discretization tolerance") {
  Grid1D grid;
  grid.n_cells = 400;
  SolverConfig cfg;
  cfg.t_end = 0.1;
  cfg.record_every = 0.005;
  PresetSpec ps;
  Eigen::ArrayXd p0, u0;
  preset_pu_profile(ps, grid, kEos, p0, u0);
  const SolutionField f = eq_run(p0, u0, cfg, grid, kEos);

  const double dx = grid.dx();
  Eigen::ArrayXd S(f.n_times());
  for (int k = 0; k < f.n_times(); ++k) {
    double sum = 0.0;
    for (int i = 0; i < grid.n_cells; ++i)
      sum += canonical_eq_entropy(f.states[k](i, 0), f.states[k](i, 1), kEos);
    S[k] = sum * dx;
  }
  for (int k = 0; k + 1 < S.size(); ++k) CHECK(S[k + 1] <= S[k] + 1e-10 * std::abs(S[0]));
}

TEST_CASE("eq_run: usage errors") {
  Grid1D grid;
  grid.n_cells = 32;
  SolverConfig cfg;
  Eigen::ArrayXd p0 = Eigen::ArrayXd::Constant(16, 2.0);
  Eigen::ArrayXd u0 = Eigen::ArrayXd::Constant(16, 0.0);
  CHECK_THROWS_AS(eq_run(p0, u0, cfg, grid, kEos), UsageError);
}

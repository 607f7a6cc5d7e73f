#include "hrm/solver.hpp"

#include <cmath>
#include <sstream>

namespace hrm {

Eigen::Vector3d physical_flux(const ConservedState& U, const EosModel& eos) {
  const PrimitiveState V = prim_from_cons(U, eos);
  return {U.m, U.m * V.u + V.p, U.Gamma * V.u};
}

double max_signal_speed(const ConservedState& U, const EosModel& eos) {
  const PrimitiveState V = prim_from_cons(U, eos);
  return std::abs(V.u) + std::sqrt(eos.RT0() / V.alpha);
}

Eigen::Vector3d numerical_flux(const ConservedState& UL, const ConservedState& UR,
                               const EosModel& eos) {
  const double s = std::max(max_signal_speed(UL, eos), max_signal_speed(UR, eos));
  return 0.5 * (physical_flux(UL, eos) + physical_flux(UR, eos)) -
         0.5 * s * (UR.vec() - UL.vec());
}

namespace {

ConservedState row_state(const Eigen::MatrixXd& states, int i) {
  return {states(i, 0), states(i, 1), states(i, 2)};
}

int wrap_index(int i, int n, Boundary bc) {
  if (bc == Boundary::periodic) return (i % n + n) % n;
  return std::clamp(i, 0, n - 1);
}

}  // namespace

Eigen::MatrixXd hyperbolic_step(const Eigen::MatrixXd& states, double dt, const Grid1D& grid,
                                const EosModel& eos, double nu) {
  const int n = grid.n_cells;
  const double dx = grid.dx();

  double smax = 0.0;
  for (int i = 0; i < n; ++i) smax = std::max(smax, max_signal_speed(row_state(states, i), eos));
  if (dt > dx / smax)
    throw NumericsError("hyperbolic_step: dt exceeds the CFL bound dx / max(|u| + a_f)");
  if (nu > 0.0 && dt > 0.5 * dx * dx / nu)
    throw NumericsError("hyperbolic_step: dt exceeds the viscous bound dx^2 / (2 nu)");

  // Interface fluxes F_{i+1/2}, i = -1..n-1.
  Eigen::MatrixXd flux(n + 1, 3);
  for (int f = 0; f <= n; ++f) {
    const int il = wrap_index(f - 1, n, grid.boundary);
    const int ir = wrap_index(f, n, grid.boundary);
    flux.row(f) = numerical_flux(row_state(states, il), row_state(states, ir), eos);
  }

  Eigen::MatrixXd out(n, 3);
  const double lam = dt / dx;
  const double mu = nu * dt / (dx * dx);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d Ui = states.row(i);
    Eigen::Vector3d Unew = Ui - lam * (flux.row(i + 1) - flux.row(i)).transpose();
    if (nu > 0.0) {
      const int im = wrap_index(i - 1, n, grid.boundary);
      const int ip = wrap_index(i + 1, n, grid.boundary);
      Unew += mu * (states.row(ip).transpose() - 2.0 * Ui + states.row(im).transpose());
    }
    const ConservedState Uc = ConservedState::from_vec(Unew);
    try {
      validate_state(Uc, eos);
    } catch (const StateError& e) {
      std::ostringstream msg;
      msg << "hyperbolic_step: invalid state in cell " << i << ": " << e.what();
      throw StateError(msg.str());
    }
    out.row(i) = Unew;
  }
  return out;
}

namespace {

// Cell ODE for the stiff source at fixed (rho_m, m):
//   d(Gamma)/dt = (alpha_eq(p(Gamma)) - alpha(Gamma)) / eps,
// with alpha = (w0 + Gamma)/rho_l, p = R T0 rho_l Gamma / (w0 + Gamma),
// w0 = rho_l - rho_m. Valid Gamma range: (max(0, -w0), rho_m).
struct CellOde {
  double rho_m;
  double w0;
  double eps;
  const EosModel* eos;

  double gamma_lo() const { return std::max(0.0, -w0); }
  double gamma_hi() const { return rho_m; }
  double alpha(double G) const { return (w0 + G) / eos->rho_l; }
  double pressure(double G) const { return eos->RT0() * eos->rho_l * G / (w0 + G); }

  double residual(double G) const {  // alpha_eq(p) - alpha, the eps-free source
    return alpha_eq(pressure(G), *eos) - alpha(G);
  }
  double residual_deriv(double G) const {
    const double W = w0 + G;
    const double dp = eos->RT0() * eos->rho_l * w0 / (W * W);
    return alpha_eq_deriv(pressure(G), *eos) * dp - 1.0 / eos->rho_l;
  }

  // Fixed point of the source in the valid range, if any.
  bool fixed_point(double& G_fp) const {
    const double margin = 1e-13 * std::max(1.0, rho_m);
    double lo = gamma_lo() + margin, hi = gamma_hi() - margin;
    if (!(lo < hi)) return false;
    double flo = residual(lo), fhi = residual(hi);
    if (flo == 0.0) { G_fp = lo; return true; }
    if (fhi == 0.0) { G_fp = hi; return true; }
    if (flo * fhi > 0.0) return false;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = residual(mid);
      if (fm == 0.0) { G_fp = mid; return true; }
      if (fm * flo > 0.0) { lo = mid; flo = fm; } else { hi = mid; }
      if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    G_fp = 0.5 * (lo + hi);
    return true;
  }
};

double backward_euler_step(const CellOde& ode, double G0, double dt) {
  constexpr double tol = 1e-12;
  constexpr int max_iter = 50;
  const double f0 = ode.residual(G0);
  if (f0 == 0.0) return G0;  // exact equilibrium preserved

  // The implicit solution lies between G0 and the source fixed point
  // (or the range boundary in the direction of motion).
  double G_fp;
  double lo, hi;
  const double margin = 1e-13 * std::max(1.0, ode.rho_m);
  if (ode.fixed_point(G_fp)) {
    lo = std::min(G0, G_fp);
    hi = std::max(G0, G_fp);
  } else if (f0 > 0.0) {
    lo = G0;
    hi = ode.gamma_hi() - margin;
  } else {
    lo = ode.gamma_lo() + margin;
    hi = G0;
  }

  auto F = [&](double G) { return G - G0 - dt * ode.residual(G) / ode.eps; };
  double Flo = F(lo), Fhi = F(hi);
  if (Flo * Fhi > 0.0) {
    // Same sign on a rounding-width bracket means G0 sits on the fixed point
    // to machine precision; anything wider is a genuine range violation.
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(G0))) return G0;
    throw StateError("relaxation_substep: implicit step leaves the admissible Gamma range");
  }

  double G = std::clamp(G0 + dt * f0 / ode.eps, lo, hi);  // explicit predictor
  for (int it = 0; it < max_iter; ++it) {
    const double FG = F(G);
    if (FG == 0.0) return G;
    if (FG * Flo > 0.0) { lo = G; Flo = FG; } else { hi = G; Fhi = FG; }
    const double dF = 1.0 - dt * ode.residual_deriv(G) / ode.eps;
    double G_next = G - FG / dF;
    if (!(G_next > lo && G_next < hi)) G_next = 0.5 * (lo + hi);
    if (std::abs(G_next - G) <= tol) return G_next;
    G = G_next;
  }
  throw NumericsError("relaxation_substep: Newton failed to converge in 50 iterations");
}

// Closed-form flow of the cell ODE for the affine unclamped map
// alpha_eq = c0 + c1 p. Multiplying out, eps rho_l W dGamma/dt = N(Gamma)
// with N quadratic; separation of variables gives
//   G(Gamma) := -rho_l [ A ln|Gamma - Gp| + B ln|Gamma - Gm| ],  dG/dt = 1/eps,
// where Gp > Gm are the roots of N and A = W(Gp)/(Gp - Gm), B = -W(Gm)/(Gp - Gm).
bool exact_affine_step(const CellOde& ode, double G0, double dt, double& G1) {
  const EosModel& eos = *ode.eos;
  if (eos.alpha_model.kind != AlphaEqKind::affine_clamp) return false;
  if (!(ode.w0 > 0.0)) return false;  // p monotone in Gamma only for rho_m < rho_l

  const double rho_l = eos.rho_l;
  const double RT0 = eos.RT0();
  const double c0 = eos.alpha_model.c0, c1 = eos.alpha_model.c1;
  const double b = -2.0 * ode.w0 + c0 * rho_l + c1 * RT0 * rho_l * rho_l;
  const double cN = c0 * rho_l * ode.w0 - ode.w0 * ode.w0;
  const double disc = b * b + 4.0 * cN;
  if (!(disc > 0.0)) return false;
  const double sq = std::sqrt(disc);
  const double Gp = 0.5 * (b + sq);  // attracting root
  const double Gm = 0.5 * (b - sq);
  if (!(Gp > ode.gamma_lo() && Gp < ode.gamma_hi())) return false;
  if (Gm >= std::min(G0, Gp) && Gm <= std::max(G0, Gp)) return false;

  // The map must stay strictly unclamped along the (monotone) path.
  for (double G : {G0, Gp}) {
    const double raw = c0 + c1 * ode.pressure(G);
    if (!(raw > eos.alpha_model.alpha_min + 1e-12 && raw < eos.alpha_model.alpha_max - 1e-12))
      return false;
  }

  if (G0 == Gp) { G1 = G0; return true; }

  const double A = (ode.w0 + Gp) / sq;
  const double B = -(ode.w0 + Gm) / sq;
  const double tau = dt / ode.eps;
  const double sigma = (G0 > Gp) ? 1.0 : -1.0;
  const double xi0 = std::log(std::abs(G0 - Gp));
  const double d0 = std::abs(G0 - Gm);

  if (tau / (rho_l * A) > 900.0) { G1 = Gp; return true; }  // fully relaxed at double precision

  // Solve h(xi) = 0 with Gamma = Gp + sigma e^xi; h is strictly decreasing.
  auto h = [&](double xi) {
    const double G = Gp + sigma * std::exp(xi);
    return -rho_l * (A * (xi - xi0) + B * (std::log(std::abs(G - Gm)) - std::log(d0))) - tau;
  };
  double hi = xi0;
  double lo = xi0 - tau / (rho_l * A) - 50.0;
  double xi = xi0 - tau / (rho_l * (A + B));  // linearized predictor
  xi = std::clamp(xi, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double hx = h(xi);
    if (hx == 0.0) break;
    if (hx > 0.0) lo = xi; else hi = xi;  // h decreasing: h>0 means xi below the root
    const double G = Gp + sigma * std::exp(xi);
    const double dh = -rho_l * (A + B * sigma * std::exp(xi) / (G - Gm));
    double xi_next = xi - hx / dh;
    if (!(xi_next > std::min(lo, hi) && xi_next < std::max(lo, hi)))
      xi_next = 0.5 * (lo + hi);
    if (std::abs(xi_next - xi) <= 1e-14 * (1.0 + std::abs(xi))) { xi = xi_next; break; }
    xi = xi_next;
  }
  G1 = Gp + sigma * std::exp(xi);
  return true;
}

double wave_speed_max(const Eigen::MatrixXd& states, const EosModel& eos) {
  double smax = 0.0;
  for (int i = 0; i < states.rows(); ++i)
    smax = std::max(smax, max_signal_speed(row_state(states, i), eos));
  return smax;
}

}  // namespace

ConservedState relaxation_substep(const ConservedState& U, double dt, double eps,
                                  const EosModel& eos, SourceScheme scheme) {
  if (!(dt >= 0.0)) throw DomainError("relaxation_substep: dt must be non-negative");
  if (!(eps > 0.0)) throw DomainError("relaxation_substep: eps must be positive");
  validate_state(U, eos);
  if (dt == 0.0) return U;

  const CellOde ode{U.rho_m, eos.rho_l - U.rho_m, eps, &eos};
  double G1;
  if (scheme == SourceScheme::exact_affine && exact_affine_step(ode, U.Gamma, dt, G1)) {
    // closed-form path taken
  } else {
    G1 = backward_euler_step(ode, U.Gamma, dt);
  }
  const ConservedState out{U.rho_m, U.m, G1};
  validate_state(out, eos);
  return out;
}

SolutionField run(const std::vector<PrimitiveState>& ic, const SolverConfig& cfg,
                  const Grid1D& grid, const EosModel& eos) {
  cfg.validate();
  grid.validate();
  eos.validate();
  if (static_cast<int>(ic.size()) != grid.n_cells)
    throw UsageError("run: initial profile size does not match the grid");

  const int n = grid.n_cells;
  Eigen::MatrixXd states(n, 3);
  for (int i = 0; i < n; ++i) {
    const ConservedState U = cons_from_prim(ic[i], eos);
    states.row(i) = U.vec();
  }

  SolutionField field;
  field.grid = grid;
  field.components = {"rho_m", "m", "Gamma"};
  field.config = cfg;
  field.eos = eos;
  field.times.push_back(0.0);
  field.states.push_back(states);

  // Record times: multiples of record_every, plus t_end.
  std::vector<double> rec_times;
  for (double tr = cfg.record_every; tr < cfg.t_end - 1e-12 * cfg.t_end; tr += cfg.record_every)
    rec_times.push_back(tr);
  rec_times.push_back(cfg.t_end);

  double t = 0.0;
  for (double t_rec : rec_times) {
    while (t < t_rec) {
      const double dx = grid.dx();
      double dt = cfg.cfl * dx / wave_speed_max(states, eos);
      if (cfg.nu > 0.0) dt = std::min(dt, cfg.cfl * 0.5 * dx * dx / cfg.nu);
      dt = std::min(dt, t_rec - t);

      auto relax_all = [&](double tau) {
        for (int i = 0; i < n; ++i) {
          try {
            const ConservedState U = relaxation_substep(row_state(states, i), tau, cfg.eps,
                                                        eos, cfg.source_scheme);
            states.row(i) = U.vec();
          } catch (const Error& e) {
            std::ostringstream msg;
            msg << "source substep failed in cell " << i << ": " << e.what();
            throw StateError(msg.str());
          }
        }
      };
      try {
        relax_all(0.5 * dt);
        states = hyperbolic_step(states, dt, grid, eos, cfg.nu);
        relax_all(0.5 * dt);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "run: aborted at t = " << t << ": " << e.what();
        throw Error(msg.str());
      }
      t += dt;
    }
    t = t_rec;
    field.times.push_back(t);
    field.states.push_back(states);
  }
  return field;
}

}  // namespace hrm

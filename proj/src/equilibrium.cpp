#include "hrm/equilibrium.hpp"

#include <cmath>
#include <sstream>

namespace hrm {

namespace {

double eq_speed(double p, double u, const EosModel& eos) {
  const double slope = equilibrium_density_slope(p, eos);
  if (!(slope > 0.0)) throw ModelError("eq_run: non-positive d(rho_eq)/dp");
  return std::abs(u) + std::sqrt(1.0 / slope);
}

}  // namespace

Eigen::Vector2d eq_flux(const EqState& W, const EosModel& eos) {
  const double p = invert_equilibrium_density(W.rho, eos);
  return {W.mom, W.mom * W.mom / W.rho + p};
}

double eq_max_signal_speed(const EqState& W, const EosModel& eos) {
  const double p = invert_equilibrium_density(W.rho, eos);
  return eq_speed(p, W.mom / W.rho, eos);
}

Eigen::Vector2d eq_numerical_flux(const EqState& WL, const EqState& WR, const EosModel& eos) {
  const double s = std::max(eq_max_signal_speed(WL, eos), eq_max_signal_speed(WR, eos));
  const Eigen::Vector2d UL(WL.rho, WL.mom), UR(WR.rho, WR.mom);
  return 0.5 * (eq_flux(WL, eos) + eq_flux(WR, eos)) - 0.5 * s * (UR - UL);
}

SolutionField eq_run(const Eigen::ArrayXd& p0, const Eigen::ArrayXd& u0, const SolverConfig& cfg,
                     const Grid1D& grid, const EosModel& eos) {
  cfg.validate();
  grid.validate();
  eos.validate();
  const int n = grid.n_cells;
  if (p0.size() != n || u0.size() != n)
    throw UsageError("eq_run: initial profile size does not match the grid");

  Eigen::MatrixXd states(n, 2);
  Eigen::ArrayXd p(n);  // per-cell pressure, kept for warm-started inversion
  for (int i = 0; i < n; ++i) {
    p[i] = p0[i];
    const double rho = equilibrium_mixture_density(p0[i], eos);
    states(i, 0) = rho;
    states(i, 1) = rho * u0[i];
  }

  SolutionField field;
  field.grid = grid;
  field.components = {"rho", "mom"};
  field.config = cfg;
  field.eos = eos;
  field.times.push_back(0.0);
  field.states.push_back(states);

  std::vector<double> rec_times;
  for (double tr = cfg.record_every; tr < cfg.t_end - 1e-12 * cfg.t_end; tr += cfg.record_every)
    rec_times.push_back(tr);
  rec_times.push_back(cfg.t_end);

  const double dx = grid.dx();
  auto flux_phys = [&](int i) -> Eigen::Vector2d {
    return {states(i, 1), states(i, 1) * states(i, 1) / states(i, 0) + p[i]};
  };

  double t = 0.0;
  for (double t_rec : rec_times) {
    while (t < t_rec) {
      double smax = 0.0;
      for (int i = 0; i < n; ++i)
        smax = std::max(smax, eq_speed(p[i], states(i, 1) / states(i, 0), eos));
      double dt = cfg.cfl * dx / smax;
      dt = std::min(dt, t_rec - t);

      Eigen::MatrixXd flux(n + 1, 2);
      for (int f = 0; f <= n; ++f) {
        int il = f - 1, ir = f;
        if (grid.boundary == Boundary::periodic) {
          il = (il + n) % n;
          ir = ir % n;
        } else {
          il = std::clamp(il, 0, n - 1);
          ir = std::clamp(ir, 0, n - 1);
        }
        const double sL = eq_speed(p[il], states(il, 1) / states(il, 0), eos);
        const double sR = eq_speed(p[ir], states(ir, 1) / states(ir, 0), eos);
        const double s = std::max(sL, sR);
        flux.row(f) = 0.5 * (flux_phys(il) + flux_phys(ir)) -
                      0.5 * s * (states.row(ir) - states.row(il)).transpose();
      }

      const double lam = dt / dx;
      for (int i = 0; i < n; ++i) {
        states.row(i) -= lam * (flux.row(i + 1) - flux.row(i));
        if (!(states(i, 0) > 0.0)) {
          std::ostringstream msg;
          msg << "eq_run: non-positive density in cell " << i << " at t = " << t;
          throw StateError(msg.str());
        }
        try {
          p[i] = invert_equilibrium_density(states(i, 0), eos, p[i]);
        } catch (const Error& e) {
          std::ostringstream msg;
          msg << "eq_run: pressure recovery failed in cell " << i << " at t = " << t << ": "
              << e.what();
          throw Error(msg.str());
        }
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

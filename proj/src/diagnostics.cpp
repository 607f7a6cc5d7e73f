#include "hrm/diagnostics.hpp"

#include <cmath>

#include "hrm/entropy.hpp"

namespace hrm {

namespace {

double space_l2(const Eigen::ArrayXd& f, double dx) { return std::sqrt((f * f).sum() * dx); }

double trapz(const std::vector<double>& t, const Eigen::ArrayXd& v) {
  double s = 0.0;
  for (size_t k = 0; k + 1 < t.size(); ++k)
    s += 0.5 * (v[static_cast<int>(k)] + v[static_cast<int>(k + 1)]) * (t[k + 1] - t[k]);
  return s;
}

void require_relax_field(const SolutionField& field, const char* who) {
  if (field.n_comp() != 3)
    throw UsageError(std::string(who) + ": expected a 3-component relaxation field");
}

}  // namespace

PrimFields primitive_fields(const SolutionField& field, const EosModel& eos) {
  PrimFields out;
  const int n = field.grid.n_cells;
  for (const auto& S : field.states) {
    Eigen::ArrayXd p(n), u(n), a(n);
    if (field.n_comp() == 3) {
      for (int i = 0; i < n; ++i) {
        const PrimitiveState V = prim_from_cons({S(i, 0), S(i, 1), S(i, 2)}, eos);
        p[i] = V.p;
        u[i] = V.u;
        a[i] = V.alpha;
      }
    } else if (field.n_comp() == 2) {
      double guess = -1.0;
      for (int i = 0; i < n; ++i) {
        guess = invert_equilibrium_density(S(i, 0), eos, guess);
        p[i] = guess;
        u[i] = S(i, 1) / S(i, 0);
        a[i] = alpha_eq(guess, eos);
      }
    } else {
      throw UsageError("primitive_fields: unsupported component count");
    }
    out.p.push_back(std::move(p));
    out.u.push_back(std::move(u));
    out.alpha.push_back(std::move(a));
  }
  return out;
}

Eigen::ArrayXd spatial_derivative(const Eigen::ArrayXd& f, const Grid1D& grid) {
  const int n = static_cast<int>(f.size());
  const double dx = grid.dx();
  Eigen::ArrayXd d(n);
  for (int i = 0; i < n; ++i) {
    if (grid.boundary == Boundary::periodic) {
      d[i] = (f[(i + 1) % n] - f[(i - 1 + n) % n]) / (2.0 * dx);
    } else if (i == 0) {
      d[i] = (f[1] - f[0]) / dx;
    } else if (i == n - 1) {
      d[i] = (f[n - 1] - f[n - 2]) / dx;
    } else {
      d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
  }
  return d;
}

NormSeries make_norm_series(const std::string& label, const std::vector<double>& times,
                            const std::vector<Eigen::ArrayXd>& values, double dx) {
  NormSeries ns;
  ns.label = label;
  ns.times = times;
  ns.l2_space.resize(static_cast<int>(values.size()));
  for (size_t k = 0; k < values.size(); ++k) {
    ns.l2_space[static_cast<int>(k)] = space_l2(values[k], dx);
    ns.linf = std::max(ns.linf, values[k].abs().maxCoeff());
  }
  ns.l2_spacetime = std::sqrt(trapz(times, ns.l2_space.square()));
  return ns;
}

std::vector<Eigen::ArrayXd> relaxation_residual_field(const SolutionField& field,
                                                      const EosModel& eos) {
  const PrimFields pf = primitive_fields(field, eos);
  std::vector<Eigen::ArrayXd> out;
  for (size_t k = 0; k < pf.p.size(); ++k) {
    Eigen::ArrayXd res(pf.p[k].size());
    for (int i = 0; i < res.size(); ++i) res[i] = pf.alpha[k][i] - alpha_eq(pf.p[k][i], eos);
    out.push_back(std::move(res));
  }
  return out;
}

REpsField r_eps_field(const SolutionField& field, double eps, const EosModel& eos) {
  if (!(eps > 0.0)) throw DomainError("r_eps_field: eps must be positive");
  REpsField out;
  for (const auto& res : relaxation_residual_field(field, eos)) {
    out.r.push_back(res / eps);
    out.dr_dx.push_back(spatial_derivative(out.r.back(), field.grid));
  }
  return out;
}

QEpsField q_eps_field(const SolutionField& field, double eps, const EosModel& eos) {
  require_relax_field(field, "q_eps_field");
  if (!(eps > 0.0)) throw DomainError("q_eps_field: eps must be positive");
  const PrimFields pf = primitive_fields(field, eos);
  QEpsField out;
  for (size_t k = 0; k < pf.p.size(); ++k) {
    const int n = static_cast<int>(pf.p[k].size());
    Eigen::ArrayXd q(n);
    for (int i = 0; i < n; ++i) {
      const double p = pf.p[k][i];
      const double r = (pf.alpha[k][i] - alpha_eq(p, eos)) / eps;
      q[i] = (gas_density(p, eos) - eos.rho_l) * r;
      const double rho_m = field.states[k](i, 0);
      out.max_identity_error = std::max(
          out.max_identity_error, std::abs(equilibrium_mixture_density(p, eos) + eps * q[i] - rho_m));
    }
    out.q.push_back(std::move(q));
  }
  return out;
}

Eigen::ArrayXd total_entropy_series(const SolutionField& field, const EosModel& eos) {
  require_relax_field(field, "total_entropy_series");
  const double dx = field.grid.dx();
  Eigen::ArrayXd S(field.n_times());
  for (int k = 0; k < field.n_times(); ++k) {
    const auto& st = field.states[k];
    double sum = 0.0;
    for (int i = 0; i < field.grid.n_cells; ++i)
      sum += entropy_density({st(i, 0), st(i, 1), st(i, 2)}, eos);
    S[k] = sum * dx;
  }
  return S;
}

GradientNormSeries gradient_norm_series(const SolutionField& field, const EosModel& eos) {
  const PrimFields pf = primitive_fields(field, eos);
  GradientNormSeries out;
  out.times = field.times;
  out.dxp.resize(field.n_times());
  out.dxu.resize(field.n_times());
  const double dx = field.grid.dx();
  for (int k = 0; k < field.n_times(); ++k) {
    out.dxp[k] = space_l2(spatial_derivative(pf.p[k], field.grid), dx);
    out.dxu[k] = space_l2(spatial_derivative(pf.u[k], field.grid), dx);
  }
  return out;
}

TimeDerivativeNorms time_derivative_norms(const SolutionField& field, const EosModel& eos) {
  if (field.n_times() < 2)
    throw UsageError("time_derivative_norms: need at least two snapshots");
  const PrimFields pf = primitive_fields(field, eos);
  const double dx = field.grid.dx();
  double sp = 0.0, su = 0.0;
  for (int k = 0; k + 1 < field.n_times(); ++k) {
    const double dt = field.times[k + 1] - field.times[k];
    sp += ((pf.p[k + 1] - pf.p[k]) / dt).square().sum() * dx * dt;
    su += ((pf.u[k + 1] - pf.u[k]) / dt).square().sum() * dx * dt;
  }
  return {std::sqrt(sp), std::sqrt(su)};
}

double pressure_equation_residual(const SolutionField& field, double eps, const EosModel& eos,
                                  bool with_source) {
  require_relax_field(field, "pressure_equation_residual");
  if (field.n_times() < 2)
    throw UsageError("pressure_equation_residual: need at least two snapshots");
  const PrimFields pf = primitive_fields(field, eos);
  const double dx = field.grid.dx();
  double acc = 0.0;
  for (int k = 0; k + 1 < field.n_times(); ++k) {
    const double dt = field.times[k + 1] - field.times[k];
    const Eigen::ArrayXd dpdx = spatial_derivative(pf.p[k], field.grid);
    const Eigen::ArrayXd dudx = spatial_derivative(pf.u[k], field.grid);
    for (int i = 0; i < field.grid.n_cells; ++i) {
      const double p = pf.p[k][i];
      const double a = pf.alpha[k][i];
      double res = (pf.p[k + 1][i] - pf.p[k][i]) / dt + pf.u[k][i] * dpdx[i] + (p / a) * dudx[i];
      if (with_source) {
        res += p / (eps * a * eos.rho_l) * (1.0 - eos.rho_l * eos.RT0() / p) *
               (alpha_eq(p, eos) - a);
      }
      acc += res * res * dx * dt;
    }
  }
  return std::sqrt(acc);
}

namespace {

double bump_g(double s) {
  const double t = 1.0 - s * s;
  return t > 0.0 ? t * t * t * t : 0.0;
}

double bump_dg(double s) {
  const double t = 1.0 - s * s;
  return t > 0.0 ? -8.0 * s * t * t * t : 0.0;
}

}  // namespace

double BumpTestFunction::value(double x, double t) const {
  return bump_g((x - x_c) / r_x) * bump_g((t - t_c) / r_t);
}

double BumpTestFunction::ddx(double x, double t) const {
  return bump_dg((x - x_c) / r_x) / r_x * bump_g((t - t_c) / r_t);
}

double BumpTestFunction::ddt(double x, double t) const {
  return bump_g((x - x_c) / r_x) * bump_dg((t - t_c) / r_t) / r_t;
}

double entropy_dissipation_measure(const SolutionField& field, const BumpTestFunction& phi,
                                   const EosModel& eos) {
  const double T = field.times.back();
  if (phi.x_c - phi.r_x < field.grid.x_lo || phi.x_c + phi.r_x > field.grid.x_hi ||
      phi.t_c - phi.r_t < 0.0 || phi.t_c + phi.r_t > T)
    throw UsageError("entropy_dissipation_measure: test function support leaves the domain");

  const PrimFields pf = primitive_fields(field, eos);
  const double dx = field.grid.dx();
  Eigen::ArrayXd integrand(field.n_times());
  for (int k = 0; k < field.n_times(); ++k) {
    const double t = field.times[k];
    double s = 0.0;
    for (int i = 0; i < field.grid.n_cells; ++i) {
      const double x = field.grid.center(i);
      const EqEntropyPair pr = canonical_eq_entropy_pair(pf.p[k][i], pf.u[k][i], eos);
      s += pr.eta * phi.ddt(x, t) + pr.q * phi.ddx(x, t);
    }
    integrand[k] = s * dx;
  }
  return -trapz(field.times, integrand);
}

Eigen::ArrayXd relative_entropy(const SolutionField& field_relax, const SolutionField& field_eq,
                                const EosModel& eos) {
  require_relax_field(field_relax, "relative_entropy");
  if (field_eq.n_comp() != 2)
    throw UsageError("relative_entropy: reference must be a 2-component equilibrium field");
  if (field_relax.grid.n_cells != field_eq.grid.n_cells ||
      field_relax.grid.x_lo != field_eq.grid.x_lo || field_relax.grid.x_hi != field_eq.grid.x_hi)
    throw UsageError("relative_entropy: grid mismatch");
  if (field_relax.n_times() != field_eq.n_times())
    throw UsageError("relative_entropy: snapshot count mismatch");
  for (int k = 0; k < field_relax.n_times(); ++k)
    if (std::abs(field_relax.times[k] - field_eq.times[k]) > 1e-10 * (1.0 + field_relax.times[k]))
      throw UsageError("relative_entropy: snapshot time mismatch");

  const PrimFields pf = primitive_fields(field_relax, eos);
  const double dx = field_relax.grid.dx();
  Eigen::ArrayXd out(field_relax.n_times());
  for (int k = 0; k < field_relax.n_times(); ++k) {
    double sum = 0.0;
    for (int i = 0; i < field_relax.grid.n_cells; ++i) {
      const double rho_e = equilibrium_mixture_density(pf.p[k][i], eos);
      const Eigen::Vector2d Ue(rho_e, rho_e * pf.u[k][i]);
      const Eigen::Vector2d U0(field_eq.states[k](i, 0), field_eq.states[k](i, 1));
      const double eta_e = canonical_eq_entropy(Ue[0], Ue[1], eos);
      const double eta_0 = canonical_eq_entropy(U0[0], U0[1], eos);
      const Eigen::Vector2d grad_0 = canonical_eq_entropy_gradient(U0[0], U0[1], eos);
      sum += eta_e - eta_0 - grad_0.dot(Ue - U0);
    }
    out[k] = sum * dx;
  }
  return out;
}

double fit_loglog_slope(const std::vector<double>& eps_values, const std::vector<double>& errors) {
  if (eps_values.size() != errors.size() || eps_values.size() < 2)
    throw UsageError("fit_loglog_slope: need matching lists with at least two entries");
  const int n = static_cast<int>(eps_values.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> X(n), Y(n);
  for (int i = 0; i < n; ++i) {
    if (!(eps_values[i] > 0.0) || !(errors[i] > 0.0))
      throw DomainError("fit_loglog_slope: values must be positive");
    X[i] = std::log(eps_values[i]);
    Y[i] = std::log(errors[i]);
    sx += X[i];
    sy += Y[i];
  }
  const double mx = sx / n, my = sy / n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (X[i] - mx) * (Y[i] - my);
    den += (X[i] - mx) * (X[i] - mx);
  }
  return num / den;
}

namespace {

// L2(x,t) norm of the difference of a primitive component between two runs
// on the same grid and snapshot times.
double field_error(const std::vector<Eigen::ArrayXd>& a, const std::vector<Eigen::ArrayXd>& b,
                   const std::vector<double>& times, double dx) {
  Eigen::ArrayXd l2(static_cast<int>(a.size()));
  for (size_t k = 0; k < a.size(); ++k) l2[static_cast<int>(k)] = space_l2(a[k] - b[k], dx);
  return std::sqrt(trapz(times, l2.square()));
}

}  // namespace

RateReport rate_study(const PresetSpec& preset, const std::vector<double>& eps_list,
                      const Grid1D& grid, const SolverConfig& cfg, const EosModel& eos,
                      const RateStudyOptions& opts) {
  if (eps_list.size() < 3)
    throw UsageError("rate_study: need at least three eps values");
  for (size_t k = 0; k + 1 < eps_list.size(); ++k)
    if (!(eps_list[k] > eps_list[k + 1]))
      throw UsageError("rate_study: eps values must be strictly decreasing");

  RateReport rep;
  rep.eps_values = eps_list;

  Eigen::ArrayXd p0, u0;
  preset_pu_profile(preset, grid, eos, p0, u0);
  const std::vector<PrimitiveState> ic = preset_initial_condition(preset, grid, eos);

  const SolutionField ref = eq_run(p0, u0, cfg, grid, eos);
  const PrimFields ref_pf = primitive_fields(ref, eos);
  const double dx = grid.dx();

  std::vector<SolutionField> runs;
  for (double eps : eps_list) {
    SolverConfig c = cfg;
    c.eps = eps;
    runs.push_back(run(ic, c, grid, eos));
  }

  for (size_t k = 0; k < runs.size(); ++k) {
    const PrimFields pf = primitive_fields(runs[k], eos);
    rep.errors_p.push_back(field_error(pf.p, ref_pf.p, ref.times, dx));
    rep.errors_u.push_back(field_error(pf.u, ref_pf.u, ref.times, dx));
    const NormSeries res = make_norm_series(
        "alpha_res", runs[k].times, relaxation_residual_field(runs[k], eos), dx);
    rep.residual_constant.push_back(res.l2_spacetime * res.l2_spacetime / eps_list[k]);
  }

  rep.slope_p = fit_loglog_slope(eps_list, rep.errors_p);
  rep.slope_u = fit_loglog_slope(eps_list, rep.errors_u);

  if (opts.precheck) {
    rep.precheck_ran = true;
    if (grid.n_cells % 2 != 0)
      throw UsageError("rate_study: precheck requires an even cell count");
    Grid1D half = grid;
    half.n_cells = grid.n_cells / 2;
    const std::vector<PrimitiveState> ic_h = preset_initial_condition(preset, half, eos);
    Eigen::ArrayXd p0h, u0h;
    preset_pu_profile(preset, half, eos, p0h, u0h);
    SolverConfig c = cfg;
    c.eps = eps_list.front();
    const SolutionField run_h = hrm::run(ic_h, c, half, eos);
    const SolutionField ref_h = eq_run(p0h, u0h, cfg, half, eos);
    const PrimFields pf_h = primitive_fields(run_h, eos);
    const PrimFields rf_h = primitive_fields(ref_h, eos);
    const double err_p_h = field_error(pf_h.p, rf_h.p, run_h.times, half.dx());
    const double err_u_h = field_error(pf_h.u, rf_h.u, run_h.times, half.dx());
    rep.precheck_scheme_err_p = std::abs(rep.errors_p.front() - err_p_h);
    rep.precheck_scheme_err_u = std::abs(rep.errors_u.front() - err_u_h);
    rep.precheck_pass = rep.precheck_scheme_err_p < 0.5 * rep.errors_p.front() &&
                        rep.precheck_scheme_err_u < 0.5 * rep.errors_u.front();
  } else {
    rep.precheck_pass = true;
  }

  const bool slopes_ok = rep.slope_p >= opts.slope_min && rep.slope_p <= opts.slope_max &&
                         rep.slope_u >= opts.slope_min && rep.slope_u <= opts.slope_max;
  if (opts.precheck && !rep.precheck_pass)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = slopes_ok ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace hrm

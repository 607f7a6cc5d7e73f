#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hrm/equilibrium.hpp"
#include "hrm/presets.hpp"
#include "hrm/solver.hpp"

namespace hrm {

/// Per-cell primitive fields extracted from a solution; for 2-component
/// (equilibrium) fields alpha is the manifold value alpha_eq(p).
struct PrimFields {
  std::vector<Eigen::ArrayXd> p;
  std::vector<Eigen::ArrayXd> u;
  std::vector<Eigen::ArrayXd> alpha;
};
PrimFields primitive_fields(const SolutionField& field, const EosModel& eos);

/// Central differences in x respecting the field's boundary treatment
/// (periodic wrap, or one-sided at outflow edges).
Eigen::ArrayXd spatial_derivative(const Eigen::ArrayXd& f, const Grid1D& grid);

struct NormSeries {
  std::string label;
  std::vector<double> times;
  Eigen::ArrayXd l2_space;  // per snapshot, midpoint rule in x
  double l2_spacetime = 0.0;  // sqrt of the trapezoid-in-t integral of l2_space^2
  double linf = 0.0;
};
NormSeries make_norm_series(const std::string& label, const std::vector<double>& times,
                            const std::vector<Eigen::ArrayXd>& values, double dx);

/// alpha - alpha_eq(p), per cell and snapshot.
std::vector<Eigen::ArrayXd> relaxation_residual_field(const SolutionField& field,
                                                      const EosModel& eos);

struct REpsField {
  std::vector<Eigen::ArrayXd> r;      // (alpha - alpha_eq(p)) / eps
  std::vector<Eigen::ArrayXd> dr_dx;  // central differences of r
};
REpsField r_eps_field(const SolutionField& field, double eps, const EosModel& eos);

struct QEpsField {
  std::vector<Eigen::ArrayXd> q;  // (rho_g(p) - rho_l) * R_eps
  double max_identity_error = 0.0;  // max |rho_eq(p) + eps Q - rho_m|
};
QEpsField q_eps_field(const SolutionField& field, double eps, const EosModel& eos);

/// Sum of eta(U_i) dx per snapshot.
Eigen::ArrayXd total_entropy_series(const SolutionField& field, const EosModel& eos);

struct GradientNormSeries {
  std::vector<double> times;
  Eigen::ArrayXd dxp;  // ||dp/dx||_{L2(x)} per snapshot
  Eigen::ArrayXd dxu;
};
GradientNormSeries gradient_norm_series(const SolutionField& field, const EosModel& eos);

struct TimeDerivativeNorms {
  double dtp;  // ||dp/dt||_{L2(t,x)} from forward differences between snapshots
  double dtu;
};
TimeDerivativeNorms time_derivative_norms(const SolutionField& field, const EosModel& eos);

/// Space-time L2 norm of the discrete residual of the pressure evolution
/// equation; set with_source = false to ablate the stiff source term.
double pressure_equation_residual(const SolutionField& field, double eps, const EosModel& eos,
                                  bool with_source = true);

/// Compactly supported polynomial bump, product of (1 - s^2)^4 factors.
struct BumpTestFunction {
  double x_c;
  double t_c;
  double r_x;
  double r_t;

  double value(double x, double t) const;
  double ddx(double x, double t) const;
  double ddt(double x, double t) const;
};

/// Weak pairing <D, phi> = -int int (eta_eq d_t phi + q_eq d_x phi) dx dt of
/// the equilibrium-pair dissipation measure along the (projected) solution.
double entropy_dissipation_measure(const SolutionField& field, const BumpTestFunction& phi,
                                   const EosModel& eos);

/// Relative entropy of the equilibrium projection of a relaxation run
/// against an equilibrium reference run, per shared snapshot.
Eigen::ArrayXd relative_entropy(const SolutionField& field_relax, const SolutionField& field_eq,
                                const EosModel& eos);

/// Least-squares slope of log(err) against log(eps).
double fit_loglog_slope(const std::vector<double>& eps_values, const std::vector<double>& errors);

enum class Verdict { pass, fail, inconclusive };

struct RateReport {
  std::vector<double> eps_values;
  std::vector<double> errors_p;
  std::vector<double> errors_u;
  double slope_p = 0.0;
  double slope_u = 0.0;
  std::vector<double> residual_constant;  // ||alpha - alpha_eq||^2_{L2(x,t)} / eps
  bool precheck_ran = false;
  bool precheck_pass = false;
  double precheck_scheme_err_p = 0.0;  // grid sensitivity of the measured error, largest eps
  double precheck_scheme_err_u = 0.0;
  Verdict verdict = Verdict::fail;
};

struct RateStudyOptions {
  bool precheck = true;
  double slope_min = 0.45;
  double slope_max = 1.3;
};

/// Runs the relaxation solver per eps and the equilibrium solver once from
/// the equilibrium-projected initial data; fits the error slopes in eps.
RateReport rate_study(const PresetSpec& preset, const std::vector<double>& eps_list,
                      const Grid1D& grid, const SolverConfig& cfg, const EosModel& eos,
                      const RateStudyOptions& opts = {});

}  // namespace hrm

#pragma once

#include <Eigen/Core>

#include "hrm/error.hpp"

namespace hrm {

enum class AlphaEqKind { affine_clamp, logistic };

/// Equilibrium void-fraction map alpha_eq(p); a pluggable monotone
/// non-increasing family. The affine form is clamped to [alpha_min,
/// alpha_max]; the logistic form is smooth everywhere and matches the
/// affine level c0 and slope c1 at the midline.
struct AlphaEqModel {
  AlphaEqKind kind = AlphaEqKind::affine_clamp;
  double c0 = 0.5;
  double c1 = -0.05;
  double alpha_min = 0.01;
  double alpha_max = 0.99;

  double value(double p) const;
  double deriv(double p) const;
  double deriv2(double p) const;
  bool clamped_at(double p) const;

  void validate() const;
};

/// Immutable thermodynamic closure: ideal isothermal gas, incompressible
/// liquid, and an equilibrium void-fraction map on a declared operating
/// pressure range.
struct EosModel {
  double R = 1.0;
  double T0 = 1.0;
  double rho_l = 10.0;
  double A_g = 0.0;
  double A_l = 0.0;
  AlphaEqModel alpha_model{};
  double p_lo = 0.5;
  double p_hi = 8.0;

  double RT0() const { return R * T0; }
  void validate() const;
};

struct PrimitiveState {
  double p;
  double u;
  double alpha;
};

struct ConservedState {
  double rho_m;
  double m;
  double Gamma;

  Eigen::Vector3d vec() const { return {rho_m, m, Gamma}; }
  static ConservedState from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
};

void validate_state(const PrimitiveState& V);
void validate_state(const ConservedState& U, const EosModel& eos);

double gas_density(double p, const EosModel& eos);
double alpha_eq(double p, const EosModel& eos);
double alpha_eq_deriv(double p, const EosModel& eos);
double alpha_eq_deriv2(double p, const EosModel& eos);

double mixture_density(double p, double alpha, const EosModel& eos);
double equilibrium_mixture_density(double p, const EosModel& eos);

/// d(rho_eq)/dp; equals 1/a_e^2 and is strictly positive for admissible models.
double equilibrium_density_slope(double p, const EosModel& eos);

/// Inverse of equilibrium_mixture_density on [p_lo, p_hi].
/// Safeguarded Newton-bisection; |rho_eq(p) - rho| <= 1e-12 * rho.
/// p_guess, when inside the range, warm-starts the iteration.
double invert_equilibrium_density(double rho, const EosModel& eos, double p_guess = -1.0);

ConservedState cons_from_prim(const PrimitiveState& V, const EosModel& eos);
PrimitiveState prim_from_cons(const ConservedState& U, const EosModel& eos);

/// Jacobian of the map (p, u, alpha) -> (rho_m, m, Gamma).
Eigen::Matrix3d jacobian_prim_to_cons(const PrimitiveState& V, const EosModel& eos);

struct SoundSpeeds {
  double af2;  // frozen sound speed squared, at the given alpha
  double ae2;  // equilibrium sound speed squared, from the map at p
};
SoundSpeeds sound_speeds(double p, double alpha, const EosModel& eos);

struct TransportCoefficients {
  double A;
  double B;
  double B1;
};
TransportCoefficients error_transport_coefficients(double p, double alpha, const EosModel& eos);

struct SubcharReport {
  double min_margin = 0.0;  // min over grid of a_f^2 - a_e^2 at alpha = alpha_eq(p)
  double argmin_p = 0.0;
  bool pass = false;
  bool equal_density_in_range = false;  // operating range crosses rho_g = rho_l
};
SubcharReport validate_subcharacteristic(const EosModel& eos, const Eigen::ArrayXd& p_grid);

/// A_g value that makes the entropy slope d(eta)/d(Gamma) vanish on the
/// equilibrium manifold at p_ref (see entropy.hpp: criticality_offset).
double calibrated_gas_constant(double p_ref, const EosModel& eos);

}  // namespace hrm

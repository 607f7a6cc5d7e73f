#pragma once

#include <Eigen/Core>

#include "hrm/eos.hpp"

namespace hrm {

/// Entropy pair for the relaxation system. eta is jointly convex in the
/// conserved variables (positive semidefinite Hessian with a one-dimensional
/// kernel along the incompressible-liquid direction) and strictly convex in
/// Gamma; the flux includes the pressure-work term needed for the pair to
/// close exactly: q = u * (eta + p / T0).
struct EntropyEval {
  double eta;
  double q;
  double deta_dGamma;
  Eigen::Matrix3d hessian;
};

double entropy_density(const ConservedState& U, const EosModel& eos);
double entropy_flux(const ConservedState& U, const EosModel& eos);
Eigen::Vector3d entropy_gradient(const ConservedState& U, const EosModel& eos);
Eigen::Matrix3d entropy_hessian(const ConservedState& U, const EosModel& eos);
EntropyEval evaluate_entropy(const ConservedState& U, const EosModel& eos);

/// 1/2 d^T D^2eta(U) d for a spatial-gradient vector d; non-negative.
double first_order_entropy_density(const ConservedState& U, const Eigen::Vector3d& dU_dx,
                                   const EosModel& eos);

/// -(1/eps) * deta/dGamma * (alpha - alpha_eq(p)); the source contribution
/// to d(eta)/dt.
double entropy_production_rate(const ConservedState& U, double eps, const EosModel& eos);

/// deta/dGamma evaluated on the alpha_eq manifold at pressure p. Depends on
/// p only; zero exactly when A_g is calibrated (see calibrated_gas_constant).
double criticality_offset(double p, const EosModel& eos);

/// Gas density at which deta/dGamma vanishes (the entropy-critical manifold).
double critical_gas_density(const EosModel& eos);

/// Gamma at fixed rho_m on the entropy-critical manifold; requires rho_m < rho_l.
double critical_gamma(double rho_m, const EosModel& eos);

// --- Restriction to the equilibrium manifold, as a function of the
// --- equilibrium conserved variables (rho, mom) = (rho_eq(p), rho_eq(p) u).

/// Gamma on the equilibrium manifold as a function of rho.
double equilibrium_gamma(double rho, const EosModel& eos);

double equilibrium_entropy(double rho, double mom, const EosModel& eos);
double equilibrium_entropy_flux(double rho, double mom, const EosModel& eos);
Eigen::Vector2d equilibrium_entropy_gradient(double rho, double mom, const EosModel& eos);
Eigen::Matrix2d equilibrium_entropy_hessian(double rho, double mom, const EosModel& eos);

struct EqEntropyPair {
  double eta;
  double q;
};

/// Restricted pair evaluated from (p, u).
EqEntropyPair equilibrium_entropy_pair(double p, double u, const EosModel& eos);

/// Companion pair eta2 = eta + C rho u, q2 = q + C (rho u^2 + p); an exact
/// affine shift by the momentum balance, convex for every C.
EqEntropyPair equilibrium_entropy_pair_second(double p, double u, double C, const EosModel& eos);

// --- Canonical entropy pair of the equilibrium Euler system:
// --- eta = j^2/(2 rho) + rho e(rho) with e'(rho) = P(rho)/rho^2 and
// --- q = u (eta + P(rho)). An exact pair, strictly convex whenever
// --- d(rho_eq)/dp > 0; unlike the restriction above it does not depend on
// --- the calibration of A_g. Used for the dissipation measure and the
// --- relative-entropy rate machinery.

double canonical_eq_entropy(double rho, double mom, const EosModel& eos);
double canonical_eq_entropy_flux(double rho, double mom, const EosModel& eos);
Eigen::Vector2d canonical_eq_entropy_gradient(double rho, double mom, const EosModel& eos);
Eigen::Matrix2d canonical_eq_entropy_hessian(double rho, double mom, const EosModel& eos);
EqEntropyPair canonical_eq_entropy_pair(double p, double u, const EosModel& eos);

}  // namespace hrm

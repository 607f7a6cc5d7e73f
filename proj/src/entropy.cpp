#include "hrm/entropy.hpp"

#include <cmath>

namespace hrm {

namespace {

struct Parts {
  double W;      // rho_l - rho_m + Gamma = rho_l * alpha
  double rho_g;  // Gamma / alpha
  double u;
};

Parts parts(const ConservedState& U, const EosModel& eos) {
  validate_state(U, eos);
  const double W = eos.rho_l - U.rho_m + U.Gamma;
  return {W, eos.rho_l * U.Gamma / W, U.m / U.rho_m};
}

}  // namespace

double entropy_density(const ConservedState& U, const EosModel& eos) {
  const Parts s = parts(U, eos);
  return 0.5 * U.m * U.m / U.rho_m + U.Gamma * eos.R * std::log(s.rho_g) - U.Gamma * eos.A_g -
         (U.rho_m - U.Gamma) * eos.A_l;
}

double entropy_flux(const ConservedState& U, const EosModel& eos) {
  const Parts s = parts(U, eos);
  const double p = eos.RT0() * s.rho_g;
  return s.u * (entropy_density(U, eos) + p / eos.T0);
}

Eigen::Vector3d entropy_gradient(const ConservedState& U, const EosModel& eos) {
  const Parts s = parts(U, eos);
  const double R = eos.R;
  Eigen::Vector3d g;
  g[0] = -0.5 * s.u * s.u + U.Gamma * R / s.W - eos.A_l;
  g[1] = s.u;
  g[2] = R * std::log(s.rho_g) + R * (s.W - U.Gamma) / s.W - eos.A_g + eos.A_l;
  return g;
}

Eigen::Matrix3d entropy_hessian(const ConservedState& U, const EosModel& eos) {
  const Parts s = parts(U, eos);
  const double R = eos.R;
  // Kinetic part: rank-1 along (-u, 1, 0); potential part: rank-1 along (Gamma, 0, W - Gamma).
  Eigen::Vector3d v(-s.u, 1.0, 0.0);
  Eigen::Vector3d w(U.Gamma, 0.0, s.W - U.Gamma);
  Eigen::Matrix3d H = (1.0 / U.rho_m) * v * v.transpose() +
                      (R / (U.Gamma * s.W * s.W)) * w * w.transpose();
  return H;
}

EntropyEval evaluate_entropy(const ConservedState& U, const EosModel& eos) {
  EntropyEval e;
  e.eta = entropy_density(U, eos);
  e.q = entropy_flux(U, eos);
  e.deta_dGamma = entropy_gradient(U, eos)[2];
  e.hessian = entropy_hessian(U, eos);
  return e;
}

double first_order_entropy_density(const ConservedState& U, const Eigen::Vector3d& dU_dx,
                                   const EosModel& eos) {
  return 0.5 * dU_dx.dot(entropy_hessian(U, eos) * dU_dx);
}

double entropy_production_rate(const ConservedState& U, double eps, const EosModel& eos) {
  if (!(eps > 0.0)) throw DomainError("entropy_production_rate: eps must be positive");
  const PrimitiveState V = prim_from_cons(U, eos);
  const double dEta_dGamma = entropy_gradient(U, eos)[2];
  return -(dEta_dGamma * (V.alpha - alpha_eq(V.p, eos))) / eps;
}

double criticality_offset(double p, const EosModel& eos) {
  const double rho_g = gas_density(p, eos);
  return eos.R * std::log(rho_g) + eos.R * (1.0 - rho_g / eos.rho_l) - eos.A_g + eos.A_l;
}

double critical_gas_density(const EosModel& eos) {
  // Solve R log(x) + R (1 - x/rho_l) = A_g - A_l on (0, rho_l); the left side
  // is strictly increasing there.
  const double target = (eos.A_g - eos.A_l) / eos.R;
  auto g = [&](double x) { return std::log(x) + 1.0 - x / eos.rho_l - target; };
  double hi = eos.rho_l * (1.0 - 1e-12);
  if (!(g(hi) > 0.0))
    throw ModelError("critical_gas_density: no critical gas density below rho_l");
  double lo = hi;
  while (g(lo) > 0.0) lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) hi = mid; else lo = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double critical_gamma(double rho_m, const EosModel& eos) {
  if (!(rho_m < eos.rho_l))
    throw DomainError("critical_gamma: requires rho_m < rho_l");
  const double rgs = critical_gas_density(eos);
  return rgs * (eos.rho_l - rho_m) / (eos.rho_l - rgs);
}

double equilibrium_gamma(double rho, const EosModel& eos) {
  const double p = invert_equilibrium_density(rho, eos);
  return gas_density(p, eos) * alpha_eq(p, eos);
}

namespace {

ConservedState lift(double rho, double mom, const EosModel& eos, double& p_out) {
  p_out = invert_equilibrium_density(rho, eos);
  return {rho, mom, gas_density(p_out, eos) * alpha_eq(p_out, eos)};
}

}  // namespace

double equilibrium_entropy(double rho, double mom, const EosModel& eos) {
  double p;
  return entropy_density(lift(rho, mom, eos, p), eos);
}

double equilibrium_entropy_flux(double rho, double mom, const EosModel& eos) {
  double p;
  const ConservedState U = lift(rho, mom, eos, p);
  return (mom / rho) * (entropy_density(U, eos) + p / eos.T0);
}

Eigen::Vector2d equilibrium_entropy_gradient(double rho, double mom, const EosModel& eos) {
  double p;
  const ConservedState U = lift(rho, mom, eos, p);
  const Eigen::Vector3d g = entropy_gradient(U, eos);
  const double lambda_p = alpha_eq(p, eos) / eos.RT0() + gas_density(p, eos) * alpha_eq_deriv(p, eos);
  const double dGamma_drho = lambda_p / equilibrium_density_slope(p, eos);
  return {g[0] + g[2] * dGamma_drho, g[1]};
}

Eigen::Matrix2d equilibrium_entropy_hessian(double rho, double mom, const EosModel& eos) {
  double p;
  const ConservedState U = lift(rho, mom, eos, p);
  const Eigen::Vector3d g = entropy_gradient(U, eos);
  const Eigen::Matrix3d H = entropy_hessian(U, eos);

  const double RT0 = eos.RT0();
  const double rho_g = gas_density(p, eos);
  const double a1 = alpha_eq_deriv(p, eos);
  const double a2 = alpha_eq_deriv2(p, eos);
  const double lambda_p = alpha_eq(p, eos) / RT0 + rho_g * a1;
  const double lambda_pp = 2.0 * a1 / RT0 + rho_g * a2;
  const double D = equilibrium_density_slope(p, eos);       // d rho_eq / dp
  const double Dp = a2 * (rho_g - eos.rho_l) + 2.0 * a1 / RT0;
  const double dp_drho = 1.0 / D;
  const double d2p_drho2 = -Dp / (D * D * D);
  const double dGamma_drho = lambda_p * dp_drho;
  const double d2Gamma_drho2 = lambda_pp * dp_drho * dp_drho + lambda_p * d2p_drho2;

  Eigen::Matrix<double, 3, 2> T;
  T << 1.0, 0.0,
       0.0, 1.0,
       dGamma_drho, 0.0;
  Eigen::Matrix2d Heq = T.transpose() * H * T;
  Heq(0, 0) += g[2] * d2Gamma_drho2;
  return Heq;
}

EqEntropyPair equilibrium_entropy_pair(double p, double u, const EosModel& eos) {
  const double rho = equilibrium_mixture_density(p, eos);
  const ConservedState U{rho, rho * u, gas_density(p, eos) * alpha_eq(p, eos)};
  const double eta = entropy_density(U, eos);
  return {eta, u * (eta + p / eos.T0)};
}

EqEntropyPair equilibrium_entropy_pair_second(double p, double u, double C, const EosModel& eos) {
  const double rho = equilibrium_mixture_density(p, eos);
  EqEntropyPair pr = equilibrium_entropy_pair(p, u, eos);
  return {pr.eta + C * rho * u, pr.q + C * (rho * u * u + p)};
}

namespace {

// Specific internal energy e with e'(rho) = P(rho)/rho^2, as the integral
// int_{p_lo}^{p} pi rho_eq'(pi) / rho_eq(pi)^2 dpi (substituting rho = rho_eq(pi)).
// Fixed 32-node Gauss-Legendre; the integrand is smooth on the operating range.
double internal_energy_of_p(double p, const EosModel& eos) {
  static const double kNodes[16] = {
      0.048307665687738316, 0.144471961582796493, 0.239287362252137075, 0.331868602282127650,
      0.421351276130635345, 0.506899908932229390, 0.587715757240762329, 0.663044266930215201,
      0.732182118740289680, 0.794483795967942407, 0.849367613732569970, 0.896321155766052124,
      0.934906075937739689, 0.964762255587506430, 0.985611511545268335, 0.997263861849481564};
  static const double kWeights[16] = {
      0.096540088514727801, 0.095638720079274859, 0.093844399080804566, 0.091173878695763885,
      0.087652093004403811, 0.083311924226946755, 0.078193895787070306, 0.072345794108848506,
      0.065822222776361847, 0.058684093478535547, 0.050998059262376176, 0.042835898022226681,
      0.034273862913021433, 0.025392065309262059, 0.016274394730905671, 0.007018610009470097};
  const double a = eos.p_lo, b = p;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto f = [&](double pi) {
    const double re = equilibrium_mixture_density(pi, eos);
    return pi * equilibrium_density_slope(pi, eos) / (re * re);
  };
  double s = 0.0;
  for (int i = 0; i < 16; ++i)
    s += kWeights[i] * (f(mid - half * kNodes[i]) + f(mid + half * kNodes[i]));
  return half * s;
}

}  // namespace

double canonical_eq_entropy(double rho, double mom, const EosModel& eos) {
  const double p = invert_equilibrium_density(rho, eos);
  return 0.5 * mom * mom / rho + rho * internal_energy_of_p(p, eos);
}

double canonical_eq_entropy_flux(double rho, double mom, const EosModel& eos) {
  const double p = invert_equilibrium_density(rho, eos);
  const double eta = 0.5 * mom * mom / rho + rho * internal_energy_of_p(p, eos);
  return (mom / rho) * (eta + p);
}

Eigen::Vector2d canonical_eq_entropy_gradient(double rho, double mom, const EosModel& eos) {
  const double p = invert_equilibrium_density(rho, eos);
  const double u = mom / rho;
  return {-0.5 * u * u + internal_energy_of_p(p, eos) + p / rho, u};
}

Eigen::Matrix2d canonical_eq_entropy_hessian(double rho, double mom, const EosModel& eos) {
  const double p = invert_equilibrium_density(rho, eos);
  const double u = mom / rho;
  const double hpp = 1.0 / (equilibrium_density_slope(p, eos) * rho);  // P'(rho)/rho
  Eigen::Matrix2d H;
  H << u * u / rho + hpp, -u / rho, -u / rho, 1.0 / rho;
  return H;
}

EqEntropyPair canonical_eq_entropy_pair(double p, double u, const EosModel& eos) {
  const double rho = equilibrium_mixture_density(p, eos);
  const double eta = 0.5 * rho * u * u + rho * internal_energy_of_p(p, eos);
  return {eta, u * (eta + p)};
}

}  // namespace hrm

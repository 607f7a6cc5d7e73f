#include "hrm/eos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hrm {

double AlphaEqModel::value(double p) const {
  switch (kind) {
    case AlphaEqKind::affine_clamp:
      return std::clamp(c0 + c1 * p, alpha_min, alpha_max);
    case AlphaEqKind::logistic: {
      const double span = alpha_max - alpha_min;
      const double k = -4.0 * c1 / span;
      const double pc = (0.5 * (alpha_min + alpha_max) - c0) / c1;
      return alpha_min + span / (1.0 + std::exp(k * (p - pc)));
    }
  }
  throw Error("AlphaEqModel: unknown kind");
}

double AlphaEqModel::deriv(double p) const {
  switch (kind) {
    case AlphaEqKind::affine_clamp:
      return clamped_at(p) ? 0.0 : c1;
    case AlphaEqKind::logistic: {
      const double span = alpha_max - alpha_min;
      const double k = -4.0 * c1 / span;
      const double pc = (0.5 * (alpha_min + alpha_max) - c0) / c1;
      const double s = 1.0 / (1.0 + std::exp(k * (p - pc)));
      return -span * k * s * (1.0 - s);
    }
  }
  throw Error("AlphaEqModel: unknown kind");
}

double AlphaEqModel::deriv2(double p) const {
  switch (kind) {
    case AlphaEqKind::affine_clamp:
      return 0.0;
    case AlphaEqKind::logistic: {
      const double span = alpha_max - alpha_min;
      const double k = -4.0 * c1 / span;
      const double pc = (0.5 * (alpha_min + alpha_max) - c0) / c1;
      const double s = 1.0 / (1.0 + std::exp(k * (p - pc)));
      return span * k * k * s * (1.0 - s) * (1.0 - 2.0 * s);
    }
  }
  throw Error("AlphaEqModel: unknown kind");
}

bool AlphaEqModel::clamped_at(double p) const {
  if (kind != AlphaEqKind::affine_clamp) return false;
  const double raw = c0 + c1 * p;
  return raw <= alpha_min || raw >= alpha_max;
}

void AlphaEqModel::validate() const {
  if (!(alpha_min > 0.0 && alpha_max < 1.0 && alpha_min < alpha_max))
    throw ConfigError("AlphaEqModel: need 0 < alpha_min < alpha_max < 1");
  if (c1 > 0.0)
    throw ConfigError("AlphaEqModel: slope c1 must be <= 0 (monotone non-increasing map)");
  if (kind == AlphaEqKind::logistic && !(c1 < 0.0))
    throw ConfigError("AlphaEqModel: logistic variant requires a strictly negative slope");
}

void EosModel::validate() const {
  if (!(R > 0.0)) throw ConfigError("EosModel: R must be positive");
  if (!(T0 > 0.0)) throw ConfigError("EosModel: T0 must be positive");
  if (!(rho_l > 0.0)) throw ConfigError("EosModel: rho_l must be positive");
  if (!(p_lo > 0.0 && p_hi > p_lo)) throw ConfigError("EosModel: need 0 < p_lo < p_hi");
  alpha_model.validate();
}

void validate_state(const PrimitiveState& V) {
  if (!(V.p > 0.0) || !std::isfinite(V.p)) throw DomainError("PrimitiveState: pressure must be positive");
  if (!(V.alpha > 0.0 && V.alpha < 1.0)) throw DomainError("PrimitiveState: alpha must lie in (0,1)");
  if (!std::isfinite(V.u)) throw DomainError("PrimitiveState: velocity must be finite");
}

void validate_state(const ConservedState& U, const EosModel& eos) {
  if (!(U.rho_m > 0.0) || !std::isfinite(U.rho_m)) throw StateError("ConservedState: rho_m must be positive");
  if (!(U.Gamma > 0.0) || !std::isfinite(U.Gamma)) throw StateError("ConservedState: Gamma must be positive");
  if (!(eos.rho_l - U.rho_m + U.Gamma > 0.0))
    throw StateError("ConservedState: rho_l - rho_m + Gamma must be positive (alpha > 0)");
  if (!std::isfinite(U.m)) throw StateError("ConservedState: momentum must be finite");
}

double gas_density(double p, const EosModel& eos) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("gas_density: pressure must be positive");
  return p / eos.RT0();
}

double alpha_eq(double p, const EosModel& eos) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("alpha_eq: pressure must be positive");
  return eos.alpha_model.value(p);
}

double alpha_eq_deriv(double p, const EosModel& eos) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("alpha_eq_deriv: pressure must be positive");
  return eos.alpha_model.deriv(p);
}

double alpha_eq_deriv2(double p, const EosModel& eos) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("alpha_eq_deriv2: pressure must be positive");
  return eos.alpha_model.deriv2(p);
}

double mixture_density(double p, double alpha, const EosModel& eos) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("mixture_density: alpha must lie in (0,1)");
  return alpha * gas_density(p, eos) + (1.0 - alpha) * eos.rho_l;
}

double equilibrium_mixture_density(double p, const EosModel& eos) {
  const double a = alpha_eq(p, eos);
  return a * gas_density(p, eos) + (1.0 - a) * eos.rho_l;
}

double equilibrium_density_slope(double p, const EosModel& eos) {
  const double rho_g = gas_density(p, eos);
  return alpha_eq_deriv(p, eos) * (rho_g - eos.rho_l) + alpha_eq(p, eos) / eos.RT0();
}

double invert_equilibrium_density(double rho, const EosModel& eos, double p_guess) {
  constexpr double rtol = 1e-12;
  constexpr int max_iter = 200;

  double lo = eos.p_lo, hi = eos.p_hi;
  const double rho_lo = equilibrium_mixture_density(lo, eos);
  const double rho_hi = equilibrium_mixture_density(hi, eos);
  if (rho < rho_lo * (1.0 - 1e-12) || rho > rho_hi * (1.0 + 1e-12))
    throw DomainError("invert_equilibrium_density: density outside attainable range");
  if (rho <= rho_lo) return lo;
  if (rho >= rho_hi) return hi;

  double p = (p_guess > lo && p_guess < hi) ? p_guess : 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double f = equilibrium_mixture_density(p, eos) - rho;
    if (std::abs(f) <= rtol * rho) return p;
    if (f > 0.0) hi = p; else lo = p;
    const double df = equilibrium_density_slope(p, eos);
    double p_next = p - f / df;
    if (!(p_next > lo && p_next < hi)) p_next = 0.5 * (lo + hi);
    if (p_next == p) return p;  // interval exhausted at double precision
    p = p_next;
  }
  throw NumericsError("invert_equilibrium_density: no convergence after 200 iterations");
}

ConservedState cons_from_prim(const PrimitiveState& V, const EosModel& eos) {
  validate_state(V);
  const double rho_m = mixture_density(V.p, V.alpha, eos);
  return {rho_m, rho_m * V.u, gas_density(V.p, eos) * V.alpha};
}

PrimitiveState prim_from_cons(const ConservedState& U, const EosModel& eos) {
  validate_state(U, eos);
  const double alpha = (eos.rho_l - U.rho_m + U.Gamma) / eos.rho_l;
  return {eos.RT0() * U.Gamma / alpha, U.m / U.rho_m, alpha};
}

Eigen::Matrix3d jacobian_prim_to_cons(const PrimitiveState& V, const EosModel& eos) {
  validate_state(V);
  const double rho_g = gas_density(V.p, eos);
  const double rho_m = mixture_density(V.p, V.alpha, eos);
  const double a_rt = V.alpha / eos.RT0();
  Eigen::Matrix3d J;
  J << a_rt, 0.0, rho_g - eos.rho_l,
       V.u * a_rt, rho_m, V.u * (rho_g - eos.rho_l),
       a_rt, 0.0, rho_g;
  return J;
}

SoundSpeeds sound_speeds(double p, double alpha, const EosModel& eos) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("sound_speeds: alpha must lie in (0,1)");
  const double af2 = eos.RT0() / alpha;
  const double denom = equilibrium_density_slope(p, eos);
  if (!(denom > 0.0))
    throw ModelError("sound_speeds: equilibrium map yields non-positive d(rho_eq)/dp");
  return {af2, 1.0 / denom};
}

TransportCoefficients error_transport_coefficients(double p, double alpha, const EosModel& eos) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("error_transport_coefficients: alpha must lie in (0,1)");
  const double rho_g = gas_density(p, eos);
  const double a_eq = alpha_eq(p, eos);
  const double lambda_p = a_eq / eos.RT0() + rho_g * alpha_eq_deriv(p, eos);
  const double B1 = p / (alpha * eos.rho_l) * (1.0 - eos.rho_l * eos.RT0() / p);
  return {lambda_p * p / alpha - rho_g * a_eq, -lambda_p * B1, B1};
}

SubcharReport validate_subcharacteristic(const EosModel& eos, const Eigen::ArrayXd& p_grid) {
  SubcharReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p_grid.size(); ++i) {
    const double p = p_grid[i];
    const double a = alpha_eq(p, eos);
    double margin;
    try {
      const auto ss = sound_speeds(p, a, eos);
      margin = ss.af2 - ss.ae2;
    } catch (const ModelError&) {
      margin = -std::numeric_limits<double>::infinity();
    }
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.argmin_p = p;
    }
  }
  rep.pass = rep.min_margin > 0.0;
  const double p_equal = eos.rho_l * eos.RT0();
  rep.equal_density_in_range = (p_equal >= eos.p_lo && p_equal <= eos.p_hi);
  return rep;
}

double calibrated_gas_constant(double p_ref, const EosModel& eos) {
  const double rho_g = gas_density(p_ref, eos);
  return eos.R * std::log(rho_g) + eos.R * (1.0 - rho_g / eos.rho_l) + eos.A_l;
}

}  // namespace hrm

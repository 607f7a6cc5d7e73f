#pragma once

#include <Eigen/Core>

#include "hrm/solver.hpp"

namespace hrm {

/// Conservative state of the equilibrium Euler system: rho = rho_eq(p),
/// mom = rho_eq(p) u.
struct EqState {
  double rho;
  double mom;
};

Eigen::Vector2d eq_flux(const EqState& W, const EosModel& eos);

/// |u| + a_e with the pressure recovered from rho.
double eq_max_signal_speed(const EqState& W, const EosModel& eos);

Eigen::Vector2d eq_numerical_flux(const EqState& WL, const EqState& WR, const EosModel& eos);

/// Explicit Rusanov march of the equilibrium Euler system from a (p, u)
/// profile; components are {"rho", "mom"}. The eps and source settings of
/// cfg are ignored; grid, cfl, t_end and the record cadence are shared with
/// the relaxation solver so paired experiments see the same discretization.
SolutionField eq_run(const Eigen::ArrayXd& p0, const Eigen::ArrayXd& u0, const SolverConfig& cfg,
                     const Grid1D& grid, const EosModel& eos);

}  // namespace hrm

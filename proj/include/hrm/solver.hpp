#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hrm/eos.hpp"
#include "hrm/grid.hpp"

namespace hrm {

enum class FluxScheme { rusanov };
enum class SourceScheme { backward_euler, exact_affine };

struct SolverConfig {
  double eps = 1e-3;
  double nu = 0.0;
  double cfl = 0.45;
  double t_end = 0.1;
  FluxScheme flux_scheme = FluxScheme::rusanov;
  SourceScheme source_scheme = SourceScheme::exact_affine;
  double record_every = 0.005;  // snapshot cadence in time units

  void validate() const {
    if (!(eps > 0.0)) throw ConfigError("SolverConfig: eps must be positive");
    if (!(nu >= 0.0)) throw ConfigError("SolverConfig: nu must be non-negative");
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("SolverConfig: cfl must lie in (0,1)");
    if (!(t_end > 0.0)) throw ConfigError("SolverConfig: t_end must be positive");
    if (!(record_every > 0.0)) throw ConfigError("SolverConfig: record_every must be positive");
  }
};

/// Time-indexed snapshots of cell states for one run. Snapshots are
/// n_cells x n_comp matrices; rows are cells.
struct SolutionField {
  Grid1D grid;
  std::vector<std::string> components;
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> states;
  SolverConfig config;
  EosModel eos;

  int n_comp() const { return static_cast<int>(components.size()); }
  int n_times() const { return static_cast<int>(times.size()); }
};

Eigen::Vector3d physical_flux(const ConservedState& U, const EosModel& eos);

/// |u| + a_f, the Rusanov wave-speed bound.
double max_signal_speed(const ConservedState& U, const EosModel& eos);

/// Rusanov (local Lax-Friedrichs) flux with the frozen-speed bound.
Eigen::Vector3d numerical_flux(const ConservedState& UL, const ConservedState& UR,
                               const EosModel& eos);

/// One conservative explicit update over the whole field (rows = cells),
/// with optional centered artificial viscosity nu. Requires
/// dt <= dx / max(|u| + a_f) and, when nu > 0, dt <= dx^2 / (2 nu).
Eigen::MatrixXd hyperbolic_step(const Eigen::MatrixXd& states, double dt, const Grid1D& grid,
                                const EosModel& eos, double nu);

/// Advance Gamma under d(Gamma)/dt = (alpha_eq(p) - alpha) / eps at fixed
/// rho_m, m. backward_euler takes a single L-stable implicit step (Newton,
/// absolute tolerance 1e-12 on Gamma, bisection fallback); exact_affine
/// follows the closed-form flow of the cell ODE, available for the affine
/// unclamped map, and falls back to backward_euler elsewhere. Fixed points
/// are preserved exactly by both.
ConservedState relaxation_substep(const ConservedState& U, double dt, double eps,
                                  const EosModel& eos, SourceScheme scheme);

/// Strang-split march (half source, full hyperbolic, half source) to t_end,
/// recording snapshots at the configured cadence (t = 0 and t_end included).
SolutionField run(const std::vector<PrimitiveState>& ic, const SolverConfig& cfg,
                  const Grid1D& grid, const EosModel& eos);

}  // namespace hrm

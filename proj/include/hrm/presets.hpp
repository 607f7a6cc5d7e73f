#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hrm/eos.hpp"
#include "hrm/grid.hpp"

namespace hrm {

/// Named initial-condition families. Negative width/center/x_split mean
/// "derive from the domain" (width = 0.1 L, center/split at the midpoint).
struct PresetSpec {
  std::string name = "gaussian";
  double p_bar = 2.0;
  double u_bar = 0.0;
  double amplitude = 0.5;   // gaussian
  double width = -1.0;      // gaussian
  double center = -1.0;     // gaussian
  double p_left = 3.0;      // riemann
  double p_right = 1.5;
  double u_left = 0.0;
  double u_right = 0.0;
  double x_split = -1.0;
};

/// Cell-centered (p, u) profile of the preset; alpha = alpha_eq(p) pointwise.
void preset_pu_profile(const PresetSpec& spec, const Grid1D& grid, const EosModel& eos,
                       Eigen::ArrayXd& p, Eigen::ArrayXd& u);

std::vector<PrimitiveState> preset_initial_condition(const PresetSpec& spec, const Grid1D& grid,
                                                     const EosModel& eos);

}  // namespace hrm

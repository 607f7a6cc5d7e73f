#include "hrm/presets.hpp"

#include <cmath>

namespace hrm {

void preset_pu_profile(const PresetSpec& spec, const Grid1D& grid, const EosModel& eos,
                       Eigen::ArrayXd& p, Eigen::ArrayXd& u) {
  const int n = grid.n_cells;
  p.resize(n);
  u.resize(n);

  if (spec.name == "constant_eq") {
    p.setConstant(spec.p_bar);
    u.setConstant(spec.u_bar);
  } else if (spec.name == "gaussian") {
    const double w = spec.width > 0.0 ? spec.width : 0.1 * grid.length();
    const double xc = spec.center >= grid.x_lo ? spec.center : 0.5 * (grid.x_lo + grid.x_hi);
    for (int i = 0; i < n; ++i) {
      const double r = (grid.center(i) - xc) / w;
      p[i] = spec.p_bar + spec.amplitude * std::exp(-r * r);
      u[i] = spec.u_bar;
    }
  } else if (spec.name == "riemann") {
    const double xs = spec.x_split >= grid.x_lo ? spec.x_split : 0.5 * (grid.x_lo + grid.x_hi);
    for (int i = 0; i < n; ++i) {
      const bool left = grid.center(i) < xs;
      p[i] = left ? spec.p_left : spec.p_right;
      u[i] = left ? spec.u_left : spec.u_right;
    }
  } else {
    throw UsageError("preset_initial_condition: unknown preset '" + spec.name + "'");
  }

  for (int i = 0; i < n; ++i) {
    if (p[i] < eos.p_lo || p[i] > eos.p_hi)
      throw DomainError("preset_initial_condition: pressure profile leaves the operating range");
  }
}

std::vector<PrimitiveState> preset_initial_condition(const PresetSpec& spec, const Grid1D& grid,
                                                     const EosModel& eos) {
  Eigen::ArrayXd p, u;
  preset_pu_profile(spec, grid, eos, p, u);
  std::vector<PrimitiveState> ic(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) ic[i] = {p[i], u[i], alpha_eq(p[i], eos)};
  return ic;
}

}  // namespace hrm

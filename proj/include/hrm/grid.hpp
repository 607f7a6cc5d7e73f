#pragma once

#include <Eigen/Core>

#include "hrm/error.hpp"

namespace hrm {

enum class Boundary { periodic, outflow };

/// Uniform 1-D cell-centered grid.
struct Grid1D {
  int n_cells = 400;
  double x_lo = 0.0;
  double x_hi = 1.0;
  Boundary boundary = Boundary::periodic;

  double dx() const { return (x_hi - x_lo) / n_cells; }
  double length() const { return x_hi - x_lo; }

  double center(int i) const { return x_lo + (i + 0.5) * dx(); }

  Eigen::ArrayXd centers() const {
    Eigen::ArrayXd x(n_cells);
    for (int i = 0; i < n_cells; ++i) x[i] = center(i);
    return x;
  }

  void validate() const {
    if (n_cells < 4) throw ConfigError("Grid1D: n_cells must be >= 4");
    if (!(x_hi > x_lo)) throw ConfigError("Grid1D: x_hi must exceed x_lo");
  }
};

}  // namespace hrm

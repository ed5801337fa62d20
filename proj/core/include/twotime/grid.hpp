#pragma once

#include <cmath>
#include <string>

#include "twotime/errors.hpp"
#include "twotime/numeric.hpp"

namespace twotime {

// Relative slack used when snapping continuous coordinates to the grid
// lattice. Interval boundaries are specified as reals but must resolve to
// unambiguous grid indices; anything within this fraction of dx of a grid
// point is treated as sitting exactly on it.
inline constexpr double kBoundarySnap = 1e-9;

// Uniform 1-D spatial discretization on which every state and operator
// acts. Points are x_k = x_min + k*dx for k = 0 .. n_points-1; the
// interval [x_max - dx, x_max) belongs to the last point, i.e. the grid
// covers [x_min, x_max) half-open, matching the periodic evolution.
struct PositionGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
  double dx = 0.0;

  static PositionGrid make(double x_min, double x_max, int n_points) {
    if (!(x_max > x_min)) {
      throw InvalidArgument("state_space", "PositionGrid.x_max",
                            "x_max must exceed x_min");
    }
    if (n_points < 8 || !is_power_of_two(static_cast<std::size_t>(n_points))) {
      throw InvalidArgument("state_space", "PositionGrid.n_points",
                            "n_points must be a power of two and at least 8 "
                            "(got " + std::to_string(n_points) + ")");
    }
    PositionGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_points = n_points;
    g.dx = (x_max - x_min) / n_points;
    return g;
  }

  double x(int k) const { return x_min + k * dx; }
  int size() const { return n_points; }
  double width() const { return x_max - x_min; }

  bool operator==(const PositionGrid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }

  // Index of the first grid point at or right of coordinate `x`, with
  // snap tolerance: a point within kBoundarySnap*dx of `x` counts as on
  // it. This is the half-open convention's workhorse — a boundary that
  // lands on a grid point sends that point to the right-hand cell.
  int boundary_index(double x) const {
    const double s = (x - x_min) / dx;
    const int k = static_cast<int>(std::ceil(s - kBoundarySnap));
    if (k < 0) return 0;
    if (k > n_points) return n_points;
    return k;
  }
};

}  // namespace twotime

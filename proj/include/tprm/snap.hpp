#pragma once

#include "tprm/geometry.hpp"
#include "tprm/sampling.hpp"

#include <vector>

namespace tprm {

// Piecewise-linear paths are PointSets with one waypoint per column,
// parameterised over [0, 1] proportionally to arc length.
double polyline_length(const PointSet& sigma);
Point polyline_at(const PointSet& sigma, double tau);

// Times tau_0 = 0 < tau_1 < ... < tau_l = 1 where each tau_i (i < l) is the
// first time after tau_{i-1} at which the chord from sigma(tau_{i-1}) has
// length rho. Requires |sigma(0) - sigma(1)| >= rho.
std::vector<double> chord_times(const PointSet& sigma, double rho);

struct SnappedPath {
  std::vector<double> times;
  PointSet sigma_points;  // sigma(tau_i)
  PointSet points;        // z_i
  std::vector<long> sample_indices;  // grid index of z_i, -1 for the endpoints
  double step = 0;

  double length() const;
};

// z_0 = sigma(0), z_l = sigma(1), and every other z_i is the grid point
// nearest to sigma(tau_i), ties broken lexicographically.
SnappedPath snap_path(const PointSet& sigma, double rho, const SampleSet& grid);

}  // namespace tprm

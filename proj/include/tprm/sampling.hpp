#pragma once

#include "tprm/geometry.hpp"

#include <cstdint>
#include <limits>
#include <string>

namespace tprm {

// Stretch factors are plain doubles; infinity stands for epsilon = inf.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// alpha = eps / sqrt(1 + eps^2), 1 at eps = inf.
double stretch_alpha(double epsilon);
// omega = eps / (2 (eps + 2)), 1/2 at eps = inf.
double stretch_omega(double epsilon);
void validate_epsilon(double epsilon);

struct GridParams {
  double beta = 0;
  double gamma = 0;
  int dim = 0;

  double cell_halfwidth() const;
  void validate() const;
};

enum class Provenance { kStaggered, kRandom, kExplicit };

struct SampleSet {
  PointSet points;  // dim x n
  Provenance provenance = Provenance::kExplicit;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return points.cols(); }
  int dim() const { return static_cast<int>(points.rows()); }
};

// M = ceil((1 - 2 gamma) / (2 w)), with arguments within 1e-12 of an integer
// rounded down to it.
std::int64_t grid_layer_count(const GridParams& g);
// M^d + (M+1)^d; throws std::overflow_error beyond 64 bits.
std::uint64_t staggered_grid_size(const GridParams& g);

// X1 (odd multiples of w) followed by X2 (even multiples), each in
// lexicographic order with the first coordinate varying slowest.
SampleSet staggered_grid(const GridParams& g, std::uint64_t max_points = 50'000'000);

struct CoverReport {
  double max_gap = 0;
  bool ok = false;
  Point worst_point;
  std::size_t trials = 0;
};

// Monte-Carlo check that every point of [gamma, 1 - gamma]^d lies within beta
// of a sample. The 2^d corners of the cube are always tested in addition to
// `trials` uniform points.
CoverReport verify_beta_cover(const SampleSet& s, const GridParams& g, std::size_t trials,
                              std::uint64_t seed = 0x5eed);

struct BoundsQuery {
  double epsilon = kInfinity;
  double delta = 0;
  int dim = 0;

  double alpha() const { return stretch_alpha(epsilon); }
  double omega() const { return stretch_omega(epsilon); }
  void validate() const;
};

// Staggered-grid size with beta = alpha delta and gamma = delta.
std::uint64_t size_curr(const BoundsQuery& q);
// Covering size of the prior construction, exact Gamma-function form.
double size_prev(const BoundsQuery& q);
// sqrt(pi d) (sqrt(2d/(pi e)) (1 - (2 - alpha) delta) / (alpha delta))^d.
double size_prev_stirling(const BoundsQuery& q);
// Necessary number of samples, exact Gamma-function form. Only defined for
// epsilon = inf.
double size_lower_bound(const BoundsQuery& q);
// sqrt(e/2) (1 - 2 delta/(1 - 2 delta))^2 (sqrt((d-1)/(2 pi e)) (1 - 2 delta)/delta)^d.
double size_lower_bound_stirling(const BoundsQuery& q);

struct AsymptoticRatios {
  double prev_over_curr = 0;
  double curr_over_lb = 0;
};
AsymptoticRatios asymptotic_ratios(int dim);

// Staggered-grid size with beta = omega delta and gamma = delta.
std::uint64_t multi_robot_sample_count(const BoundsQuery& q);

SampleSet random_samples(std::size_t n, double gamma, int dim, std::uint64_t seed);

// Table rendering: counts below 1e4 as integers, fractional values rounded
// up; larger values with three significant figures, e.g. "1.79e4".
std::string format_count(double value);

}  // namespace tprm

#include "tprm/sampling.hpp"

#include "tprm/spatial_hash.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace tprm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.71828182845904523536;

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("sample count exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t grid_count(std::int64_t m, int dim) {
  const std::uint64_t a = checked_pow(static_cast<std::uint64_t>(m), dim);
  const std::uint64_t b = checked_pow(static_cast<std::uint64_t>(m + 1), dim);
  if (a > std::numeric_limits<std::uint64_t>::max() - b) throw std::overflow_error("sample count exceeds 64 bits");
  return a + b;
}

}  // namespace

void validate_epsilon(double epsilon) {
  if (std::isnan(epsilon) || !(epsilon > 0)) throw std::invalid_argument("epsilon must be positive or inf");
}

double stretch_alpha(double epsilon) {
  validate_epsilon(epsilon);
  if (std::isinf(epsilon)) return 1.0;
  return epsilon / std::sqrt(1.0 + epsilon * epsilon);
}

double stretch_omega(double epsilon) {
  validate_epsilon(epsilon);
  if (std::isinf(epsilon)) return 0.5;
  return epsilon / (2.0 * (epsilon + 2.0));
}

double GridParams::cell_halfwidth() const { return beta * std::sqrt(2.0) / std::sqrt(static_cast<double>(dim)); }

void GridParams::validate() const {
  if (dim < 1) throw std::invalid_argument("grid dimension must be at least 1");
  if (!(beta > 0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive and finite");
  if (!(gamma >= 0) || !(gamma < 0.5)) throw std::invalid_argument("gamma must lie in [0, 0.5)");
}

std::int64_t grid_layer_count(const GridParams& g) {
  g.validate();
  const double x = (1.0 - 2.0 * g.gamma) / (2.0 * g.cell_halfwidth());
  if (!(x < 9.0e15)) throw std::overflow_error("grid layer count too large");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, x)) return std::max<std::int64_t>(1, static_cast<std::int64_t>(nearest));
  return static_cast<std::int64_t>(std::ceil(x));
}

std::uint64_t staggered_grid_size(const GridParams& g) { return grid_count(grid_layer_count(g), g.dim); }

SampleSet staggered_grid(const GridParams& g, std::uint64_t max_points) {
  const std::int64_t m = grid_layer_count(g);
  const std::uint64_t total = staggered_grid_size(g);
  if (total > max_points)
    throw std::invalid_argument("staggered grid would have " + std::to_string(total) + " points, limit is " +
                                std::to_string(max_points));
  const double w = g.cell_halfwidth();
  const int d = g.dim;
  SampleSet out;
  out.provenance = Provenance::kStaggered;
  out.points.resize(d, static_cast<Eigen::Index>(total));
  Eigen::Index col = 0;
  // Layer 1 uses k = 1..M with offset (2k - 1) w, layer 2 uses k = 0..M with 2k w.
  for (int layer = 1; layer <= 2; ++layer) {
    const std::int64_t lo = layer == 1 ? 1 : 0;
    const std::int64_t hi = m;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), lo);
    while (true) {
      for (int k = 0; k < d; ++k) {
        const double mult = layer == 1 ? static_cast<double>(2 * idx[k] - 1) : static_cast<double>(2 * idx[k]);
        out.points(k, col) = g.gamma + mult * w;
      }
      ++col;
      int k = d - 1;
      while (k >= 0 && idx[k] == hi) idx[k--] = lo;
      if (k < 0) break;
      ++idx[k];
    }
  }
  if (col != out.points.cols()) throw std::logic_error("staggered_grid: point count mismatch");
  return out;
}

CoverReport verify_beta_cover(const SampleSet& s, const GridParams& g, std::size_t trials, std::uint64_t seed) {
  g.validate();
  if (s.size() == 0) throw std::invalid_argument("verify_beta_cover: empty sample set");
  if (trials < 1) throw std::invalid_argument("verify_beta_cover: trials must be at least 1");
  if (s.dim() != g.dim) throw std::invalid_argument("verify_beta_cover: dimension mismatch");
  const int d = g.dim;
  SpatialHash index(s.points, std::max(g.beta, 1e-6));
  CoverReport rep;
  rep.worst_point = Point::Zero(d);
  auto probe = [&](const Point& q) {
    const Eigen::Index j = *index.nearest(q);
    const double gap = (s.points.col(j) - q).norm();
    if (gap > rep.max_gap) {
      rep.max_gap = gap;
      rep.worst_point = q;
    }
    ++rep.trials;
  };
  const double lo = g.gamma;
  const double hi = 1.0 - g.gamma;
  Point q(d);
  if (d <= 16) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      for (int k = 0; k < d; ++k) q[k] = (mask >> k) & 1 ? hi : lo;
      probe(q);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  for (std::size_t t = 0; t < trials; ++t) {
    for (int k = 0; k < d; ++k) q[k] = u(rng);
    probe(q);
  }
  rep.ok = rep.max_gap <= g.beta + 1e-9;
  return rep;
}

void BoundsQuery::validate() const {
  validate_epsilon(epsilon);
  if (!(delta > 0) || !(delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 0.5)");
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
}

std::uint64_t size_curr(const BoundsQuery& q) {
  q.validate();
  return staggered_grid_size(GridParams{q.alpha() * q.delta, q.delta, q.dim});
}

std::uint64_t multi_robot_sample_count(const BoundsQuery& q) {
  q.validate();
  return staggered_grid_size(GridParams{q.omega() * q.delta, q.delta, q.dim});
}

double size_prev(const BoundsQuery& q) {
  q.validate();
  const double a = q.alpha();
  const double d = q.dim;
  const double base = (1.0 - (2.0 - a) * q.delta) / (a * q.delta / 2.0);
  return std::tgamma(d / 2.0 + 1.0) / std::pow(kPi, d / 2.0) * std::pow(base, d);
}

double size_prev_stirling(const BoundsQuery& q) {
  q.validate();
  const double a = q.alpha();
  const double d = q.dim;
  const double base = std::sqrt(2.0 * d / (kPi * kE)) * (1.0 - (2.0 - a) * q.delta) / (a * q.delta);
  return std::sqrt(kPi * d) * std::pow(base, d);
}

double size_lower_bound(const BoundsQuery& q) {
  q.validate();
  if (!std::isinf(q.epsilon)) throw std::invalid_argument("size_lower_bound is only defined for epsilon = inf");
  const double d = q.dim;
  const double s = 1.0 - 2.0 * q.delta;
  const double shrink = 1.0 - 2.0 * q.delta / s;
  return std::tgamma((d + 1.0) / 2.0) / (2.0 * std::pow(kPi, (d + 1.0) / 2.0)) * shrink * shrink *
         std::pow(s / q.delta, d);
}

double size_lower_bound_stirling(const BoundsQuery& q) {
  q.validate();
  if (!std::isinf(q.epsilon)) throw std::invalid_argument("size_lower_bound is only defined for epsilon = inf");
  const double d = q.dim;
  const double s = 1.0 - 2.0 * q.delta;
  const double shrink = 1.0 - 2.0 * q.delta / s;
  return std::sqrt(kE / 2.0) * shrink * shrink * std::pow(std::sqrt((d - 1.0) / (2.0 * kPi * kE)) * s / q.delta, d);
}

AsymptoticRatios asymptotic_ratios(int dim) {
  if (dim < 2) throw std::invalid_argument("asymptotic_ratios needs dim >= 2");
  const double d = dim;
  AsymptoticRatios r;
  r.prev_over_curr = std::sqrt(kPi * d) / 2.0 * std::pow(16.0 / (kPi * kE), d / 2.0);
  r.curr_over_lb = std::sqrt(8.0 / kE) * std::sqrt(std::pow(d / (d - 1.0), d)) * std::pow(kPi * kE / 4.0, d / 2.0);
  return r;
}

SampleSet random_samples(std::size_t n, double gamma, int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_samples: dimension must be at least 1");
  if (!(gamma >= 0) || !(gamma < 0.5)) throw std::invalid_argument("random_samples: gamma must lie in [0, 0.5)");
  SampleSet out;
  out.provenance = Provenance::kRandom;
  out.seed = seed;
  out.points.resize(dim, static_cast<Eigen::Index>(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(gamma, 1.0 - gamma);
  for (Eigen::Index j = 0; j < out.points.cols(); ++j)
    for (int k = 0; k < dim; ++k) out.points(k, j) = u(rng);
  return out;
}

std::string format_count(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return "inf";
  const double c = std::ceil(value - 1e-9);
  if (c < 1e4) return std::to_string(static_cast<long long>(std::max(c, 0.0)));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", value);
  std::string s(buf);
  const auto e = s.find('e');
  const int exponent = std::stoi(s.substr(e + 1));
  return s.substr(0, e) + "e" + std::to_string(exponent);
}

}  // namespace tprm

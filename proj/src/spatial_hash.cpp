#include "tprm/spatial_hash.hpp"

#include <cmath>

namespace tprm {

bool lexicographic_less(const PointRef& a, const PointRef& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return true;
    if (a[k] > b[k]) return false;
  }
  return false;
}

SpatialHash::SpatialHash(const PointSet& points, double cell) : points_(points), cell_(cell) {
  if (!(cell > 0) || !std::isfinite(cell)) throw std::invalid_argument("SpatialHash: cell size must be positive");
  buckets_.reserve(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < points.cols(); ++i) buckets_[key(cell_of(points.col(i)))].push_back(i);
}

SpatialHash::Cell SpatialHash::cell_of(const PointRef& q) const {
  Cell c(static_cast<std::size_t>(q.size()));
  for (Eigen::Index k = 0; k < q.size(); ++k) c[k] = static_cast<std::int64_t>(std::floor(q[k] / cell_));
  return c;
}

std::uint64_t SpatialHash::key(const Cell& c) const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : c) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return h;
}

// Visits buckets whose cell offset from `center` has Chebyshev norm in
// (skip_inside, reach].
template <typename F>
void SpatialHash::visit_box(const Cell& center, std::int64_t reach, std::int64_t skip_inside, F&& f) const {
  const std::size_t d = center.size();
  std::vector<std::int64_t> off(d, -reach);
  Cell c(d);
  while (true) {
    std::int64_t cheb = 0;
    for (std::size_t k = 0; k < d; ++k) cheb = std::max(cheb, std::abs(off[k]));
    if (cheb > skip_inside) {
      for (std::size_t k = 0; k < d; ++k) c[k] = center[k] + off[k];
      auto it = buckets_.find(key(c));
      if (it != buckets_.end()) f(it->second);
    }
    std::size_t k = 0;
    while (k < d && off[k] == reach) off[k++] = -reach;
    if (k == d) break;
    ++off[k];
  }
}

std::vector<Eigen::Index> SpatialHash::within(const PointRef& q, double radius) const {
  std::vector<Eigen::Index> out;
  const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_));
  const double r2 = radius * radius;
  visit_box(cell_of(q), reach, -1, [&](const std::vector<Eigen::Index>& bucket) {
    for (Eigen::Index i : bucket)
      if ((points_.col(i) - q).squaredNorm() <= r2) out.push_back(i);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Eigen::Index> SpatialHash::nearest(const PointRef& q) const {
  if (points_.cols() == 0) return std::nullopt;
  std::optional<Eigen::Index> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  auto consider = [&](Eigen::Index i) {
    const double d2 = (points_.col(i) - q).squaredNorm();
    if (d2 < best_d2 || (d2 == best_d2 && lexicographic_less(points_.col(i), points_.col(*best)))) {
      best_d2 = d2;
      best = i;
    }
  };
  const Cell center = cell_of(q);
  const double d = static_cast<double>(q.size());
  for (std::int64_t ring = 0;; ++ring) {
    // Enumerating rings stops paying off once they hold more cells than
    // there are points.
    if (std::pow(2.0 * ring + 1.0, d) > 4.0 * static_cast<double>(points_.cols()) + 64.0) {
      for (Eigen::Index i = 0; i < points_.cols(); ++i) consider(i);
      return best;
    }
    visit_box(center, ring, ring - 1, [&](const std::vector<Eigen::Index>& bucket) {
      for (Eigen::Index i : bucket) consider(i);
    });
    // Anything in ring + 1 or beyond is at least ring * cell away.
    const double bound = static_cast<double>(ring) * cell_;
    if (best && best_d2 < bound * bound) return best;
  }
}

}  // namespace tprm

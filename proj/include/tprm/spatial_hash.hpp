#pragma once

#include "tprm/geometry.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace tprm {

// Uniform bucket grid over the columns of a point matrix. The matrix must
// outlive the index.
class SpatialHash {
 public:
  SpatialHash(const PointSet& points, double cell);

  double cell() const { return cell_; }

  // Indices of all points with ||p - q|| <= radius, ascending. Radii larger
  // than the cell size are supported but visit more buckets.
  std::vector<Eigen::Index> within(const PointRef& q, double radius) const;

  // Nearest point; ties go to the lexicographically smallest coordinates.
  std::optional<Eigen::Index> nearest(const PointRef& q) const;

 private:
  using Cell = std::vector<std::int64_t>;
  Cell cell_of(const PointRef& q) const;
  std::uint64_t key(const Cell& c) const;
  template <typename F>
  void visit_box(const Cell& center, std::int64_t reach, std::int64_t skip_inside, F&& f) const;

  const PointSet& points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<Eigen::Index>> buckets_;
};

// True if a precedes b in lexicographic coordinate order.
bool lexicographic_less(const PointRef& a, const PointRef& b);

}  // namespace tprm

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

namespace tprm {

using Point = Eigen::VectorXd;
// One point per column.
using PointSet = Eigen::MatrixXd;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

// Absolute tolerance of every strict geometric predicate. A clearance of
// exactly kGeomTol or less counts as contact.
inline constexpr double kGeomTol = 1e-9;

inline bool is_clear(double clearance) { return clearance > kGeomTol; }

struct Disc {
  Eigen::Vector2d center;
  double radius;
};

// Vertices in counter-clockwise order.
struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;
};

struct HyperBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct HyperSphere {
  Eigen::VectorXd center;
  double radius;
};

using Obstacle = std::variant<Disc, ConvexPolygon, HyperBox, HyperSphere>;

int obstacle_dim(const Obstacle& o);

enum class BoundaryMode { kIgnore, kObstacle };

class Workspace {
 public:
  explicit Workspace(int dim, std::vector<Obstacle> obstacles = {}, double inflation = 0.0);

  int dim() const { return dim_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  double inflation() const { return inflation_; }

  Workspace with_inflation(double inflation) const;

 private:
  int dim_;
  std::vector<Obstacle> obstacles_;
  double inflation_;
};

// Signed distance to one obstacle (negative inside).
double obstacle_distance(const Obstacle& o, const PointRef& p);
// Exact minimum of obstacle_distance along the segment [a, b].
double obstacle_segment_distance(const Obstacle& o, const PointRef& a, const PointRef& b);

// Minimum over obstacles of the signed distance minus the inflation. Without
// obstacles and with BoundaryMode::kIgnore the result is +infinity. In
// kObstacle mode the distance to the boundary of the unit cube also caps the
// result; the cube bounds robot centres, so it is not inflated.
double signed_clearance(const Workspace& w, const PointRef& p,
                        BoundaryMode mode = BoundaryMode::kIgnore);

double segment_clearance(const Workspace& w, const PointRef& a, const PointRef& b,
                         BoundaryMode mode = BoundaryMode::kIgnore);

// ---------------------------------------------------------------------------
// Distance kernels. Templated so that matrix columns and other expressions can
// be passed without copies.

template <typename DP, typename DA, typename DB>
typename DP::Scalar point_segment_distance(const Eigen::MatrixBase<DP>& p,
                                           const Eigen::MatrixBase<DA>& a,
                                           const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DP::Scalar;
  const auto ab = (b - a).eval();
  const Scalar len2 = ab.squaredNorm();
  Scalar t = 0;
  if (len2 > 0) t = std::clamp<Scalar>((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return (a + t * ab - p).norm();
}

// Closest points of two segments, after Ericson, "Real-Time Collision
// Detection", 5.1.9. Works in any dimension.
template <typename D1, typename D2, typename D3, typename D4>
typename D1::Scalar segment_segment_distance(const Eigen::MatrixBase<D1>& p1,
                                             const Eigen::MatrixBase<D2>& q1,
                                             const Eigen::MatrixBase<D3>& p2,
                                             const Eigen::MatrixBase<D4>& q2) {
  using Scalar = typename D1::Scalar;
  const auto d1 = (q1 - p1).eval();
  const auto d2 = (q2 - p2).eval();
  const auto r = (p1 - p2).eval();
  const Scalar a = d1.squaredNorm();
  const Scalar e = d2.squaredNorm();
  const Scalar f = d2.dot(r);
  Scalar s = 0;
  Scalar t = 0;
  if (a <= 0 && e <= 0) return r.norm();
  if (a <= 0) {
    t = std::clamp<Scalar>(f / e, 0, 1);
  } else {
    const Scalar c = d1.dot(r);
    if (e <= 0) {
      s = std::clamp<Scalar>(-c / a, 0, 1);
    } else {
      const Scalar b = d1.dot(d2);
      const Scalar denom = a * e - b * b;
      if (denom > 0) s = std::clamp<Scalar>((b * f - c * e) / denom, 0, 1);
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp<Scalar>(-c / a, 0, 1);
      } else if (t > 1) {
        t = 1;
        s = std::clamp<Scalar>((b - c) / a, 0, 1);
      }
    }
  }
  return ((p1 + s * d1) - (p2 + t * d2)).norm();
}

// Minimum distance between two points moving linearly and synchronously,
// p(t) = p0 + t (p1 - p0) and q(t) = q0 + t (q1 - q0), over t in [0, 1].
template <typename D1, typename D2, typename D3, typename D4>
typename D1::Scalar moving_pair_min_distance(const Eigen::MatrixBase<D1>& p0,
                                             const Eigen::MatrixBase<D2>& p1,
                                             const Eigen::MatrixBase<D3>& q0,
                                             const Eigen::MatrixBase<D4>& q1) {
  using Scalar = typename D1::Scalar;
  if (p0.size() != q0.size() || p1.size() != q1.size() || p0.size() != p1.size())
    throw std::invalid_argument("moving_pair_min_distance: dimension mismatch");
  const auto w0 = (p0 - q0).eval();
  const auto dv = ((p1 - p0) - (q1 - q0)).eval();
  const Scalar dd = dv.squaredNorm();
  Scalar t = 0;
  if (dd > 0) t = std::clamp<Scalar>(-w0.dot(dv) / dd, Scalar(0), Scalar(1));
  return (w0 + t * dv).norm();
}

// Distance from a point inside or outside the unit cube to the cube boundary;
// negative outside.
template <typename D>
typename D::Scalar cube_boundary_distance(const Eigen::MatrixBase<D>& p) {
  return std::min(p.minCoeff(), (1 - p.array()).minCoeff());
}

}  // namespace tprm

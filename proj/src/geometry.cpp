#include "tprm/geometry.hpp"

#include <string>

namespace tprm {

namespace {

void check_dim(const PointRef& p, int dim, const char* what) {
  if (p.size() != dim)
    throw std::invalid_argument(std::string(what) + ": point has dimension " +
                                std::to_string(p.size()) + ", workspace has " +
                                std::to_string(dim));
}

void validate_obstacle(const Obstacle& o, int dim) {
  if (obstacle_dim(o) != dim) throw std::invalid_argument("obstacle dimension differs from workspace");
  std::visit(
      [](const auto& ob) {
        using T = std::decay_t<decltype(ob)>;
        if constexpr (std::is_same_v<T, Disc> || std::is_same_v<T, HyperSphere>) {
          if (!(ob.radius > 0) || !std::isfinite(ob.radius) || !ob.center.allFinite())
            throw std::invalid_argument("obstacle radius must be positive and finite");
        } else if constexpr (std::is_same_v<T, HyperBox>) {
          if (ob.lo.size() != ob.hi.size() || !(ob.lo.array() < ob.hi.array()).all())
            throw std::invalid_argument("box requires lo < hi componentwise");
        } else {
          const auto& v = ob.vertices;
          const std::size_t n = v.size();
          if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
          for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d e1 = v[(i + 1) % n] - v[i];
            const Eigen::Vector2d e2 = v[(i + 2) % n] - v[(i + 1) % n];
            if (!(e1.x() * e2.y() - e1.y() * e2.x() > 0))
              throw std::invalid_argument("polygon must be convex, counter-clockwise, without collinear vertices");
          }
        }
      },
      o);
}

// Signed distances of a point to the supporting lines of a CCW polygon,
// positive on the outer side.
double edge_line_distance(const ConvexPolygon& poly, std::size_t i, const Eigen::Vector2d& p) {
  const auto& v = poly.vertices;
  const Eigen::Vector2d a = v[i];
  const Eigen::Vector2d e = v[(i + 1) % v.size()] - a;
  const Eigen::Vector2d n(e.y(), -e.x());
  return n.dot(p - a) / n.norm();
}

// Minimum over t in [0, 1] of max_i (c0[i] + t (c1[i] - c0[i])).
double min_of_max_affine(const std::vector<double>& c0, const std::vector<double>& c1) {
  auto eval = [&](double t) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c0.size(); ++i) m = std::max(m, c0[i] + t * (c1[i] - c0[i]));
    return m;
  };
  double best = std::min(eval(0.0), eval(1.0));
  for (std::size_t i = 0; i < c0.size(); ++i) {
    for (std::size_t j = i + 1; j < c0.size(); ++j) {
      const double si = c1[i] - c0[i];
      const double sj = c1[j] - c0[j];
      if (si == sj) continue;
      const double t = (c0[j] - c0[i]) / (si - sj);
      if (t > 0 && t < 1) best = std::min(best, eval(t));
    }
  }
  return best;
}

double polygon_distance(const ConvexPolygon& poly, const Eigen::Vector2d& p) {
  const std::size_t n = poly.vertices.size();
  double inside = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) inside = std::max(inside, edge_line_distance(poly, i, p));
  if (inside <= 0) return inside;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, point_segment_distance(p, poly.vertices[i], poly.vertices[(i + 1) % n]));
  return best;
}

double polygon_segment_distance(const ConvexPolygon& poly, const Eigen::Vector2d& a,
                                const Eigen::Vector2d& b) {
  const std::size_t n = poly.vertices.size();
  std::vector<double> c0(n), c1(n);
  for (std::size_t i = 0; i < n; ++i) {
    c0[i] = edge_line_distance(poly, i, a);
    c1[i] = edge_line_distance(poly, i, b);
  }
  // Where the max of the line distances is non-positive it equals the signed
  // distance, and elsewhere it is a lower bound for it.
  const double inner = min_of_max_affine(c0, c1);
  if (inner <= 0) return inner;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, segment_segment_distance(a, b, poly.vertices[i], poly.vertices[(i + 1) % n]));
  return best;
}

double box_distance(const HyperBox& box, const PointRef& p) {
  const Eigen::ArrayXd q = (box.lo - p).array().max((p - box.hi).array());
  if ((q <= 0).all()) return q.maxCoeff();
  return q.max(0.0).matrix().norm();
}

double box_segment_distance(const HyperBox& box, const PointRef& a, const PointRef& b) {
  const Eigen::Index d = a.size();
  std::vector<double> c0, c1;
  c0.reserve(2 * d);
  c1.reserve(2 * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    c0.push_back(box.lo[k] - a[k]);
    c1.push_back(box.lo[k] - b[k]);
    c0.push_back(a[k] - box.hi[k]);
    c1.push_back(b[k] - box.hi[k]);
  }
  const double inner = min_of_max_affine(c0, c1);
  if (inner <= 0) return inner;

  // Squared distance to the box is convex and piecewise quadratic in t, with
  // breakpoints where a coordinate crosses a face plane.
  const Eigen::VectorXd dir = b - a;
  std::vector<double> ts{0.0, 1.0};
  for (Eigen::Index k = 0; k < d; ++k) {
    if (dir[k] == 0) continue;
    for (double face : {box.lo[k], box.hi[k]}) {
      const double t = (face - a[k]) / dir[k];
      if (t > 0 && t < 1) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  auto sq_dist = [&](double t) {
    double s = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double x = a[k] + t * dir[k];
      if (x < box.lo[k]) s += (box.lo[k] - x) * (box.lo[k] - x);
      else if (x > box.hi[k]) s += (x - box.hi[k]) * (x - box.hi[k]);
    }
    return s;
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
    const double t0 = ts[j];
    const double t1 = ts[j + 1];
    best = std::min({best, sq_dist(t0), sq_dist(t1)});
    if (t1 <= t0) continue;
    const double mid = 0.5 * (t0 + t1);
    double qa = 0, qb = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double x = a[k] + mid * dir[k];
      double c;
      if (x < box.lo[k]) c = a[k] - box.lo[k];
      else if (x > box.hi[k]) c = a[k] - box.hi[k];
      else continue;
      qa += dir[k] * dir[k];
      qb += 2 * c * dir[k];
    }
    if (qa > 0) {
      const double t = std::clamp(-qb / (2 * qa), t0, t1);
      best = std::min(best, sq_dist(t));
    }
  }
  return std::sqrt(std::max(best, 0.0));
}

}  // namespace

int obstacle_dim(const Obstacle& o) {
  return std::visit(
      [](const auto& ob) -> int {
        using T = std::decay_t<decltype(ob)>;
        if constexpr (std::is_same_v<T, Disc> || std::is_same_v<T, ConvexPolygon>) return 2;
        else if constexpr (std::is_same_v<T, HyperBox>) return static_cast<int>(ob.lo.size());
        else return static_cast<int>(ob.center.size());
      },
      o);
}

Workspace::Workspace(int dim, std::vector<Obstacle> obstacles, double inflation)
    : dim_(dim), obstacles_(std::move(obstacles)), inflation_(inflation) {
  if (dim < 1) throw std::invalid_argument("workspace dimension must be at least 1");
  if (!(inflation >= 0) || !std::isfinite(inflation))
    throw std::invalid_argument("inflation must be finite and non-negative");
  for (const auto& o : obstacles_) validate_obstacle(o, dim_);
}

Workspace Workspace::with_inflation(double inflation) const {
  return Workspace(dim_, obstacles_, inflation);
}

double obstacle_distance(const Obstacle& o, const PointRef& p) {
  return std::visit(
      [&](const auto& ob) -> double {
        using T = std::decay_t<decltype(ob)>;
        if constexpr (std::is_same_v<T, Disc>) return (p - ob.center).norm() - ob.radius;
        else if constexpr (std::is_same_v<T, HyperSphere>) return (p - ob.center).norm() - ob.radius;
        else if constexpr (std::is_same_v<T, HyperBox>) return box_distance(ob, p);
        else return polygon_distance(ob, Eigen::Vector2d(p[0], p[1]));
      },
      o);
}

double obstacle_segment_distance(const Obstacle& o, const PointRef& a, const PointRef& b) {
  return std::visit(
      [&](const auto& ob) -> double {
        using T = std::decay_t<decltype(ob)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return point_segment_distance(ob.center, Eigen::Vector2d(a[0], a[1]), Eigen::Vector2d(b[0], b[1])) -
                 ob.radius;
        } else if constexpr (std::is_same_v<T, HyperSphere>) {
          return point_segment_distance(ob.center, a, b) - ob.radius;
        } else if constexpr (std::is_same_v<T, HyperBox>) {
          return box_segment_distance(ob, a, b);
        } else {
          return polygon_segment_distance(ob, Eigen::Vector2d(a[0], a[1]), Eigen::Vector2d(b[0], b[1]));
        }
      },
      o);
}

double signed_clearance(const Workspace& w, const PointRef& p, BoundaryMode mode) {
  check_dim(p, w.dim(), "signed_clearance");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : w.obstacles()) best = std::min(best, obstacle_distance(o, p) - w.inflation());
  if (mode == BoundaryMode::kObstacle) best = std::min(best, cube_boundary_distance(p));
  return best;
}

double segment_clearance(const Workspace& w, const PointRef& a, const PointRef& b, BoundaryMode mode) {
  check_dim(a, w.dim(), "segment_clearance");
  check_dim(b, w.dim(), "segment_clearance");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : w.obstacles())
    best = std::min(best, obstacle_segment_distance(o, a, b) - w.inflation());
  // The cube distance is concave inside the cube, so its minimum on a segment
  // sits at an endpoint.
  if (mode == BoundaryMode::kObstacle)
    best = std::min({best, cube_boundary_distance(a), cube_boundary_distance(b)});
  return best;
}

}  // namespace tprm

#pragma once

// Helpers shared by the unit tests and the acceptance binary: the published
// sample-size tables, random world generators and brute-force oracles that do
// not reuse the library's closed forms.

#include "tprm/geometry.hpp"
#include "tprm/mrmp.hpp"
#include "tprm/roadmap.hpp"
#include "tprm/sampling.hpp"
#include "tprm/snap.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tprm::testing {

// ---------------------------------------------------------------------------
// Published tables, transcribed verbatim ("1.79e4" stands for 1.79 * 10^4).

struct Table1Row {
  double delta;
  int dim;
  const char* lb;
  // curr/prev pairs for eps = inf, 1, 0.25, 0.1
  const char* cells[8];
};

inline const std::vector<Table1Row>& table1() {
  static const std::vector<Table1Row> rows = {
      {0.25, 2, "0", {"5", "12", "13", "19", "61", "109", "265", "567"}},
      {0.25, 3, "0", {"35", "52", "35", "108", "559", "1510", "4941", "1.79e4"}},
      {0.25, 4, "0", {"97", "263", "97", "697", "3697", "2.37e4", "1.16e5", "6.43e5"}},
      {0.25, 5, "0", {"275", "1478", "1267", "5000", "4.96e4", "4.11e5", "2.47e6", "2.54e7"}},
      {0.25, 6, "0", {"793", "9029", "4825", "3.90e4", "7.94e5", "7.74e6", "8.11e7", "1.09e9"}},
      {0.1, 2, "3", {"61", "104", "85", "194", "613", "1471", "3445", "8437"}},
      {0.1, 3, "15", {"341", "1393", "855", "3566", "1.99e4", "7.50e4", "2.58e5", "1.03e6"}},
      {0.1, 4, "88", {"3697", "2.13e4", "1.07e4", "7.45e4", "7.22e5", "4.33e6", "2.19e7", "1.42e8"}},
      {0.1, 5, "595", {"4.96e4", "3.59e5", "1.59e5", "1.72e6", "3.16e7", "2.76e8", "2.23e9", "2.17e10"}},
      {0.1, 6, "4459", {"3.80e5", "6.58e6", "2.77e6", "4.32e7", "1.32e9", "1.91e10", "2.46e11", "3.60e12"}},
      {0.05, 2, "21", {"221", "460", "365", "892", "2965", "7204", "1.67e4", "4.21e4"}},
      {0.05, 3, "234", {"3925", "1.31e4", "9009", "3.54e4", "2.01e5", "8.13e5", "2.77e6", "1.15e7"}},
      {0.05, 4, "3152", {"6.70e4", "4.23e5", "2.35e5", "1.59e6", "1.64e7", "1.04e8", "5.45e8", "3.55e9"}},
      {0.05, 5, "4.82e4", {"1.81e6", "1.51e7", "9.24e6", "7.88e7", "1.49e9", "1.46e10", "1.26e11", "1.21e12"}},
      {0.05, 6, "8.13e5", {"4.09e7", "5.83e8", "3.39e8", "4.25e9", "1.58e11", "2.24e12", "3.05e13", "4.49e14"}},
      {0.01, 2, "734", {"5101", "1.25e4", "9941", "2.48e4", "8.28e4", "2.09e5", "4.87e5", "1.24e6"}},
      {0.01, 3, "4.58e4", {"4.65e5", "1.85e6", "1.25e6", "5.20e6", "3.07e7", "1.27e8", "4.42e8", "1.83e9"}},
      {0.01, 4, "3.36e6", {"4.94e7", "3.11e8", "1.88e8", "1.23e9", "1.35e10", "8.73e10", "4.73e11", "3.06e12"}},
      {0.01, 5, "2.80e8", {"5.96e9", "5.78e10", "3.30e10", "3.22e11", "6.76e12", "6.63e13", "5.76e14", "5.66e15"}},
      {0.01, 6, "2.57e10", {"7.82e11", "1.17e13", "6.44e12", "9.16e13", "3.71e15", "5.47e16", "7.73e17", "1.14e19"}},
  };
  return rows;
}

inline const double kTable1Eps[4] = {std::numeric_limits<double>::infinity(), 1, 0.25, 0.1};

// Per-robot sample counts at delta = 0.1; columns eps = inf, 5, 1, 0.5, 0.25.
struct MultiRobotRow {
  int dim;
  const char* cells[5];
};

inline const std::vector<MultiRobotRow>& multi_robot_table() {
  static const std::vector<MultiRobotRow> rows = {
      {2, {"181", "313", "1201", "3281", "1.05e4"}},
      {3, {"2331", "6119", "5.68e4", "2.43e5", "1.43e6"}},
      {4, {"4.93e4", "1.49e5", "2.83e6", "2.19e7", "2.21e8"}},
      {5, {"9.09e5", "4.37e6", "1.69e8", "2.23e9", "3.94e10"}},
      {6, {"1.89e7", "1.5e8", "1.18e10", "2.46e11", "7.82e12"}},
  };
  return rows;
}

inline const double kMultiRobotEps[5] = {std::numeric_limits<double>::infinity(), 5, 1, 0.5, 0.25};

// Compares a computed value with a printed cell. Integer cells must match
// `ceil(value)` exactly when `exact_integers`, otherwise within one unit; a
// scientific cell "m.mmeK" matches when the value rounded to the printed
// number of significant digits is within one unit of the last digit.
inline bool printed_cell_matches(const std::string& printed, double value, bool exact_integers) {
  const auto e = printed.find('e');
  if (e == std::string::npos) {
    const double want = std::stod(printed);
    const double got = std::ceil(value - 1e-9);
    return exact_integers ? got == want : std::abs(got - want) <= 1;
  }
  const std::string mantissa = printed.substr(0, e);
  const int exponent = std::stoi(printed.substr(e + 1));
  const auto dot = mantissa.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
  const double unit = std::pow(10.0, exponent - decimals);
  const double want = std::stod(mantissa) * std::pow(10.0, exponent);
  return std::abs(std::round(value / unit) * unit - want) <= unit * (1 + 1e-9);
}

// ---------------------------------------------------------------------------
// Independent geometry oracles.

inline bool inside_obstacle(const Obstacle& o, const Eigen::VectorXd& p) {
  if (const auto* d = std::get_if<Disc>(&o)) return (p - d->center).norm() < d->radius;
  if (const auto* s = std::get_if<HyperSphere>(&o)) return (p - s->center).norm() < s->radius;
  if (const auto* b = std::get_if<HyperBox>(&o)) return (p.array() > b->lo.array()).all() && (p.array() < b->hi.array()).all();
  const auto& v = std::get<ConvexPolygon>(o).vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Eigen::Vector2d e = v[(i + 1) % v.size()] - v[i];
    const Eigen::Vector2d q = p.head<2>() - v[i];
    if (e.x() * q.y() - e.y() * q.x() <= 0) return false;
  }
  return true;
}

// Points spread over the obstacle boundary (2D: perimeter; boxes: faces;
// spheres: Fibonacci lattice).
inline std::vector<Eigen::VectorXd> boundary_samples(const Obstacle& o, int n) {
  std::vector<Eigen::VectorXd> out;
  if (const auto* b = std::get_if<HyperBox>(&o); b && b->lo.size() == 2) {
    const Eigen::Vector2d lo = b->lo, hi = b->hi;
    return boundary_samples(ConvexPolygon{{lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}}}, n);
  }
  if (const auto* s = std::get_if<HyperSphere>(&o); s && s->center.size() == 2)
    return boundary_samples(Disc{s->center, s->radius}, n);
  if (const auto* d = std::get_if<Disc>(&o)) {
    for (int k = 0; k < n; ++k) {
      const double a = 2 * std::numbers::pi * k / n;
      out.push_back(d->center + d->radius * Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
  } else if (const auto* p = std::get_if<ConvexPolygon>(&o)) {
    const auto& v = p->vertices;
    const int per = std::max(1, n / static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      for (int k = 0; k < per; ++k) {
        const double t = static_cast<double>(k) / per;
        out.push_back(v[i] + t * (v[(i + 1) % v.size()] - v[i]));
      }
  } else if (const auto* b = std::get_if<HyperBox>(&o)) {
    const int d = static_cast<int>(b->lo.size());
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd q(d);
      for (int i = 0; i < d; ++i) q[i] = b->lo[i] + u(rng) * (b->hi[i] - b->lo[i]);
      const int face = k % (2 * d);
      q[face / 2] = face % 2 ? b->hi[face / 2] : b->lo[face / 2];
      out.push_back(q);
    }
    // Corners.
    for (int mask = 0; mask < (1 << d); ++mask) {
      Eigen::VectorXd q(d);
      for (int i = 0; i < d; ++i) q[i] = (mask >> i) & 1 ? b->hi[i] : b->lo[i];
      out.push_back(q);
    }
  } else {
    const auto& s = std::get<HyperSphere>(o);
    const int d = static_cast<int>(s.center.size());
    std::mt19937_64 rng(43);
    std::normal_distribution<double> g(0, 1);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd q(d);
      for (int i = 0; i < d; ++i) q[i] = g(rng);
      out.push_back(s.center + s.radius * q.normalized());
    }
  }
  return out;
}

// Signed distance from boundary sampling: minimum distance to the sampled
// boundary, negated inside.
inline double sampled_obstacle_distance(const Obstacle& o, const Eigen::VectorXd& p, int n = 10000) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : boundary_samples(o, n)) best = std::min(best, (q - p).norm());
  return inside_obstacle(o, p) ? -best : best;
}

// Minimum of the library's point clearance along a densely sampled segment.
inline double sampled_segment_clearance(const Workspace& w, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                        int steps = 1000) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    best = std::min(best, signed_clearance(w, a + t * (b - a)));
  }
  return best;
}

inline double sampled_pair_distance(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1, const Eigen::VectorXd& q0,
                                    const Eigen::VectorXd& q1, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    best = std::min(best, ((p0 + t * (p1 - p0)) - (q0 + t * (q1 - q0))).norm());
  }
  return best;
}

// ---------------------------------------------------------------------------
// Random worlds.

inline Eigen::VectorXd uniform_point(std::mt19937_64& rng, int dim, double lo = 0, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd p(dim);
  for (int i = 0; i < dim; ++i) p[i] = u(rng);
  return p;
}

// A random convex polygon: points on a jittered circle, CCW.
inline ConvexPolygon random_polygon(std::mt19937_64& rng, const Eigen::Vector2d& c, double radius) {
  std::uniform_int_distribution<int> nv(3, 7);
  std::uniform_real_distribution<double> u(0, 1);
  const int n = nv(rng);
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(2 * std::numbers::pi * (i + 0.8 * u(rng)) / n);
  ConvexPolygon p;
  for (double a : angles) p.vertices.push_back(c + radius * Eigen::Vector2d(std::cos(a), std::sin(a)));
  return p;
}

inline Obstacle random_obstacle(std::mt19937_64& rng, int dim, double min_size = 0.02, double max_size = 0.12) {
  std::uniform_real_distribution<double> size(min_size, max_size);
  std::uniform_int_distribution<int> kind(0, 3);
  const Eigen::VectorXd c = uniform_point(rng, dim, 0.1, 0.9);
  int k = kind(rng);
  if (dim != 2 && k < 2) k += 2;
  switch (k) {
    case 0: return Disc{c.head<2>(), size(rng)};
    case 1: return random_polygon(rng, c.head<2>(), size(rng));
    case 2: {
      Eigen::VectorXd half(dim);
      for (int i = 0; i < dim; ++i) half[i] = size(rng) / 2;
      return HyperBox{c - half, c + half};
    }
    default: return HyperSphere{c, size(rng)};
  }
}

// Adds up to `count` random obstacles whose clearance from every segment of
// `path` exceeds `margin`.
inline std::vector<Obstacle> obstacles_avoiding(std::mt19937_64& rng, int dim, const PointSet& path, double margin,
                                                int count, int attempts = 400) {
  std::vector<Obstacle> out;
  for (int a = 0; a < attempts && static_cast<int>(out.size()) < count; ++a) {
    Obstacle o = random_obstacle(rng, dim);
    bool ok = true;
    for (Eigen::Index j = 0; j + 1 < path.cols() && ok; ++j)
      ok = obstacle_segment_distance(o, path.col(j), path.col(j + 1)) > margin;
    if (path.cols() == 1) ok = obstacle_distance(o, path.col(0)) > margin;
    if (ok) out.push_back(std::move(o));
  }
  return out;
}

// A random piecewise-linear path inside [lo, 1 - lo]^dim with `segments`
// segments and endpoints at least `min_span` apart.
inline PointSet random_path(std::mt19937_64& rng, int dim, double lo, int segments, double min_span) {
  while (true) {
    PointSet p(dim, segments + 1);
    for (int j = 0; j <= segments; ++j) p.col(j) = uniform_point(rng, dim, lo, 1 - lo);
    if ((p.col(0) - p.col(segments)).norm() >= min_span) return p;
  }
}

// ---------------------------------------------------------------------------
// Snapping property checks.

struct SnapCase {
  Workspace workspace{2};
  PointSet sigma;
  double beta = 0;
  double gamma = 0;
  double rho = 0;
};

// A gamma-clear random path with obstacles kept further than gamma from it,
// and (beta, rho) chosen with beta^2 + (rho/2)^2 <= gamma^2.
inline SnapCase random_snap_case(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0, 1);
  SnapCase c;
  c.gamma = 0.03 + 0.05 * u(rng);
  const double angle = 0.2 + 1.1 * u(rng);  // split of gamma between beta and rho/2
  c.beta = c.gamma * std::cos(angle);
  c.rho = 2 * c.gamma * std::sin(angle);
  std::uniform_int_distribution<int> segs(1, 5);
  c.sigma = random_path(rng, dim, c.gamma, segs(rng), 2 * c.rho);
  c.workspace = Workspace(dim, obstacles_avoiding(rng, dim, c.sigma, c.gamma, 8));
  return c;
}

struct SnapCheck {
  int violations = 0;
  std::string detail;
};

inline SnapCheck check_snap_properties(const SnapCase& c, const SnappedPath& z) {
  SnapCheck out;
  auto fail = [&](const std::string& what) {
    if (out.violations++ == 0) out.detail = what;
  };
  const Eigen::Index l = z.points.cols();
  double sum = 0;
  for (Eigen::Index i = 0; i < l; ++i) {
    if ((z.points.col(i) - z.sigma_points.col(i)).norm() > c.beta + 1e-9) fail("(i) at " + std::to_string(i));
    if (i == 0) continue;
    const double step = (z.points.col(i) - z.points.col(i - 1)).norm();
    sum += step;
    if (step > 2 * c.beta + c.rho + 1e-9) fail("(iv) at " + std::to_string(i));
    if (!is_clear(segment_clearance(c.workspace, z.points.col(i - 1), z.points.col(i))))
      fail("(v) at " + std::to_string(i));
  }
  if (sum > (1 + 2 * c.beta / c.rho) * polyline_length(c.sigma) + 1e-9) fail("(vi)");
  return out;
}

// ---------------------------------------------------------------------------
// Roadmap oracles.

// Edge set of the radius graph by direct all-pairs enumeration.
inline std::set<std::pair<int, int>> brute_force_edges(const Workspace& w, const PointSet& vertices, double radius) {
  std::set<std::pair<int, int>> edges;
  for (int u = 0; u < vertices.cols(); ++u)
    for (int v = u + 1; v < vertices.cols(); ++v) {
      if ((vertices.col(u) - vertices.col(v)).squaredNorm() > radius * radius * (1 + 1e-12)) continue;
      if (segment_clearance(w, vertices.col(u), vertices.col(v)) > kGeomTol) edges.insert({u, v});
    }
  return edges;
}

inline std::set<std::pair<int, int>> roadmap_edges(const Roadmap& r) {
  std::set<std::pair<int, int>> edges;
  for (int u = 0; u < r.vertex_count(); ++u)
    for (const auto& e : r.neighbors(u))
      if (u < e.to) edges.insert({u, e.to});
  return edges;
}

// A planar corridor world: start and goal delta-clear of everything, the
// straight segment between them further than delta from every obstacle, and
// obstacles scattered elsewhere. OPT_delta is the straight-line length.
struct CorridorWorld {
  Workspace workspace{2};
  Point start;
  Point goal;
  double delta = 0;
  double opt = 0;
};

inline CorridorWorld random_corridor_world(std::mt19937_64& rng, double delta) {
  CorridorWorld c;
  c.delta = delta;
  const PointSet seg = random_path(rng, 2, delta + 1e-3, 1, 0.3);
  c.start = seg.col(0);
  c.goal = seg.col(1);
  c.opt = (c.goal - c.start).norm();
  c.workspace = Workspace(2, obstacles_avoiding(rng, 2, seg, delta, 12));
  return c;
}

// ---------------------------------------------------------------------------
// Random tensor edges: 2 or 3 robots on complete roadmaps over a few points in
// a crowded square, each robot staying or moving along one edge.

struct TensorEdgeCase {
  MultiRobotProblem problem{Workspace(2), {}};
  std::vector<Roadmap> roadmaps;
  CompositeVertex from;
  CompositeVertex to;
};

inline TensorEdgeCase random_tensor_edge(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1), radius(0.03, 0.09);
  TensorEdgeCase c;
  const int robots = u(rng) < 0.5 ? 2 : 3;
  const int n = 6;
  for (int i = 0; i < robots; ++i) {
    PointSet verts(2, n);
    for (int v = 0; v < n; ++v) verts.col(v) = uniform_point(rng, 2, 0.3, 0.7);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
    c.roadmaps.push_back(Roadmap::from_parts(verts, edges, 1.0, 0, 1));
    c.problem.robots.push_back(RobotSpec{radius(rng), 0.01, verts.col(0), verts.col(1)});
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  while (true) {
    c.from.assign(static_cast<std::size_t>(robots), 0);
    c.to.assign(static_cast<std::size_t>(robots), 0);
    bool moved = false;
    for (int i = 0; i < robots; ++i) {
      const auto si = static_cast<std::size_t>(i);
      c.from[si] = pick(rng);
      c.to[si] = c.from[si];
      if (u(rng) < 0.6) {
        while (c.to[si] == c.from[si]) c.to[si] = pick(rng);
        moved = true;
      }
    }
    if (moved) return c;
  }
}

// Minimum over sampled times and robot pairs of the separation minus the
// radius sum.
inline double dense_edge_margin(const TensorEdgeCase& c, int steps) {
  double best = std::numeric_limits<double>::infinity();
  const auto& rs = c.problem.robots;
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      const double d = sampled_pair_distance(c.roadmaps[i].vertex(c.from[i]), c.roadmaps[i].vertex(c.to[i]),
                                             c.roadmaps[j].vertex(c.from[j]), c.roadmaps[j].vertex(c.to[j]), steps);
      best = std::min(best, d - rs[i].radius - rs[j].radius);
    }
  return best;
}

}  // namespace tprm::testing

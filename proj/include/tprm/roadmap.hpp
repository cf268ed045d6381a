#pragma once

#include "tprm/geometry.hpp"
#include "tprm/sampling.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tprm {

// Raised when a planning problem itself is malformed (start or goal in
// collision, robots overlapping at rest, ...).
class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MotionProblem {
  Workspace workspace;
  Point start;
  Point goal;
};

struct Theorem1Params {
  GridParams grid;
  double radius = 0;
  double step = 0;  // rho = 2 delta / sqrt(1 + eps^2), so radius = 2 beta + rho
};

Theorem1Params theorem1_params(double epsilon, double delta, int dim);

struct RoadmapEdge {
  int to;
  double length;
};

class Roadmap {
 public:
  Roadmap() = default;

  // Builds from raw parts; `edges` lists each undirected edge once. Throws
  // std::invalid_argument on inconsistent input.
  static Roadmap from_parts(PointSet vertices, const std::vector<std::pair<int, int>>& edges, double radius,
                            int start, int goal, std::vector<int> sample_vertex = {});

  int vertex_count() const { return static_cast<int>(vertices_.cols()); }
  int dim() const { return static_cast<int>(vertices_.rows()); }
  const PointSet& vertices() const { return vertices_; }
  auto vertex(int v) const { return vertices_.col(v); }
  const std::vector<RoadmapEdge>& neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  std::size_t edge_count() const { return edge_count_; }
  double radius() const { return radius_; }
  int start_index() const { return start_; }
  int goal_index() const { return goal_; }
  // For each input sample, its vertex index or -1 if the sample collided.
  const std::vector<int>& sample_vertex() const { return sample_vertex_; }

  bool has_edge(int u, int v) const;
  std::optional<int> find_vertex(const PointRef& p) const;

 private:
  PointSet vertices_;
  std::vector<std::vector<RoadmapEdge>> adjacency_;
  std::vector<int> sample_vertex_;
  std::size_t edge_count_ = 0;
  double radius_ = 0;
  int start_ = -1;
  int goal_ = -1;
};

struct PrmOptions {
  BoundaryMode boundary = BoundaryMode::kIgnore;
  unsigned threads = 1;
};

// Vertices are the collision-free samples in input order, then start, then
// goal. Edges join vertex pairs within `radius` whose segment is clear.
Roadmap build_prm(const MotionProblem& problem, const SampleSet& samples, double radius,
                  const PrmOptions& options = {});

// Radius test shared by roadmap construction and its oracles: squared
// distance within radius^2 (1 + 1e-12), so lattice neighbours at exactly the
// connection radius are not lost to rounding.
bool within_radius(const PointRef& a, const PointRef& b, double radius);

struct RoadmapPath {
  std::vector<int> vertices;
  PointSet points;
  double length = 0;
};

// Dijkstra; among equal-length paths the one found with the smallest vertex
// indices settled first wins. Returns nullopt when unreachable.
std::optional<RoadmapPath> shortest_path(const Roadmap& r, int from, int to);
std::optional<RoadmapPath> shortest_path(const Roadmap& r, const PointRef& from, const PointRef& to);

// Shortest-path distance from every vertex to `target` (infinity if none).
std::vector<double> distances_to(const Roadmap& r, int target);

struct RoadmapMetadata {
  GridParams grid;
  std::string workspace_hash;
};

std::string workspace_hash(const Workspace& w);
std::string roadmap_to_json(const Roadmap& r, const RoadmapMetadata& meta);
Roadmap roadmap_from_json(const std::string& text, RoadmapMetadata* meta = nullptr);

}  // namespace tprm

#include "tprm/roadmap.hpp"

#include "tprm/spatial_hash.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <thread>

namespace tprm {

Theorem1Params theorem1_params(double epsilon, double delta, int dim) {
  validate_epsilon(epsilon);
  if (!(delta > 0) || !(delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 0.5)");
  Theorem1Params p;
  const double alpha = stretch_alpha(epsilon);
  p.grid = GridParams{alpha * delta, delta, dim};
  p.grid.validate();
  if (std::isinf(epsilon)) {
    p.radius = 2.0 * delta;
    p.step = 0.0;
  } else {
    const double s = std::sqrt(1.0 + epsilon * epsilon);
    p.radius = 2.0 * (epsilon + 1.0) / s * delta;
    p.step = 2.0 * delta / s;
  }
  return p;
}

bool within_radius(const PointRef& a, const PointRef& b, double radius) {
  return (a - b).squaredNorm() <= radius * radius * (1.0 + 1e-12);
}

Roadmap Roadmap::from_parts(PointSet vertices, const std::vector<std::pair<int, int>>& edges, double radius,
                            int start, int goal, std::vector<int> sample_vertex) {
  Roadmap r;
  const int n = static_cast<int>(vertices.cols());
  if (start < 0 || start >= n || goal < 0 || goal >= n) throw std::invalid_argument("roadmap: start/goal index out of range");
  r.vertices_ = std::move(vertices);
  r.radius_ = radius;
  r.start_ = start;
  r.goal_ = goal;
  r.sample_vertex_ = std::move(sample_vertex);
  r.adjacency_.assign(static_cast<std::size_t>(n), {});
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw std::invalid_argument("roadmap: bad edge");
    const double len = (r.vertices_.col(u) - r.vertices_.col(v)).norm();
    r.adjacency_[static_cast<std::size_t>(u)].push_back({v, len});
    r.adjacency_[static_cast<std::size_t>(v)].push_back({u, len});
  }
  for (auto& adj : r.adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const RoadmapEdge& a, const RoadmapEdge& b) { return a.to < b.to; });
    for (std::size_t i = 1; i < adj.size(); ++i)
      if (adj[i].to == adj[i - 1].to) throw std::invalid_argument("roadmap: duplicate edge");
  }
  r.edge_count_ = edges.size();
  return r;
}

bool Roadmap::has_edge(int u, int v) const {
  const auto& adj = neighbors(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const RoadmapEdge& e, int x) { return e.to < x; });
  return it != adj.end() && it->to == v;
}

std::optional<int> Roadmap::find_vertex(const PointRef& p) const {
  if (p.size() != vertices_.rows()) throw std::invalid_argument("find_vertex: dimension mismatch");
  for (int v = 0; v < vertex_count(); ++v)
    if (vertices_.col(v) == p) return v;
  return std::nullopt;
}

Roadmap build_prm(const MotionProblem& problem, const SampleSet& samples, double radius, const PrmOptions& options) {
  const Workspace& ws = problem.workspace;
  const int d = ws.dim();
  if (!(radius > 0) || !std::isfinite(radius)) throw std::invalid_argument("build_prm: radius must be positive");
  if (samples.size() > 0 && samples.dim() != d) throw std::invalid_argument("build_prm: sample dimension mismatch");
  if (problem.start.size() != d || problem.goal.size() != d)
    throw std::invalid_argument("build_prm: start/goal dimension mismatch");
  if (!is_clear(signed_clearance(ws, problem.start, options.boundary)))
    throw InvalidProblem("build_prm: start configuration is in collision");
  if (!is_clear(signed_clearance(ws, problem.goal, options.boundary)))
    throw InvalidProblem("build_prm: goal configuration is in collision");

  std::vector<int> sample_vertex(static_cast<std::size_t>(samples.size()), -1);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (is_clear(signed_clearance(ws, samples.points.col(i), options.boundary))) {
      sample_vertex[static_cast<std::size_t>(i)] = static_cast<int>(kept.size());
      kept.push_back(i);
    }
  }
  const int n = static_cast<int>(kept.size()) + 2;
  PointSet verts(d, n);
  for (std::size_t j = 0; j < kept.size(); ++j) verts.col(static_cast<Eigen::Index>(j)) = samples.points.col(kept[j]);
  const int start = n - 2;
  const int goal = n - 1;
  verts.col(start) = problem.start;
  verts.col(goal) = problem.goal;

  std::vector<std::pair<int, int>> candidates;
  {
    SpatialHash index(verts, radius);
    for (int u = 0; u < n; ++u) {
      for (Eigen::Index v : index.within(verts.col(u), radius * (1.0 + 1e-12))) {
        if (v > u && within_radius(verts.col(u), verts.col(v), radius)) candidates.emplace_back(u, static_cast<int>(v));
      }
    }
  }

  std::vector<char> clear(candidates.size(), 0);
  auto check_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const auto [u, v] = candidates[k];
      clear[k] = is_clear(segment_clearance(ws, verts.col(u), verts.col(v), options.boundary)) ? 1 : 0;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, 64));
  if (threads == 1 || candidates.size() < 4096) {
    check_range(0, candidates.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (candidates.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = std::min(candidates.size(), t * chunk);
      const std::size_t hi = std::min(candidates.size(), lo + chunk);
      pool.emplace_back(check_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (clear[k]) edges.push_back(candidates[k]);
  return Roadmap::from_parts(std::move(verts), edges, radius, start, goal, std::move(sample_vertex));
}

namespace {

struct Dijkstra {
  std::vector<double> dist;
  std::vector<int> parent;
};

Dijkstra run_dijkstra(const Roadmap& r, int source, int stop_at) {
  const auto n = static_cast<std::size_t>(r.vertex_count());
  Dijkstra out{std::vector<double>(n, kInfinity), std::vector<int>(n, -1)};
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
  out.dist[static_cast<std::size_t>(source)] = 0;
  open.emplace(0.0, source);
  std::vector<char> done(n, 0);
  while (!open.empty()) {
    const auto [du, u] = open.top();
    open.pop();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = 1;
    if (u == stop_at) break;
    for (const auto& e : r.neighbors(u)) {
      const double nd = du + e.length;
      if (nd < out.dist[static_cast<std::size_t>(e.to)]) {
        out.dist[static_cast<std::size_t>(e.to)] = nd;
        out.parent[static_cast<std::size_t>(e.to)] = u;
        open.emplace(nd, e.to);
      }
    }
  }
  return out;
}

}  // namespace

std::optional<RoadmapPath> shortest_path(const Roadmap& r, int from, int to) {
  if (from < 0 || to < 0 || from >= r.vertex_count() || to >= r.vertex_count())
    throw std::invalid_argument("shortest_path: vertex index out of range");
  const Dijkstra dj = run_dijkstra(r, from, to);
  if (std::isinf(dj.dist[static_cast<std::size_t>(to)])) return std::nullopt;
  RoadmapPath path;
  for (int v = to; v != -1; v = dj.parent[static_cast<std::size_t>(v)]) path.vertices.push_back(v);
  std::reverse(path.vertices.begin(), path.vertices.end());
  path.points.resize(r.dim(), static_cast<Eigen::Index>(path.vertices.size()));
  for (std::size_t i = 0; i < path.vertices.size(); ++i)
    path.points.col(static_cast<Eigen::Index>(i)) = r.vertex(path.vertices[i]);
  path.length = dj.dist[static_cast<std::size_t>(to)];
  return path;
}

std::optional<RoadmapPath> shortest_path(const Roadmap& r, const PointRef& from, const PointRef& to) {
  const auto a = r.find_vertex(from);
  const auto b = r.find_vertex(to);
  if (!a || !b) throw std::invalid_argument("shortest_path: endpoint is not a roadmap vertex");
  return shortest_path(r, *a, *b);
}

std::vector<double> distances_to(const Roadmap& r, int target) {
  if (target < 0 || target >= r.vertex_count()) throw std::invalid_argument("distances_to: vertex out of range");
  return run_dijkstra(r, target, -1).dist;
}

std::string workspace_hash(const Workspace& w) {
  std::string canon = "dim=" + std::to_string(w.dim());
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g,", x);
    canon += buf;
  };
  auto vec = [&](const auto& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) num(v[k]);
    canon += ';';
  };
  num(w.inflation());
  for (const auto& o : w.obstacles()) {
    std::visit(
        [&](const auto& ob) {
          using T = std::decay_t<decltype(ob)>;
          if constexpr (std::is_same_v<T, Disc>) {
            canon += "disc:";
            vec(ob.center);
            num(ob.radius);
          } else if constexpr (std::is_same_v<T, HyperSphere>) {
            canon += "sphere:";
            vec(ob.center);
            num(ob.radius);
          } else if constexpr (std::is_same_v<T, HyperBox>) {
            canon += "box:";
            vec(ob.lo);
            vec(ob.hi);
          } else {
            canon += "polygon:";
            for (const auto& v : ob.vertices) vec(v);
          }
        },
        o);
    canon += '|';
  }
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string roadmap_to_json(const Roadmap& r, const RoadmapMetadata& meta) {
  using nlohmann::json;
  json j;
  j["format"] = "tprm-roadmap";
  j["version"] = 1;
  j["dim"] = r.dim();
  j["radius"] = r.radius();
  j["start"] = r.start_index();
  j["goal"] = r.goal_index();
  json verts = json::array();
  for (int v = 0; v < r.vertex_count(); ++v) {
    json p = json::array();
    for (int k = 0; k < r.dim(); ++k) p.push_back(r.vertices()(k, v));
    verts.push_back(std::move(p));
  }
  j["vertices"] = std::move(verts);
  json edges = json::array();
  for (int u = 0; u < r.vertex_count(); ++u)
    for (const auto& e : r.neighbors(u))
      if (e.to > u) edges.push_back(json::array({u, e.to, e.length}));
  j["edges"] = std::move(edges);
  j["sample_vertex"] = r.sample_vertex();
  j["metadata"] = {{"grid", {{"beta", meta.grid.beta}, {"gamma", meta.grid.gamma}, {"dim", meta.grid.dim}}},
                   {"workspace_hash", meta.workspace_hash}};
  return j.dump();
}

Roadmap roadmap_from_json(const std::string& text, RoadmapMetadata* meta) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("roadmap json: ") + e.what());
  }
  try {
    if (j.at("format") != "tprm-roadmap" || j.at("version") != 1)
      throw std::invalid_argument("roadmap json: unsupported format or version");
    const int d = j.at("dim");
    const auto& vs = j.at("vertices");
    PointSet verts(d, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t v = 0; v < vs.size(); ++v) {
      if (static_cast<int>(vs[v].size()) != d) throw std::invalid_argument("roadmap json: vertex dimension mismatch");
      for (int k = 0; k < d; ++k) verts(k, static_cast<Eigen::Index>(v)) = vs[v][static_cast<std::size_t>(k)];
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    std::vector<int> sv = j.value("sample_vertex", std::vector<int>{});
    Roadmap r = Roadmap::from_parts(std::move(verts), edges, j.at("radius"), j.at("start"), j.at("goal"), std::move(sv));
    if (meta) {
      const auto& m = j.at("metadata");
      meta->grid = GridParams{m.at("grid").at("beta"), m.at("grid").at("gamma"), m.at("grid").at("dim")};
      meta->workspace_hash = m.at("workspace_hash");
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("roadmap json: ") + e.what());
  }
}

}  // namespace tprm

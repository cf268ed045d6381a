#include "support.hpp"
#include "tprm/roadmap.hpp"
#include "tprm/snap.hpp"
#include "tprm/spatial_hash.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace tprm;
using namespace tprm::testing;

namespace {

Eigen::VectorXd v2(double x, double y) { return Eigen::Vector2d(x, y); }

SampleSet explicit_samples(std::initializer_list<Eigen::Vector2d> pts) {
  SampleSet s;
  s.points.resize(2, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index j = 0;
  for (const auto& p : pts) s.points.col(j++) = p;
  return s;
}

}  // namespace

TEST_CASE("single-robot parameters") {
  const auto p = theorem1_params(1, 0.1, 2);
  CHECK(p.grid.beta == doctest::Approx(0.1 / std::sqrt(2.0)));
  CHECK(p.grid.gamma == 0.1);
  CHECK(p.radius == doctest::Approx(4 / std::sqrt(2.0) * 0.1));
  const auto inf = theorem1_params(kInfinity, 0.1, 2);
  CHECK(inf.grid.beta == doctest::Approx(0.1));
  CHECK(inf.radius == doctest::Approx(0.2));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> le(-3, 3), ud(0.001, 0.4);
  for (int i = 0; i < 100; ++i) {
    const double eps = std::pow(10.0, le(rng));
    const double delta = ud(rng);
    const auto q = theorem1_params(eps, delta, 2);
    const double rho = 2 * delta / std::sqrt(1 + eps * eps);
    CHECK(q.radius == doctest::Approx(2 * q.grid.beta + rho).epsilon(1e-12));
    CHECK(q.step == doctest::Approx(rho).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theorem1_params(0, 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(theorem1_params(1, 0.5, 2), std::invalid_argument);
}

TEST_CASE("prm construction examples") {
  const Workspace empty(2);
  const Roadmap r = build_prm({empty, v2(0.8, 0.8), v2(0.8, 0.5)}, explicit_samples({{0.2, 0.2}, {0.3, 0.2}}), 0.15);
  CHECK(r.vertex_count() == 4);
  CHECK(r.edge_count() == 1);
  CHECK(r.has_edge(0, 1));
  CHECK(r.start_index() == 2);
  CHECK(r.goal_index() == 3);
  CHECK(r.neighbors(0)[0].length == doctest::Approx(0.1));

  const Workspace blocked(2, {Disc{{0.5, 0.5}, 0.1}});
  const Roadmap b =
      build_prm({blocked, v2(0.1, 0.9), v2(0.9, 0.9)}, explicit_samples({{0.3, 0.5}, {0.7, 0.5}}), 0.5);
  CHECK_FALSE(b.has_edge(0, 1));

  // Colliding samples are dropped and reported as -1.
  const Roadmap c =
      build_prm({blocked, v2(0.1, 0.9), v2(0.9, 0.9)}, explicit_samples({{0.5, 0.5}, {0.7, 0.5}}), 0.5);
  CHECK(c.vertex_count() == 3);
  CHECK(c.sample_vertex() == std::vector<int>{-1, 0});

  CHECK_THROWS_AS(build_prm({blocked, v2(0.5, 0.5), v2(0.9, 0.9)}, SampleSet{}, 0.1), InvalidProblem);
  CHECK_THROWS_AS(build_prm({blocked, v2(0.1, 0.1), v2(0.55, 0.5)}, SampleSet{}, 0.1), InvalidProblem);
  CHECK_THROWS_AS(build_prm({empty, v2(0.1, 0.1), v2(0.9, 0.9)}, SampleSet{}, 0), std::invalid_argument);
}

TEST_CASE("interior grid vertices have at least 8 neighbours") {
  const auto p = theorem1_params(1, 0.1, 2);
  const SampleSet grid = staggered_grid(p.grid);
  const Roadmap r = build_prm({Workspace(2), v2(0.5, 0.5), v2(0.5, 0.5)}, grid, p.radius);
  int interior = 0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const auto q = grid.points.col(j);
    if (q.minCoeff() < 0.1 + p.radius || q.maxCoeff() > 0.9 - p.radius) continue;
    ++interior;
    CHECK(r.neighbors(static_cast<int>(j)).size() >= 8);
  }
  CHECK(interior > 0);
}

TEST_CASE("roadmap invariants and brute-force edge set") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 2;
    std::vector<Obstacle> obs;
    for (int k = 0; k < 5; ++k) obs.push_back(random_obstacle(rng, d));
    const Workspace w(d, obs, 0.005);
    Point s, g;
    do s = uniform_point(rng, d); while (!is_clear(signed_clearance(w, s)));
    do g = uniform_point(rng, d); while (!is_clear(signed_clearance(w, g)));
    const SampleSet samples = random_samples(150, 0.0, d, 1000 + trial);
    const double radius = 0.15;
    const Roadmap r = build_prm({w, s, g}, samples, radius, PrmOptions{BoundaryMode::kIgnore, 2});
    CHECK(roadmap_edges(r) == brute_force_edges(w, r.vertices(), radius));
    for (int u = 0; u < r.vertex_count(); ++u) {
      CHECK(is_clear(signed_clearance(w, r.vertex(u))));
      for (const auto& e : r.neighbors(u)) {
        CHECK(r.has_edge(e.to, u));
        CHECK(e.length == doctest::Approx((r.vertex(u) - r.vertex(e.to)).norm()));
        CHECK(e.length <= radius * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("shortest path edge cases") {
  const Workspace empty(2);
  const Roadmap same = build_prm({empty, v2(0.3, 0.3), v2(0.3, 0.3)}, SampleSet{}, 0.1);
  const auto p = shortest_path(same, same.start_index(), same.start_index());
  REQUIRE(p);
  CHECK(p->length == 0);
  CHECK(p->points.cols() == 1);

  const Roadmap apart = build_prm({empty, v2(0.1, 0.1), v2(0.9, 0.9)}, SampleSet{}, 0.1);
  CHECK_FALSE(shortest_path(apart, apart.start_index(), apart.goal_index()));
  CHECK_THROWS_AS(shortest_path(apart, v2(0.5, 0.5), v2(0.9, 0.9)), std::invalid_argument);
  CHECK_THROWS_AS(shortest_path(apart, 0, 7), std::invalid_argument);
}

TEST_CASE("shortest path is invariant under vertex permutation") {
  std::mt19937_64 rng(5);
  const Workspace w(2, {Disc{{0.5, 0.5}, 0.15}, HyperBox{Eigen::Vector2d(0.2, 0.6), Eigen::Vector2d(0.3, 0.9)}});
  const Roadmap r = build_prm({w, v2(0.1, 0.1), v2(0.9, 0.9)}, random_samples(300, 0, 2, 3), 0.15);
  const auto base = shortest_path(r, r.start_index(), r.goal_index());
  REQUIRE(base);
  const auto dist = distances_to(r, r.goal_index());
  CHECK(dist[static_cast<std::size_t>(r.start_index())] == doctest::Approx(base->length));

  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> perm(static_cast<std::size_t>(r.vertex_count()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    PointSet verts(2, r.vertex_count());
    for (int v = 0; v < r.vertex_count(); ++v) verts.col(perm[static_cast<std::size_t>(v)]) = r.vertex(v);
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : roadmap_edges(r))
      edges.emplace_back(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
    const Roadmap q = Roadmap::from_parts(verts, edges, r.radius(), perm[static_cast<std::size_t>(r.start_index())],
                                          perm[static_cast<std::size_t>(r.goal_index())]);
    const auto path = shortest_path(q, q.start_index(), q.goal_index());
    REQUIRE(path);
    CHECK(path->length == doctest::Approx(base->length).epsilon(1e-12));
  }
}

TEST_CASE("roadmap json round trip") {
  const auto p = theorem1_params(2, 0.1, 2);
  const Workspace w(2, {Disc{{0.5, 0.5}, 0.1}});
  const Roadmap r = build_prm({w, v2(0.15, 0.15), v2(0.85, 0.85)}, staggered_grid(p.grid), p.radius);
  const RoadmapMetadata meta{p.grid, workspace_hash(w)};
  RoadmapMetadata back_meta;
  const Roadmap back = roadmap_from_json(roadmap_to_json(r, meta), &back_meta);
  CHECK(back.vertices() == r.vertices());
  CHECK(roadmap_edges(back) == roadmap_edges(r));
  CHECK(back.radius() == r.radius());
  CHECK(back.start_index() == r.start_index());
  CHECK(back.goal_index() == r.goal_index());
  CHECK(back_meta.workspace_hash == meta.workspace_hash);
  CHECK(back_meta.grid.beta == p.grid.beta);
  CHECK(workspace_hash(w) != workspace_hash(Workspace(2)));
  CHECK_THROWS_AS(roadmap_from_json("{\"format\": \"other\"}"), std::invalid_argument);
  CHECK_THROWS_AS(roadmap_from_json("not json"), std::invalid_argument);
}

TEST_CASE("chord timing") {
  PointSet line(2, 2);
  line << 0.1, 0.7, 0.2, 0.2;
  const auto t = chord_times(line, 0.2);
  REQUIRE(t.size() == 4);
  CHECK(t[0] == 0);
  CHECK(t[1] == doctest::Approx(1.0 / 3));
  CHECK(t[2] == doctest::Approx(2.0 / 3));
  CHECK(t[3] == 1);

  CHECK_THROWS_AS(chord_times(line, 0.61), std::invalid_argument);
  CHECK_THROWS_AS(chord_times(line, 0), std::invalid_argument);

  // Chords along a bent path are exactly rho except the last one.
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const PointSet sigma = random_path(rng, 2 + trial % 2, 0.05, 4, 0.3);
    const double rho = 0.02 + 0.05 * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto times = chord_times(sigma, rho);
    CHECK(times.front() == 0);
    CHECK(times.back() == 1);
    for (std::size_t i = 1; i < times.size(); ++i) {
      CHECK(times[i] > times[i - 1]);
      const double chord = (polyline_at(sigma, times[i]) - polyline_at(sigma, times[i - 1])).norm();
      if (i + 1 < times.size())
        CHECK(chord == doctest::Approx(rho).epsilon(1e-7));
      else
        CHECK(chord <= rho + 1e-9);
    }
  }
}

TEST_CASE("snapped paths satisfy the snapping properties") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 2;
    const SnapCase c = random_snap_case(rng, d);
    REQUIRE(c.beta * c.beta + c.rho * c.rho / 4 <= c.gamma * c.gamma * (1 + 1e-12));
    const SampleSet grid = staggered_grid(GridParams{c.beta, c.gamma, d});
    const SnappedPath z = snap_path(c.sigma, c.rho, grid);
    const SnapCheck check = check_snap_properties(c, z);
    CHECK_MESSAGE(check.violations == 0, check.detail);
    CHECK(z.points.col(0) == c.sigma.col(0));
    CHECK(z.points.col(z.points.cols() - 1) == c.sigma.col(c.sigma.cols() - 1));
    for (Eigen::Index i = 1; i + 1 < z.points.cols(); ++i) {
      const long k = z.sample_indices[static_cast<std::size_t>(i)];
      REQUIRE(k >= 0);
      CHECK(z.points.col(i) == grid.points.col(k));
    }
  }
}

TEST_CASE("snap path errors") {
  PointSet line(2, 2);
  line << 0.1, 0.7, 0.2, 0.2;
  CHECK_THROWS_AS(snap_path(line, 0.2, SampleSet{}), std::invalid_argument);
  const SampleSet grid = staggered_grid(GridParams{0.05, 0.1, 2});
  CHECK_THROWS_AS(snap_path(line, -1, grid), std::invalid_argument);
  CHECK_THROWS_AS(snap_path(line, 0.7, grid), std::invalid_argument);
}

TEST_CASE("corridor worlds meet the stretch bound") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const CorridorWorld c = random_corridor_world(rng, 0.06);
    const auto p = theorem1_params(1, c.delta, 2);
    const Roadmap r = build_prm({c.workspace, c.start, c.goal}, staggered_grid(p.grid), p.radius);
    const auto path = shortest_path(r, r.start_index(), r.goal_index());
    REQUIRE(path);
    CHECK(path->length <= 2 * c.opt + 1e-9);
  }
}

TEST_CASE("spatial hash queries match brute force") {
  std::mt19937_64 rng(8);
  for (int d : {1, 2, 3, 4}) {
    const SampleSet s = random_samples(400, 0, d, static_cast<std::uint64_t>(d));
    const SpatialHash index(s.points, 0.1);
    for (int q = 0; q < 50; ++q) {
      const Point p = uniform_point(rng, d, -0.2, 1.2);
      const double radius = 0.05 + 0.2 * (q % 4);
      std::vector<Eigen::Index> want;
      Eigen::Index nearest = 0;
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        if ((s.points.col(j) - p).norm() <= radius) want.push_back(j);
        if ((s.points.col(j) - p).norm() < (s.points.col(nearest) - p).norm()) nearest = j;
      }
      CHECK(index.within(p, radius) == want);
      CHECK(index.nearest(p) == nearest);
    }
  }
}

TEST_CASE("nearest ties go to the lexicographically smallest point") {
  SampleSet s = explicit_samples({{0.6, 0.5}, {0.4, 0.5}, {0.5, 0.6}, {0.5, 0.4}});
  const SpatialHash index(s.points, 0.05);
  CHECK(index.nearest(v2(0.5, 0.5)) == 1);
  CHECK(lexicographic_less(v2(0.4, 0.9), v2(0.5, 0.1)));
  CHECK_FALSE(lexicographic_less(v2(0.5, 0.1), v2(0.5, 0.1)));
}

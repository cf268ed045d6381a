#include "support.hpp"
#include "tprm/geometry.hpp"

#include <doctest.h>

using namespace tprm;
using tprm::testing::sampled_obstacle_distance;
using tprm::testing::uniform_point;

namespace {

Eigen::VectorXd v2(double x, double y) { return Eigen::Vector2d(x, y); }

}  // namespace

TEST_CASE("signed clearance examples") {
  const Workspace empty(2);
  CHECK(signed_clearance(empty, v2(0.5, 0.5), BoundaryMode::kObstacle) == doctest::Approx(0.5));
  CHECK(std::isinf(signed_clearance(empty, v2(0.5, 0.5))));

  const Workspace w(2, {Disc{{0.5, 0.5}, 0.1}}, 0.05);
  CHECK(signed_clearance(w, v2(0.8, 0.5)) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(signed_clearance(w, v2(0.52, 0.5)) < 0);
}

TEST_CASE("segment clearance examples") {
  const Workspace empty(2);
  CHECK(std::isinf(segment_clearance(empty, v2(0.1, 0.1), v2(0.9, 0.7))));

  // Grazing at exactly the inflation radius counts as contact.
  const Workspace graze(2, {Disc{{0.5, 0.5}, 0.1}}, 0.05);
  const double g = segment_clearance(graze, v2(0.1, 0.65), v2(0.9, 0.65));
  CHECK(std::abs(g) < 1e-12);
  CHECK_FALSE(is_clear(g));

  const Workspace w(2, {Disc{{0.5, 0.5}, 0.1}});
  CHECK(segment_clearance(w, v2(0.1, 0.5), v2(0.9, 0.5)) == doctest::Approx(-0.1));
}

TEST_CASE("moving pair examples") {
  CHECK(moving_pair_min_distance(v2(0, 0), v2(0, 0), v2(1, 0), v2(1, 0)) == doctest::Approx(1));
  CHECK(moving_pair_min_distance(v2(0, 0), v2(1, 0), v2(1, 0), v2(0, 0)) == doctest::Approx(0).scale(1));
  CHECK(moving_pair_min_distance(v2(0, 0), v2(1, 0), v2(0.5, 0.3), v2(0.5, 0.3)) == doctest::Approx(0.3));
  CHECK_THROWS_AS(moving_pair_min_distance(v2(0, 0), v2(1, 0), Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0)),
                  std::invalid_argument);
}

TEST_CASE("moving pair symmetry, translation and reversal") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 3;
    const auto p0 = uniform_point(rng, d), p1 = uniform_point(rng, d);
    const auto q0 = uniform_point(rng, d), q1 = uniform_point(rng, d);
    const auto shift = uniform_point(rng, d, -2, 2);
    const double m = moving_pair_min_distance(p0, p1, q0, q1);
    CHECK(moving_pair_min_distance(q0, q1, p0, p1) == doctest::Approx(m).epsilon(1e-12));
    CHECK(moving_pair_min_distance(p0 + shift, p1 + shift, q0 + shift, q1 + shift) ==
          doctest::Approx(m).epsilon(1e-9));
    CHECK(moving_pair_min_distance(p1, p0, q1, q0) == doctest::Approx(m).epsilon(1e-12));
    CHECK(m <= tprm::testing::sampled_pair_distance(p0, p1, q0, q1, 2000) + 1e-12);
    CHECK(tprm::testing::sampled_pair_distance(p0, p1, q0, q1, 2000) - m < 1e-3);
  }
}

TEST_CASE("segment distance kernels against sampling") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 3;
    const auto a = uniform_point(rng, d), b = uniform_point(rng, d), c = uniform_point(rng, d),
               e = uniform_point(rng, d);
    const double ps = point_segment_distance(c, a, b);
    const double ss = segment_segment_distance(a, b, c, e);
    double ps_best = 1e9, ss_best = 1e9;
    for (int i = 0; i <= 400; ++i) {
      const Eigen::VectorXd x = a + (i / 400.0) * (b - a);
      ps_best = std::min(ps_best, (x - c).norm());
      for (int j = 0; j <= 400; j += 4) ss_best = std::min(ss_best, (x - (c + (j / 400.0) * (e - c))).norm());
    }
    CHECK(ps <= ps_best + 1e-12);
    CHECK(ps_best - ps < 5e-3);
    CHECK(ss <= ss_best + 1e-12);
    CHECK(ss_best - ss < 2e-2);
  }
  // Degenerate segments.
  CHECK(segment_segment_distance(v2(0, 0), v2(0, 0), v2(1, 1), v2(1, 1)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(segment_segment_distance(v2(0, 0), v2(1, 0), v2(0.5, 1), v2(0.5, 1)) == doctest::Approx(1));
}

TEST_CASE("obstacle distance matches boundary sampling in the plane") {
  std::mt19937_64 rng(3);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Obstacle o = tprm::testing::random_obstacle(rng, 2);
    for (int k = 0; k < 5; ++k) {
      const Eigen::VectorXd p = uniform_point(rng, 2);
      const double exact = obstacle_distance(o, p);
      // Keep away from the boundary, where the sample spacing dominates.
      if (std::abs(exact) < 0.01) continue;
      const double sampled = sampled_obstacle_distance(o, p, 10000);
      CHECK(std::abs(exact - sampled) <= 1e-6);
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("obstacle distance in three dimensions") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const Obstacle o = tprm::testing::random_obstacle(rng, 3);
    const Eigen::VectorXd p = uniform_point(rng, 3);
    const double exact = obstacle_distance(o, p);
    const double sampled = sampled_obstacle_distance(o, p, 40000);
    CHECK((exact > 0) == (sampled > 0));
    CHECK(std::abs(exact) <= std::abs(sampled) + 1e-12);
    CHECK(std::abs(exact - sampled) < 5e-3);
  }
}

TEST_CASE("segment clearance is the minimum along the segment") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 150; ++trial) {
    const int d = 2 + trial % 2;
    std::vector<Obstacle> obs;
    for (int k = 0; k < 4; ++k) obs.push_back(tprm::testing::random_obstacle(rng, d));
    const Workspace w(d, obs, 0.01 * (trial % 3));
    const auto a = uniform_point(rng, d), b = uniform_point(rng, d);
    const double exact = segment_clearance(w, a, b);
    const double sampled = tprm::testing::sampled_segment_clearance(w, a, b, 4000);
    CHECK(exact <= sampled + 1e-9);
    CHECK(sampled - exact < 1e-3);
  }
}

TEST_CASE("workspace validation") {
  CHECK_THROWS_AS(Workspace(2, {Disc{{0.5, 0.5}, -0.1}}), std::invalid_argument);
  CHECK_THROWS_AS(Workspace(2, {HyperBox{Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.4, 0.6)}}),
                  std::invalid_argument);
  // Clockwise polygon.
  CHECK_THROWS_AS(Workspace(2, {ConvexPolygon{{{0, 0}, {0, 1}, {1, 0}}}}), std::invalid_argument);
  CHECK_THROWS_AS(Workspace(3, {Disc{{0.5, 0.5}, 0.1}}), std::invalid_argument);
  const Workspace w(2);
  CHECK_THROWS_AS(signed_clearance(w, Eigen::Vector3d(0.5, 0.5, 0.5)), std::invalid_argument);
}

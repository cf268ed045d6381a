#include "tprm/scenarios.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tprm {

using nlohmann::json;

double static_clearance(const Scenario& s) {
  double mu = kInfinity;
  const auto n = s.robots.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = s.robots[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& b = s.robots[j];
      mu = std::min(mu, (a.start - b.start).norm() - a.radius - b.radius);
      mu = std::min(mu, (a.goal - b.goal).norm() - a.radius - b.radius);
    }
    const Workspace w = s.workspace.with_inflation(a.radius);
    mu = std::min(mu, signed_clearance(w, a.start));
    mu = std::min(mu, signed_clearance(w, a.goal));
  }
  return mu;
}

void validate_scenario(const Scenario& s) {
  if (s.name.empty()) throw std::invalid_argument("scenario needs a name");
  if (s.robots.empty()) throw std::invalid_argument("scenario " + s.name + " has no robots");
  for (const auto& r : s.robots) {
    if (!(r.radius > 0) || !std::isfinite(r.radius)) throw std::invalid_argument("robot radius must be positive");
    if (r.start.size() != s.workspace.dim() || r.goal.size() != s.workspace.dim())
      throw std::invalid_argument("robot start/goal dimension differs from workspace");
    if (!r.start.allFinite() || !r.goal.allFinite()) throw std::invalid_argument("robot start/goal not finite");
  }
  if (!(s.mu > 0) || !std::isfinite(s.mu)) throw std::invalid_argument("scenario mu must be positive");
  if (s.mu >= 0.5) throw std::invalid_argument("scenario mu must be below 0.5");
  if (s.move_cap && (*s.move_cap < 1 || *s.move_cap > s.robot_count()))
    throw std::invalid_argument("scenario move_cap must lie in [1, number of robots]");
  if (s.reference == ReferenceKind::kCirclePerimeter && !(s.circle_radius > 0))
    throw std::invalid_argument("circle reference needs a positive circle_radius");
  const double mu = static_clearance(s);
  if (!(std::abs(mu - s.mu) <= 1e-6)) {
    std::ostringstream os;
    os.precision(9);
    os << "scenario " << s.name << ": stored mu " << s.mu << " but start/goal clearance is " << mu;
    throw std::invalid_argument(os.str());
  }
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd json_vec(const json& a) {
  if (!a.is_array()) throw std::invalid_argument("expected a coordinate array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

Eigen::Vector2d json_vec2(const json& a) {
  const Eigen::VectorXd v = json_vec(a);
  if (v.size() != 2) throw std::invalid_argument("expected a 2D coordinate");
  return v;
}

const char* reference_name(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::kIndependent: return "independent";
    case ReferenceKind::kCirclePerimeter: return "circle_perimeter";
    case ReferenceKind::kEuclidean: return "euclidean";
  }
  return "independent";
}

ReferenceKind reference_from_name(const std::string& s) {
  if (s == "independent") return ReferenceKind::kIndependent;
  if (s == "circle_perimeter") return ReferenceKind::kCirclePerimeter;
  if (s == "euclidean") return ReferenceKind::kEuclidean;
  throw std::invalid_argument("unknown reference kind '" + s + "'");
}

json obstacle_json(const Obstacle& o) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return {{"type", "disc"}, {"center", vec_json(x.center)}, {"radius", x.radius}};
        } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          json vs = json::array();
          for (const auto& v : x.vertices) vs.push_back(vec_json(v));
          return {{"type", "polygon"}, {"vertices", vs}};
        } else if constexpr (std::is_same_v<T, HyperBox>) {
          return {{"type", "box"}, {"lo", vec_json(x.lo)}, {"hi", vec_json(x.hi)}};
        } else {
          return {{"type", "sphere"}, {"center", vec_json(x.center)}, {"radius", x.radius}};
        }
      },
      o);
}

Obstacle json_obstacle(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "disc") return Disc{json_vec2(j.at("center")), j.at("radius").get<double>()};
  if (type == "polygon") {
    ConvexPolygon p;
    for (const auto& v : j.at("vertices")) p.vertices.push_back(json_vec2(v));
    return p;
  }
  if (type == "box") return HyperBox{json_vec(j.at("lo")), json_vec(j.at("hi"))};
  if (type == "sphere") return HyperSphere{json_vec(j.at("center")), j.at("radius").get<double>()};
  throw std::invalid_argument("unknown obstacle type '" + type + "'");
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json obstacles = json::array();
  for (const auto& o : s.workspace.obstacles()) obstacles.push_back(obstacle_json(o));
  json robots = json::array();
  for (const auto& r : s.robots)
    robots.push_back({{"radius", r.radius}, {"start", vec_json(r.start)}, {"goal", vec_json(r.goal)}});
  json ref = {{"kind", reference_name(s.reference)}, {"lower_bound", s.reference_lower_bound}};
  if (s.reference == ReferenceKind::kCirclePerimeter) ref["circle_radius"] = s.circle_radius;
  json j = {{"format", "tprm-scenario"},
            {"version", 1},
            {"name", s.name},
            {"notes", s.notes},
            {"workspace", {{"dim", s.workspace.dim()}, {"obstacles", obstacles}}},
            {"robots", robots},
            {"mu", s.mu},
            {"reference", ref}};
  if (s.move_cap) j["move_cap"] = *s.move_cap;
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  Scenario s;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "tprm-scenario") throw std::invalid_argument("not a tprm-scenario file");
    if (j.at("version").get<int>() != 1) throw std::invalid_argument("unsupported scenario version");
    s.name = j.at("name").get<std::string>();
    s.notes = j.value("notes", "");
    const auto& ws = j.at("workspace");
    std::vector<Obstacle> obstacles;
    for (const auto& o : ws.at("obstacles")) obstacles.push_back(json_obstacle(o));
    s.workspace = Workspace(ws.at("dim").get<int>(), std::move(obstacles));
    for (const auto& r : j.at("robots"))
      s.robots.push_back({r.at("radius").get<double>(), json_vec(r.at("start")), json_vec(r.at("goal"))});
    s.mu = j.at("mu").get<double>();
    const auto& ref = j.at("reference");
    s.reference = reference_from_name(ref.at("kind").get<std::string>());
    s.reference_lower_bound = ref.value("lower_bound", false);
    s.circle_radius = ref.value("circle_radius", 0.0);
    if (j.contains("move_cap")) s.move_cap = j.at("move_cap").get<int>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario JSON: ") + e.what());
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

namespace {

Point p2(double x, double y) { return Eigen::Vector2d(x, y); }

HyperBox box(double x0, double x1, double y0, double y1) { return HyperBox{p2(x0, y0), p2(x1, y1)}; }

Scenario open2() {
  Scenario s;
  s.name = "open2";
  s.notes = "two robots, no obstacles; robot 2 sits on robot 1's straight route and has to step aside";
  s.robots = {{0.09, p2(0.30, 0.50), p2(0.70, 0.50)}, {0.09, p2(0.50, 0.50), p2(0.50, 0.28)}};
  s.mu = 0.02;
  s.reference = ReferenceKind::kIndependent;
  s.reference_lower_bound = true;
  return s;
}

Scenario spiral2() {
  Scenario s;
  s.name = "spiral2";
  s.notes = "two robots in a spiral: a cup open to the right inside a wall open to the left";
  std::vector<Obstacle> obs = {
      box(0.33, 0.35, 0.33, 0.67),  // cup back
      box(0.33, 0.60, 0.65, 0.67),  // cup top
      box(0.33, 0.60, 0.33, 0.35),  // cup bottom
      box(0.86, 0.88, 0.10, 0.90),  // outer right
      box(0.10, 0.88, 0.88, 0.90),  // outer top
      box(0.10, 0.88, 0.10, 0.12),  // outer bottom
  };
  s.workspace = Workspace(2, std::move(obs));
  s.robots = {{0.06, p2(0.45, 0.50), p2(0.17, 0.50)}, {0.06, p2(0.73, 0.55), p2(0.73, 0.24)}};
  s.mu = 0.04;
  s.reference = ReferenceKind::kIndependent;
  return s;
}

Scenario circle4() {
  constexpr double pi = std::numbers::pi;
  const double radius = 0.19;
  const double mu = 0.02;
  // Adjacent robots on a circle at 90 degree spacing are rho sqrt(2) apart.
  const double rho = (2 * radius + mu) / std::sqrt(2.0);
  const double post = rho - radius - mu;
  const double apothem = rho + radius + mu;
  const double thickness = 0.03;
  const int pieces = 72;
  const double half = pi / pieces;
  Scenario s;
  s.name = "circle4";
  s.notes = "four robots packed around a central post inside a circular barrier, each moving a quarter turn";
  std::vector<Obstacle> obs{Disc{Eigen::Vector2d(0.5, 0.5), post}};
  auto at = [](double r, double a) { return Eigen::Vector2d(0.5 + r * std::cos(a), 0.5 + r * std::sin(a)); };
  const double inner = apothem / std::cos(half);
  const double outer = (apothem + thickness) / std::cos(half);
  for (int k = 0; k < pieces; ++k) {
    const double a0 = (2 * k - 1) * half;
    const double a1 = (2 * k + 1) * half;
    obs.push_back(ConvexPolygon{{at(inner, a0), at(outer, a0), at(outer, a1), at(inner, a1)}});
  }
  s.workspace = Workspace(2, std::move(obs));
  for (int i = 0; i < 4; ++i) {
    const double a = pi / 4 + i * pi / 2;
    s.robots.push_back({radius, at(rho, a), at(rho, a + pi / 2)});
  }
  s.mu = mu;
  s.reference = ReferenceKind::kCirclePerimeter;
  s.circle_radius = rho;
  s.move_cap = 4;
  return s;
}

Scenario seven7() {
  Scenario s;
  s.name = "seven7";
  s.notes = "seven robots in three rows, each shifting along its row behind the robot parked ahead";
  const double r = 0.08;
  s.robots = {
      {r, p2(0.10, 0.25), p2(0.45, 0.25)}, {r, p2(0.35, 0.25), p2(0.70, 0.25)}, {r, p2(0.60, 0.25), p2(0.90, 0.25)},
      {r, p2(0.85, 0.50), p2(0.45, 0.50)}, {r, p2(0.55, 0.50), p2(0.15, 0.50)},
      {r, p2(0.15, 0.75), p2(0.60, 0.75)}, {r, p2(0.40, 0.75), p2(0.85, 0.75)},
  };
  s.mu = 0.04;
  s.reference = ReferenceKind::kEuclidean;
  return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out{open2(), spiral2(), circle4(), seven7()};
  for (const auto& s : out) validate_scenario(s);
  return out;
}

Scenario find_scenario(const std::string& name_or_path) {
  for (auto& s : builtin_scenarios())
    if (s.name == name_or_path) return s;
  std::ifstream probe(name_or_path);
  if (probe) return load_scenario(name_or_path);
  throw std::invalid_argument("unknown scenario '" + name_or_path + "' (neither built-in nor a readable file)");
}

MultiRobotProblem to_problem(const Scenario& s, double delta) {
  MultiRobotProblem p{s.workspace.with_inflation(0.0), {}, CostMetric::kSum};
  for (const auto& r : s.robots) p.robots.push_back({r.radius, delta, r.start, r.goal});
  return p;
}

double single_robot_oracle(const Workspace& w, double radius, double delta, const PointRef& start,
                           const PointRef& goal, const OracleOptions& options) {
  // The margin keeps starts and goals whose clearance is exactly delta free.
  const Workspace inflated = w.with_inflation(radius + delta - 1e-6);
  if (is_clear(segment_clearance(inflated, start, goal))) return (goal - start).norm();
  const double beta = options.beta > 0 ? options.beta : delta / 8;
  const GridParams g{beta, delta, w.dim()};
  const Roadmap rm = build_prm(MotionProblem{inflated, start, goal}, staggered_grid(g), 4 * beta,
                               PrmOptions{BoundaryMode::kIgnore, options.threads});
  const auto sp = shortest_path(rm, rm.start_index(), rm.goal_index());
  if (!sp) return kInfinity;
  // Greedy string pulling: from each kept waypoint jump to the furthest
  // waypoint still visible.
  const PointSet& pts = sp->points;
  const Eigen::Index n = pts.cols();
  double length = 0;
  Eigen::Index i = 0;
  while (i < n - 1) {
    Eigen::Index j = n - 1;
    while (j > i + 1 && !is_clear(segment_clearance(inflated, pts.col(i), pts.col(j)))) --j;
    length += (pts.col(j) - pts.col(i)).norm();
    i = j;
  }
  return length;
}

ReferenceCost reference_cost(const Scenario& s, const OracleOptions& options) {
  ReferenceCost out;
  out.lower_bound = s.reference_lower_bound;
  switch (s.reference) {
    case ReferenceKind::kIndependent:
      for (const auto& r : s.robots) out.value += single_robot_oracle(s.workspace, r.radius, s.mu, r.start, r.goal, options);
      break;
    case ReferenceKind::kCirclePerimeter:
      out.value = 2 * std::numbers::pi * s.circle_radius;
      break;
    case ReferenceKind::kEuclidean:
      for (const auto& r : s.robots) out.value += (r.goal - r.start).norm();
      break;
  }
  return out;
}

}  // namespace tprm

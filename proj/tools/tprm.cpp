// tprm command-line front end. Results go to stdout (or --out), progress and
// diagnostics to stderr.
//
// Exit codes: 0 success, 1 planning failure or failed check, 2 invalid input,
// 3 internal invariant violation.

#include "tprm/mrmp.hpp"
#include "tprm/roadmap.hpp"
#include "tprm/sampling.hpp"
#include "tprm/scenarios.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace tprm;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kPlanFailure = 1;
constexpr int kInvalidInput = 2;
constexpr int kInternal = 3;

// An internal invariant was violated (e.g. a returned plan fails
// independent validation).
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned default_threads() {
  if (const char* env = std::getenv("TPRM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    std::cerr << "warning: ignoring TPRM_THREADS='" << env << "'\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> parse_epsilons(const std::vector<std::string>& items) {
  std::vector<double> out;
  if (items.empty() || (items.size() == 1 && items[0].empty())) throw std::invalid_argument("empty epsilon list");
  for (const auto& s : items) out.push_back(parse_epsilon(s));
  return out;
}

Point parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    std::size_t used = 0;
    try {
      v.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) throw std::invalid_argument("bad coordinate list '" + text + "'");
  }
  if (v.empty()) throw std::invalid_argument("empty coordinate list");
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::invalid_argument("cannot write " + out_path);
  f << text;
}

// ---------------------------------------------------------------------------

struct GridArgs {
  double beta = 0, gamma = 0;
  int dim = 2;
  std::string format = "csv";
  std::string out;
};

int cmd_grid(const GridArgs& a) {
  const GridParams g{a.beta, a.gamma, a.dim};
  const SampleSet s = staggered_grid(g);
  std::ostringstream os;
  if (a.format == "json") {
    json pts = json::array();
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      json p = json::array();
      for (int i = 0; i < s.dim(); ++i) p.push_back(s.points(i, j));
      pts.push_back(p);
    }
    const json j = {{"beta", a.beta}, {"gamma", a.gamma}, {"dim", a.dim}, {"layers", grid_layer_count(g)},
                    {"count", s.size()}, {"points", pts}};
    os << j.dump() << "\n";
  } else {
    for (int i = 0; i < s.dim(); ++i) os << (i ? "," : "") << "x" << i;
    os << "\n";
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      for (int i = 0; i < s.dim(); ++i) os << (i ? "," : "") << num(s.points(i, j));
      os << "\n";
    }
  }
  emit(a.out, os.str());
  std::cerr << "grid: " << s.size() << " points (M = " << grid_layer_count(g) << ")\n";
  return kOk;
}

struct BoundsArgs {
  bool table1 = false;
  bool multi_robot = false;
  bool raw = false;
  std::vector<double> deltas;
  std::vector<std::string> epsilons;
  std::vector<int> dims;
  std::string out;
};

int cmd_bounds(BoundsArgs a) {
  if (a.table1 && a.multi_robot) throw CLI::ValidationError("--table1 and --multi-robot are exclusive");
  std::vector<double> eps;
  if (a.table1) {
    a.deltas = {0.25, 0.1, 0.05, 0.01};
    a.dims = {2, 3, 4, 5, 6};
    eps = {kInfinity, 1, 0.25, 0.1};
  } else if (a.multi_robot) {
    if (a.deltas.empty()) a.deltas = {0.1};
    if (a.dims.empty()) a.dims = {2, 3, 4, 5, 6};
    eps = a.epsilons.empty() ? std::vector<double>{kInfinity, 5, 1, 0.5, 0.25} : parse_epsilons(a.epsilons);
  } else {
    if (a.deltas.empty() || a.dims.empty() || a.epsilons.empty())
      throw std::invalid_argument("bounds needs --delta, --dim and --epsilon lists (or --table1 / --multi-robot)");
    eps = parse_epsilons(a.epsilons);
  }
  for (int d : a.dims)
    if (d < 1) throw std::invalid_argument("dimensions must be positive");
  auto cell = [&](double v) { return a.raw ? num(v) : format_count(v); };
  std::ostringstream os;
  os << (a.multi_robot ? "delta,d,epsilon,count\n" : "delta,d,epsilon,lb,curr,prev\n");
  for (double delta : a.deltas)
    for (int d : a.dims)
      for (double e : eps) {
        const BoundsQuery q{e, delta, d};
        q.validate();
        os << format_epsilon(delta) << ',' << d << ',' << format_epsilon(e) << ',';
        if (a.multi_robot) {
          os << cell(static_cast<double>(multi_robot_sample_count(q))) << "\n";
          continue;
        }
        if (std::isinf(e)) os << cell(size_lower_bound(q));
        os << ',' << cell(static_cast<double>(size_curr(q))) << ',' << cell(size_prev(q)) << "\n";
      }
  emit(a.out, os.str());
  return kOk;
}

struct CoverArgs {
  double beta = 0, gamma = 0;
  int dim = 2;
  std::size_t trials = 100000;
  std::uint64_t seed = 0x5eed;
};

int cmd_cover_check(const CoverArgs& a) {
  const GridParams g{a.beta, a.gamma, a.dim};
  const SampleSet s = staggered_grid(g);
  const CoverReport r = verify_beta_cover(s, g, a.trials, a.seed);
  std::cout << "points=" << s.size() << " trials=" << r.trials << " max_gap=" << num(r.max_gap)
            << " beta=" << num(a.beta) << " ok=" << (r.ok ? "true" : "false") << "\n";
  return r.ok ? kOk : kPlanFailure;
}

struct PlanArgs {
  std::string scenario;
  int robot = 0;
  std::string start, goal;
  std::string epsilon = "1";
  double delta = 0;
  bool boundary = false;
  unsigned threads = 1;
  std::string format = "json";
  std::string out;
};

int cmd_plan(const PlanArgs& a) {
  const double eps = parse_epsilon(a.epsilon);
  Workspace ws(2);
  Point start, goal;
  double delta = a.delta;
  if (!a.scenario.empty()) {
    const Scenario s = find_scenario(a.scenario);
    if (a.robot < 0 || a.robot >= s.robot_count()) throw std::invalid_argument("--robot out of range");
    const auto& r = s.robots[static_cast<std::size_t>(a.robot)];
    ws = s.workspace.with_inflation(r.radius);
    start = r.start;
    goal = r.goal;
    if (delta == 0) delta = s.mu;
  }
  if (!a.start.empty()) start = parse_point(a.start);
  if (!a.goal.empty()) goal = parse_point(a.goal);
  if (start.size() == 0 || goal.size() == 0) throw std::invalid_argument("plan needs --scenario or --start/--goal");
  if (start.size() != goal.size()) throw std::invalid_argument("start and goal dimensions differ");
  if (a.scenario.empty()) ws = Workspace(static_cast<int>(start.size()));
  if (start.size() != ws.dim()) throw std::invalid_argument("start dimension differs from the workspace");
  if (!(delta > 0)) throw std::invalid_argument("plan needs --delta > 0");

  const auto t0 = std::chrono::steady_clock::now();
  const Theorem1Params p = theorem1_params(eps, delta, ws.dim());
  const SampleSet samples = staggered_grid(p.grid);
  const PrmOptions opts{a.boundary ? BoundaryMode::kObstacle : BoundaryMode::kIgnore, a.threads};
  const Roadmap rm = build_prm(MotionProblem{ws, start, goal}, samples, p.radius, opts);
  const auto sp = shortest_path(rm, rm.start_index(), rm.goal_index());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream summary;
  summary << "status=" << (sp ? "solved" : "unreachable") << " cost=" << (sp ? num(sp->length) : "inf")
          << " epsilon=" << format_epsilon(eps) << " delta=" << num(delta) << " samples=" << samples.size()
          << " vertices=" << rm.vertex_count() << " edges=" << rm.edge_count() << " radius=" << num(p.radius)
          << " seconds=" << short_num(secs) << "\n";
  if (sp) {
    std::ostringstream os;
    if (a.format == "csv") {
      for (int i = 0; i < rm.dim(); ++i) os << (i ? "," : "") << "x" << i;
      os << "\n";
      for (Eigen::Index k = 0; k < sp->points.cols(); ++k) {
        for (int i = 0; i < rm.dim(); ++i) os << (i ? "," : "") << num(sp->points(i, k));
        os << "\n";
      }
    } else {
      json pts = json::array();
      for (Eigen::Index k = 0; k < sp->points.cols(); ++k) {
        json q = json::array();
        for (int i = 0; i < rm.dim(); ++i) q.push_back(sp->points(i, k));
        pts.push_back(q);
      }
      os << json{{"cost", sp->length}, {"epsilon", format_epsilon(eps)}, {"delta", delta}, {"path", pts}}.dump()
         << "\n";
    }
    emit(a.out, os.str());
  }
  (a.out.empty() ? std::cerr : std::cout) << summary.str();
  return sp ? kOk : kPlanFailure;
}

struct MrmpArgs {
  std::string scenario;
  std::string epsilon = "inf";
  std::optional<int> move_cap;
  std::string mode = "astar";
  std::size_t max_expansions = 30'000'000;
  double time_limit = 0;
  unsigned threads = 1;
  int validate_steps = 10000;
  std::string format = "json";
  std::string out;
};

PlannerMode parse_mode(const std::string& m) {
  if (m == "astar") return PlannerMode::kCompositeAStar;
  if (m == "prioritized") return PlannerMode::kPrioritizedTiming;
  throw std::invalid_argument("unknown planner mode '" + m + "'");
}

std::string composite_path_json(const Scenario& s, double eps, const CompositePath& p) {
  json robots = json::array();
  for (std::size_t i = 0; i < p.trajectories.size(); ++i) {
    json pts = json::array();
    const PointSet& t = p.trajectories[i];
    for (Eigen::Index k = 0; k < t.cols(); ++k) {
      json q = json::array();
      for (Eigen::Index c = 0; c < t.rows(); ++c) q.push_back(t(c, k));
      pts.push_back(q);
    }
    robots.push_back({{"length", p.robot_lengths[i]}, {"trajectory", pts}});
  }
  return json{{"scenario", s.name}, {"epsilon", format_epsilon(eps)}, {"cost", p.cost}, {"robots", robots}}.dump() +
         "\n";
}

std::string composite_path_csv(const CompositePath& p) {
  std::ostringstream os;
  os << "step,robot";
  const Eigen::Index d = p.trajectories.empty() ? 0 : p.trajectories[0].rows();
  for (Eigen::Index c = 0; c < d; ++c) os << ",x" << c;
  os << "\n";
  for (std::size_t k = 0; k < p.waypoints.size(); ++k)
    for (std::size_t i = 0; i < p.trajectories.size(); ++i) {
      os << k << ',' << i;
      for (Eigen::Index c = 0; c < d; ++c) os << ',' << num(p.trajectories[i](c, static_cast<Eigen::Index>(k)));
      os << "\n";
    }
  return os.str();
}

int cmd_mrmp_plan(const MrmpArgs& a) {
  const Scenario s = find_scenario(a.scenario);
  const double eps = parse_epsilon(a.epsilon);
  const MultiRobotProblem problem = to_problem(s, s.mu);
  PlannerConfig pc;
  pc.epsilon = eps;
  pc.move_cap = a.move_cap ? a.move_cap : s.move_cap;
  pc.mode = parse_mode(a.mode);
  pc.max_expansions = a.max_expansions;
  pc.time_limit_s = a.time_limit;
  effective_move_cap(pc, problem.robot_count());

  const auto t0 = std::chrono::steady_clock::now();
  std::cerr << "mrmp-plan: building " << problem.robot_count() << " roadmaps\n";
  const auto roadmaps = build_robot_roadmaps(problem, eps, PrmOptions{BoundaryMode::kIgnore, a.threads});
  std::cerr << "mrmp-plan: searching\n";
  const PlanResult res = plan(problem, roadmaps, pc);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const ReferenceCost ref = reference_cost(s, OracleOptions{0, a.threads});

  std::ostringstream summary;
  summary << "scenario=" << s.name << " epsilon=" << format_epsilon(eps) << " mode=" << a.mode
          << " move_cap=" << effective_move_cap(pc, problem.robot_count()) << " status=" << to_string(res.status);
  int code = kOk;
  if (res.solved()) {
    const ValidationReport rep = dense_validate(problem, *res.path, a.validate_steps);
    if (!rep.ok) throw InvariantViolation("returned plan fails dense validation: " + rep.detail);
    const double ratio = res.path->cost / ref.value;
    summary << " cost=" << num(res.path->cost) << " reference=" << num(ref.value)
            << (ref.lower_bound ? " reference_kind=lower_bound" : "") << " ratio=" << short_num(ratio)
            << " bound=" << short_num(1 + eps);
    std::string artifact;
    if (a.format == "csv") artifact = composite_path_csv(*res.path);
    else if (a.format == "svg") artifact = render_svg(s, RenderOptions{600, &*res.path, nullptr});
    else artifact = composite_path_json(s, eps, *res.path);
    emit(a.out, artifact);
  } else {
    summary << " message=\"" << res.message << "\"";
    code = kPlanFailure;
  }
  summary << " samples=" << roadmaps.front().sample_vertex().size() << " expansions=" << res.stats.expansions
          << " seconds=" << short_num(secs) << "\n";
  (a.out.empty() ? std::cerr : std::cout) << summary.str();
  return code;
}

struct ExperimentArgs {
  std::vector<std::string> scenarios;
  std::vector<std::string> epsilons;
  std::optional<int> move_cap;
  std::string mode = "astar";
  bool compare_random = false;
  int trials = 10;
  std::optional<std::uint64_t> seed;
  std::size_t max_expansions = 30'000'000;
  double time_limit = 0;
  unsigned threads = 1;
  int validate_steps = 10000;
  bool no_timing = false;
  std::string out;
};

int cmd_experiment(const ExperimentArgs& a) {
  SweepConfig cfg;
  cfg.epsilons = a.epsilons.empty() ? default_epsilons() : parse_epsilons(a.epsilons);
  cfg.mode = parse_mode(a.mode);
  cfg.move_cap = a.move_cap;
  cfg.max_expansions = a.max_expansions;
  cfg.time_limit_s = a.time_limit;
  cfg.threads = a.threads;
  cfg.validate_steps = a.validate_steps;
  if (a.compare_random && !a.seed) throw std::invalid_argument("--compare-random needs an explicit --seed");
  if (a.trials < 1) throw std::invalid_argument("--trials must be positive");
  std::vector<Scenario> scenes;
  if (a.scenarios.empty() || (a.scenarios.size() == 1 && a.scenarios[0] == "all")) scenes = builtin_scenarios();
  else
    for (const auto& n : a.scenarios) scenes.push_back(find_scenario(n));

  int code = kOk;
  std::string text;
  if (a.compare_random) {
    std::vector<ComparisonRow> all;
    for (const auto& s : scenes) {
      std::cerr << "experiment: " << s.name << " staggered vs " << a.trials << " random trials\n";
      for (auto& r : run_random_comparison(s, cfg, a.trials, *a.seed)) {
        std::cerr << "  eps=" << format_epsilon(r.epsilon) << " staggered=" << (r.staggered_success ? "ok" : "fail")
                  << " random_rate=" << short_num(r.random_success_rate()) << "\n";
        if (!r.staggered_success) code = kPlanFailure;
        all.push_back(std::move(r));
      }
    }
    text = comparison_to_csv(all);
  } else {
    std::vector<SweepRow> all;
    for (const auto& s : scenes) {
      std::cerr << "experiment: " << s.name << " reference cost\n";
      const ReferenceCost ref = reference_cost(s, OracleOptions{0, a.threads});
      std::cerr << "experiment: " << s.name << " sweeping " << cfg.epsilons.size() << " epsilons\n";
      ExperimentResult r = run_ratio_sweep(s, cfg, ref);
      for (auto& row : r.rows) {
        std::cerr << "  eps=" << format_epsilon(row.epsilon) << " status=" << row.status
                  << " ratio=" << short_num(row.ratio) << "\n";
        if (row.status.rfind("validation_failed", 0) == 0) throw InvariantViolation(s.name + ": " + row.status);
        if (row.success && row.ratio > 1 + row.epsilon + 1e-9) code = kPlanFailure;
        if (a.no_timing) row.seconds = 0;
        all.push_back(std::move(row));
      }
    }
    text = sweep_to_csv(all);
  }
  emit(a.out, text);
  return code;
}

struct RenderArgs {
  std::string scenario;
  std::string epsilon;
  std::optional<int> move_cap;
  bool roadmap = false;
  unsigned threads = 1;
  int size = 600;
  std::string format = "svg";
  std::string out;
};

int cmd_render(const RenderArgs& a) {
  const Scenario s = find_scenario(a.scenario);
  if (a.format == "json") {
    emit(a.out, scenario_to_json(s));
    return kOk;
  }
  std::optional<CompositePath> path;
  std::vector<Roadmap> roadmaps;
  int code = kOk;
  if (!a.epsilon.empty()) {
    const double eps = parse_epsilon(a.epsilon);
    const MultiRobotProblem problem = to_problem(s, s.mu);
    roadmaps = build_robot_roadmaps(problem, eps, PrmOptions{BoundaryMode::kIgnore, a.threads});
    PlannerConfig pc;
    pc.epsilon = eps;
    pc.move_cap = a.move_cap ? a.move_cap : s.move_cap;
    const PlanResult res = plan(problem, roadmaps, pc);
    if (res.solved()) path = res.path;
    else {
      std::cerr << "render: planning " << to_string(res.status) << ", drawing the scene only\n";
      code = kPlanFailure;
    }
  }
  RenderOptions ro;
  ro.size_px = a.size;
  ro.path = path ? &*path : nullptr;
  ro.roadmaps = a.roadmap && !roadmaps.empty() ? &roadmaps : nullptr;
  emit(a.out, render_svg(s, ro));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staggered-grid PRMs for single- and multi-robot motion planning"};
  app.require_subcommand(1, 1);
  const unsigned threads = default_threads();

  GridArgs grid;
  auto* g = app.add_subcommand("grid", "Emit a staggered grid");
  g->add_option("--beta", grid.beta, "cover radius")->required();
  g->add_option("--gamma", grid.gamma, "margin to the cube boundary")->required();
  g->add_option("--dim", grid.dim, "dimension")->required();
  g->add_option("--format", grid.format)->check(CLI::IsMember({"csv", "json"}));
  g->add_option("--out", grid.out, "output file (default stdout)");

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "Sample-size tables");
  auto* t1 = b->add_flag("--table1", bounds.table1, "single-robot table over delta, d and epsilon");
  auto* mr = b->add_flag("--multi-robot", bounds.multi_robot, "multi-robot per-robot sample counts");
  t1->excludes(mr);
  for (auto* list : {b->add_option("--delta", bounds.deltas)->delimiter(','),
                      b->add_option("--epsilon", bounds.epsilons, "list, 'inf' allowed")->delimiter(','),
                      b->add_option("--dim", bounds.dims)->delimiter(',')})
    t1->excludes(list);
  b->add_flag("--raw", bounds.raw, "full-precision values instead of display rounding");
  b->add_option("--out", bounds.out);

  CoverArgs cover;
  auto* c = app.add_subcommand("cover-check", "Monte-Carlo check that a staggered grid is a beta-cover");
  c->add_option("--beta", cover.beta)->required();
  c->add_option("--gamma", cover.gamma)->required();
  c->add_option("--dim", cover.dim)->required();
  c->add_option("--trials", cover.trials);
  c->add_option("--seed", cover.seed);

  PlanArgs pl;
  pl.threads = threads;
  auto* p = app.add_subcommand("plan", "Single-robot planning on a staggered-grid PRM");
  p->add_option("--scenario", pl.scenario, "built-in name or JSON file supplying obstacles and endpoints");
  p->add_option("--robot", pl.robot, "robot of the scenario to plan for");
  p->add_option("--start", pl.start, "x,y,...");
  p->add_option("--goal", pl.goal, "x,y,...");
  p->add_option("--epsilon", pl.epsilon, "stretch, 'inf' allowed");
  p->add_option("--delta", pl.delta, "clearance (default: scenario mu)");
  p->add_flag("--boundary", pl.boundary, "treat the unit cube boundary as an obstacle");
  p->add_option("--threads", pl.threads);
  p->add_option("--format", pl.format)->check(CLI::IsMember({"csv", "json"}));
  p->add_option("--out", pl.out);

  MrmpArgs mp;
  mp.threads = threads;
  auto* m = app.add_subcommand("mrmp-plan", "Multi-robot planning on the tensor roadmap");
  m->add_option("--scenario", mp.scenario)->required();
  m->add_option("--epsilon", mp.epsilon, "stretch, 'inf' allowed");
  m->add_option("--move-cap", mp.move_cap, "max robots moving per composite edge");
  m->add_option("--mode", mp.mode)->check(CLI::IsMember({"astar", "prioritized"}));
  m->add_option("--max-expansions", mp.max_expansions);
  m->add_option("--time-limit", mp.time_limit, "seconds, 0 = none");
  m->add_option("--threads", mp.threads);
  m->add_option("--validate-steps", mp.validate_steps);
  m->add_option("--format", mp.format)->check(CLI::IsMember({"csv", "json", "svg"}));
  m->add_option("--out", mp.out);

  ExperimentArgs ex;
  ex.threads = threads;
  auto* e = app.add_subcommand("experiment", "Approximation-ratio sweep or random-vs-staggered comparison");
  e->add_option("--scenario", ex.scenarios, "built-in names, files, or 'all'")->delimiter(',');
  e->add_option("--epsilons", ex.epsilons, "default inf,50,20,10,5,2,1.5,1,0.75")->delimiter(',');
  e->add_option("--move-cap", ex.move_cap);
  e->add_option("--mode", ex.mode)->check(CLI::IsMember({"astar", "prioritized"}));
  e->add_flag("--compare-random", ex.compare_random);
  e->add_option("--trials", ex.trials);
  e->add_option("--seed", ex.seed);
  e->add_option("--max-expansions", ex.max_expansions);
  e->add_option("--time-limit", ex.time_limit, "per planning run, seconds");
  e->add_option("--threads", ex.threads);
  e->add_option("--validate-steps", ex.validate_steps);
  e->add_flag("--no-timing", ex.no_timing, "write 0 in the seconds column for byte-stable output");
  e->add_option("--out", ex.out);

  RenderArgs rd;
  rd.threads = threads;
  auto* r = app.add_subcommand("render", "SVG of a scenario, optionally with a plan; --format json dumps the scene");
  r->add_option("--scenario", rd.scenario)->required();
  r->add_option("--epsilon", rd.epsilon, "plan at this stretch and draw the trajectories");
  r->add_option("--move-cap", rd.move_cap);
  r->add_flag("--roadmap", rd.roadmap, "draw the roadmaps (needs --epsilon)");
  r->add_option("--size", rd.size, "pixels");
  r->add_option("--threads", rd.threads);
  r->add_option("--format", rd.format)->check(CLI::IsMember({"svg", "json"}));
  r->add_option("--out", rd.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kInvalidInput;
  }

  try {
    if (*g) return cmd_grid(grid);
    if (*b) return cmd_bounds(bounds);
    if (*c) return cmd_cover_check(cover);
    if (*p) return cmd_plan(pl);
    if (*m) return cmd_mrmp_plan(mp);
    if (*e) return cmd_experiment(ex);
    if (*r) return cmd_render(rd);
  } catch (const InvariantViolation& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  } catch (const CLI::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalidInput;
  } catch (const std::overflow_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalidInput;
  } catch (const std::length_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

#pragma once

#include "tprm/mrmp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tprm {

struct ScenarioRobot {
  double radius = 0;
  Point start;
  Point goal;
};

// How a scenario's reference cost OPT_delta is obtained.
enum class ReferenceKind {
  kIndependent,      // sum of per-robot delta-clear shortest paths (oracle)
  kCirclePerimeter,  // 2 pi circle_radius
  kEuclidean,        // sum of start-goal distances
};

struct Scenario {
  std::string name;
  std::string notes;
  Workspace workspace{2};
  std::vector<ScenarioRobot> robots;
  double mu = 0;
  ReferenceKind reference = ReferenceKind::kIndependent;
  // The reference is only a lower bound on OPT_delta.
  bool reference_lower_bound = false;
  double circle_radius = 0;
  std::optional<int> move_cap;  // planner hint

  int robot_count() const { return static_cast<int>(robots.size()); }
};

// Minimum over inter-robot start and goal separations minus radius sums and
// start/goal obstacle clearances minus the radius.
double static_clearance(const Scenario& s);
// Structural checks plus |static_clearance - mu| <= 1e-6; throws
// std::invalid_argument.
void validate_scenario(const Scenario& s);

// Versioned JSON ("format": "tprm-scenario", "version": 1).
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);

std::vector<Scenario> builtin_scenarios();
// Built-in name or path to a scenario JSON file.
Scenario find_scenario(const std::string& name_or_path);

// Multi-robot problem with delta_i = delta for every robot.
MultiRobotProblem to_problem(const Scenario& s, double delta);

struct OracleOptions {
  double beta = 0;  // 0 means mu / 8
  unsigned threads = 1;
};

// Length of a delta-clear path for one disc robot ignoring the others: a
// staggered-grid PRM on obstacles inflated by radius + delta, then
// string-pulled. Infinity when no path is found.
double single_robot_oracle(const Workspace& w, double radius, double delta, const PointRef& start,
                           const PointRef& goal, const OracleOptions& options = {});

struct ReferenceCost {
  double value = 0;
  bool lower_bound = false;
};

ReferenceCost reference_cost(const Scenario& s, const OracleOptions& options = {});

struct SweepConfig {
  std::vector<double> epsilons;
  PlannerMode mode = PlannerMode::kCompositeAStar;
  std::optional<int> move_cap;  // falls back to the scenario hint
  std::size_t max_expansions = 30'000'000;
  double time_limit_s = 0;
  unsigned threads = 1;
  int validate_steps = 10000;
};

// The documented default grid {inf, 50, 20, 10, 5, 2, 1.5, 1, 0.75}.
std::vector<double> default_epsilons();

struct SweepRow {
  std::string scenario;
  double epsilon = kInfinity;
  std::uint64_t samples = 0;  // per robot
  double cost = kInfinity;
  double reference = 0;
  bool reference_lower_bound = false;
  double ratio = kInfinity;
  double seconds = 0;
  std::size_t expansions = 0;
  bool success = false;
  std::string status;
};

struct ExperimentResult {
  std::string scenario;
  std::vector<SweepRow> rows;  // in the order of the epsilon grid
};

// One planning run per epsilon with delta_i = mu. Success requires a solved
// plan that passes dense validation.
ExperimentResult run_ratio_sweep(const Scenario& s, const SweepConfig& config,
                                 const std::optional<ReferenceCost>& reference = std::nullopt);

struct ComparisonRow {
  std::string scenario;
  double epsilon = kInfinity;
  std::uint64_t samples = 0;
  bool staggered_success = false;
  double staggered_cost = kInfinity;
  int random_trials = 0;
  int random_successes = 0;
  // Mean over successful trials; infinity when none succeeded.
  double random_mean_cost = kInfinity;

  double random_success_rate() const {
    return random_trials > 0 ? static_cast<double>(random_successes) / random_trials : 0.0;
  }
};

// Staggered grid once per epsilon against `trials` uniform sample sets of the
// same size per robot and the same connection radius. Trial t of robot i uses
// seed base_seed + 1000 t + i.
std::vector<ComparisonRow> run_random_comparison(const Scenario& s, const SweepConfig& config, int trials,
                                                 std::uint64_t base_seed);

// Fixed column order, %.17g numbers, infinity written as "inf".
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_csv(const std::string& text);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);

std::string format_epsilon(double epsilon);
// Accepts "inf" / "infinity" or a positive number.
double parse_epsilon(const std::string& text);

struct RenderOptions {
  int size_px = 600;
  const CompositePath* path = nullptr;
  const std::vector<Roadmap>* roadmaps = nullptr;  // drawn as light edges
};

std::string render_svg(const Scenario& s, const RenderOptions& options = {});

}  // namespace tprm

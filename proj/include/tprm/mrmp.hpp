#pragma once

#include "tprm/roadmap.hpp"
#include "tprm/sampling.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tprm {

struct RobotSpec {
  double radius = 0;
  double delta = 0;
  Point start;
  Point goal;
};

enum class CostMetric { kSum, kMax };

struct MultiRobotProblem {
  Workspace workspace;  // its inflation is ignored, each robot inflates by its radius
  std::vector<RobotSpec> robots;
  CostMetric metric = CostMetric::kSum;

  int dim() const { return workspace.dim(); }
  int robot_count() const { return static_cast<int>(robots.size()); }
  Workspace robot_workspace(int i) const;
  // Structural checks only; clearance is checked by the planners.
  void validate() const;
};

struct RobotParams {
  GridParams grid;
  double radius = 0;
  double step = 0;  // rho_i = delta_i / (eps + 2), so radius = 2 beta + rho
};

std::vector<RobotParams> theorem2_params(double epsilon, const std::vector<double>& deltas, int dim);

enum class PlannerMode { kCompositeAStar, kPrioritizedTiming };

struct PlannerConfig {
  double epsilon = kInfinity;
  // Maximum number of robots moving on one composite edge. Unset means R for
  // R <= 3 and 1 otherwise.
  std::optional<int> move_cap;
  PlannerMode mode = PlannerMode::kCompositeAStar;
  std::size_t max_expansions = 30'000'000;
  double time_limit_s = 0;  // 0 disables the limit
};

int effective_move_cap(const PlannerConfig& config, int robots);

// Per-robot staggered-grid roadmaps with the multi-robot parameters.
std::vector<Roadmap> build_robot_roadmaps(const MultiRobotProblem& problem, double epsilon,
                                          const PrmOptions& options = {});
// Per-robot roadmaps over caller-supplied samples and radii.
std::vector<Roadmap> build_robot_roadmaps(const MultiRobotProblem& problem, const std::vector<SampleSet>& samples,
                                          const std::vector<double>& radii, const PrmOptions& options = {});

using CompositeVertex = std::vector<int>;

CompositeVertex start_vertex(const std::vector<Roadmap>& roadmaps);
CompositeVertex goal_vertex(const std::vector<Roadmap>& roadmaps);

// Pairwise static separation of the robots exceeds their radius sums.
bool composite_vertex_valid(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                            const CompositeVertex& v);
// Each robot stays or follows one of its edges, at least one moves, and all
// pairs stay separated under synchronised linear motion.
bool tensor_edge_valid(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                       const CompositeVertex& from, const CompositeVertex& to);

// Calls `emit(neighbor, cost)` for every valid tensor edge out of `v` moving
// between 1 and move_cap robots. Cost is the summed length of moved edges.
void tensor_neighbors(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                      const CompositeVertex& v, int move_cap,
                      const std::function<void(const CompositeVertex&, double)>& emit);

struct CompositePath {
  std::vector<CompositeVertex> waypoints;
  std::vector<PointSet> trajectories;  // per robot, one column per waypoint
  std::vector<double> robot_lengths;
  double cost = 0;
};

CompositePath make_composite_path(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                                  std::vector<CompositeVertex> waypoints);
double path_cost(const CompositePath& path, CostMetric metric);

enum class PlanStatus { kSolved, kUnreachable, kBudgetExceeded, kFailed };
const char* to_string(PlanStatus s);

struct PlanStats {
  std::size_t expansions = 0;
  std::size_t generated = 0;
  double seconds = 0;
};

struct PlanResult {
  PlanStatus status = PlanStatus::kFailed;
  std::optional<CompositePath> path;
  PlanStats stats;
  std::string message;

  bool solved() const { return status == PlanStatus::kSolved; }
};

// A* over the tensor roadmap with the sum of per-robot roadmap distances as
// heuristic. Optimal for the sum metric; for the max metric the search orders
// by max_i (travelled_i + h_i) and is best-effort.
PlanResult plan_composite_astar(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                                const PlannerConfig& config);

// Snaps one reference path per robot with step delta_i / (eps + 2), merges the
// timings and advances one robot per composite edge. Without references each
// robot uses its shortest roadmap path through delta_i-clear vertices and
// edges, falling back to the plain shortest path.
PlanResult plan_prioritized_timing(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                                   const PlannerConfig& config,
                                   const std::vector<PointSet>* references = nullptr);

PlanResult plan(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps, const PlannerConfig& config);

struct TimingEntry {
  int robot;
  double time;
  int index;  // position in that robot's snapped sequence
};

// Merges per-robot timings (each starting at 0) into one list ordered by time,
// equal times by robot index. Initial entries are dropped.
std::vector<TimingEntry> order_timing_list(const std::vector<std::vector<double>>& times);

// Composite index tuples V_0, ..., V_l produced by advancing robots in the
// order of order_timing_list(times).
std::vector<std::vector<int>> timing_index_sequence(const std::vector<std::vector<double>>& times);

struct ValidationReport {
  bool ok = true;
  double worst_obstacle = kInfinity;  // minimum robot-obstacle clearance seen
  double worst_robot = kInfinity;     // minimum separation minus radius sum
  std::string detail;
};

// Replays a composite path by dense sampling, independent of the closed-form
// edge checks. Penetrations deeper than `tolerance` fail.
ValidationReport dense_validate(const MultiRobotProblem& problem, const CompositePath& path,
                                int steps_per_edge = 10000, double tolerance = 1e-6);

}  // namespace tprm

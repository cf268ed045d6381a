#include "tprm/mrmp.hpp"

#include "tprm/snap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>

namespace tprm {

Workspace MultiRobotProblem::robot_workspace(int i) const {
  return workspace.with_inflation(robots.at(static_cast<std::size_t>(i)).radius);
}

void MultiRobotProblem::validate() const {
  if (robots.empty()) throw std::invalid_argument("multi-robot problem needs at least one robot");
  for (const auto& r : robots) {
    if (!(r.radius > 0) || !std::isfinite(r.radius)) throw std::invalid_argument("robot radius must be positive");
    if (!(r.delta > 0) || !std::isfinite(r.delta)) throw std::invalid_argument("robot delta must be positive");
    if (r.start.size() != dim() || r.goal.size() != dim())
      throw std::invalid_argument("robot start/goal dimension differs from workspace");
  }
}

std::vector<RobotParams> theorem2_params(double epsilon, const std::vector<double>& deltas, int dim) {
  validate_epsilon(epsilon);
  const double omega = stretch_omega(epsilon);
  std::vector<RobotParams> out;
  for (double delta : deltas) {
    if (!(delta > 0) || !(delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 0.5)");
    RobotParams p;
    p.grid = GridParams{omega * delta, delta, dim};
    p.grid.validate();
    if (std::isinf(epsilon)) {
      p.radius = delta;
      p.step = 0;
    } else {
      p.radius = delta * (epsilon + 1.0) / (epsilon + 2.0);
      p.step = delta / (epsilon + 2.0);
    }
    out.push_back(p);
  }
  return out;
}

int effective_move_cap(const PlannerConfig& config, int robots) {
  if (robots < 1) throw std::invalid_argument("move cap needs at least one robot");
  if (!config.move_cap) return robots <= 3 ? robots : 1;
  const int k = *config.move_cap;
  if (k < 1 || k > robots) throw std::invalid_argument("move_cap must lie in [1, number of robots]");
  return k;
}

std::vector<Roadmap> build_robot_roadmaps(const MultiRobotProblem& problem, const std::vector<SampleSet>& samples,
                                          const std::vector<double>& radii, const PrmOptions& options) {
  problem.validate();
  const int r = problem.robot_count();
  if (static_cast<int>(samples.size()) != r || static_cast<int>(radii.size()) != r)
    throw std::invalid_argument("build_robot_roadmaps: need one sample set and radius per robot");
  std::vector<Roadmap> out;
  out.reserve(samples.size());
  for (int i = 0; i < r; ++i) {
    const auto& spec = problem.robots[static_cast<std::size_t>(i)];
    MotionProblem mp{problem.robot_workspace(i), spec.start, spec.goal};
    out.push_back(build_prm(mp, samples[static_cast<std::size_t>(i)], radii[static_cast<std::size_t>(i)], options));
  }
  return out;
}

std::vector<Roadmap> build_robot_roadmaps(const MultiRobotProblem& problem, double epsilon, const PrmOptions& options) {
  problem.validate();
  std::vector<double> deltas;
  for (const auto& r : problem.robots) deltas.push_back(r.delta);
  const auto params = theorem2_params(epsilon, deltas, problem.dim());
  std::vector<SampleSet> samples;
  std::vector<double> radii;
  for (const auto& p : params) {
    samples.push_back(staggered_grid(p.grid));
    radii.push_back(p.radius);
  }
  return build_robot_roadmaps(problem, samples, radii, options);
}

CompositeVertex start_vertex(const std::vector<Roadmap>& roadmaps) {
  CompositeVertex v;
  for (const auto& r : roadmaps) v.push_back(r.start_index());
  return v;
}

CompositeVertex goal_vertex(const std::vector<Roadmap>& roadmaps) {
  CompositeVertex v;
  for (const auto& r : roadmaps) v.push_back(r.goal_index());
  return v;
}

namespace {

template <int D>
double pair_distance_fixed(const double* a0, const double* a1, const double* b0, const double* b1, int d) {
  using V = Eigen::Matrix<double, D, 1>;
  const Eigen::Map<const V> A0(a0, d), A1(a1, d), B0(b0, d), B1(b1, d);
  return moving_pair_min_distance(A0, A1, B0, B1);
}

double pair_distance(const double* a0, const double* a1, const double* b0, const double* b1, int d) {
  if (d == 2) return pair_distance_fixed<2>(a0, a1, b0, b1, d);
  if (d == 3) return pair_distance_fixed<3>(a0, a1, b0, b1, d);
  return pair_distance_fixed<Eigen::Dynamic>(a0, a1, b0, b1, d);
}

// Flat view of every robot's vertex coordinates and radius.
struct Kinematics {
  int robots = 0;
  int dim = 0;
  std::vector<const double*> data;
  std::vector<double> radius;

  Kinematics(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps) {
    problem.validate();
    robots = problem.robot_count();
    dim = problem.dim();
    if (static_cast<int>(roadmaps.size()) != robots) throw std::invalid_argument("need one roadmap per robot");
    for (int i = 0; i < robots; ++i) {
      const auto& rm = roadmaps[static_cast<std::size_t>(i)];
      if (rm.dim() != dim) throw std::invalid_argument("roadmap dimension differs from workspace");
      data.push_back(rm.vertices().data());
      radius.push_back(problem.robots[static_cast<std::size_t>(i)].radius);
    }
  }

  const double* pos(int robot, int v) const {
    return data[static_cast<std::size_t>(robot)] + static_cast<std::ptrdiff_t>(v) * dim;
  }

  // Robots i and j moving a0 -> a1 and b0 -> b1 stay apart.
  bool clear(int i, int a0, int a1, int j, int b0, int b1) const {
    const double dist = pair_distance(pos(i, a0), pos(i, a1), pos(j, b0), pos(j, b1), dim);
    return dist - (radius[static_cast<std::size_t>(i)] + radius[static_cast<std::size_t>(j)]) > kGeomTol;
  }
};

void check_indices(const std::vector<Roadmap>& roadmaps, const CompositeVertex& v) {
  if (v.size() != roadmaps.size()) throw std::invalid_argument("composite vertex has wrong arity");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < 0 || v[i] >= roadmaps[i].vertex_count()) throw std::invalid_argument("composite vertex index out of range");
}

}  // namespace

bool composite_vertex_valid(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                            const CompositeVertex& v) {
  const Kinematics kin(problem, roadmaps);
  check_indices(roadmaps, v);
  for (int i = 0; i < kin.robots; ++i)
    for (int j = i + 1; j < kin.robots; ++j)
      if (!kin.clear(i, v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i)], j,
                     v[static_cast<std::size_t>(j)], v[static_cast<std::size_t>(j)]))
        return false;
  return true;
}

bool tensor_edge_valid(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                       const CompositeVertex& from, const CompositeVertex& to) {
  const Kinematics kin(problem, roadmaps);
  check_indices(roadmaps, from);
  check_indices(roadmaps, to);
  bool any_move = false;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (from[i] == to[i]) continue;
    if (!roadmaps[i].has_edge(from[i], to[i])) return false;
    any_move = true;
  }
  if (!any_move) return false;
  for (int i = 0; i < kin.robots; ++i) {
    for (int j = i + 1; j < kin.robots; ++j) {
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      if (from[si] == to[si] && from[sj] == to[sj]) {
        if (!kin.clear(i, from[si], from[si], j, from[sj], from[sj])) return false;
        continue;
      }
      if (!kin.clear(i, from[si], to[si], j, from[sj], to[sj])) return false;
    }
  }
  return true;
}

void tensor_neighbors(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                      const CompositeVertex& v, int move_cap,
                      const std::function<void(const CompositeVertex&, double)>& emit) {
  const Kinematics kin(problem, roadmaps);
  check_indices(roadmaps, v);
  const int r = kin.robots;
  if (move_cap < 1 || move_cap > r) throw std::invalid_argument("move_cap must lie in [1, number of robots]");
  CompositeVertex next = v;
  std::function<void(int, int, double)> recurse = [&](int k, int movers, double cost) {
    if (k == r) {
      if (movers > 0) emit(next, cost);
      return;
    }
    const auto sk = static_cast<std::size_t>(k);
    auto compatible = [&](int target) {
      for (int i = 0; i < k; ++i) {
        const auto si = static_cast<std::size_t>(i);
        if (next[si] == v[si] && target == v[sk]) continue;
        if (!kin.clear(i, v[si], next[si], k, v[sk], target)) return false;
      }
      return true;
    };
    next[sk] = v[sk];
    if (compatible(v[sk])) recurse(k + 1, movers, cost);
    if (movers < move_cap) {
      for (const auto& e : roadmaps[sk].neighbors(v[sk])) {
        if (!compatible(e.to)) continue;
        next[sk] = e.to;
        recurse(k + 1, movers + 1, cost + e.length);
      }
    }
    next[sk] = v[sk];
  };
  recurse(0, 0, 0.0);
}

CompositePath make_composite_path(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                                  std::vector<CompositeVertex> waypoints) {
  const int r = problem.robot_count();
  const int d = problem.dim();
  CompositePath path;
  for (const auto& w : waypoints) check_indices(roadmaps, w);
  path.waypoints = std::move(waypoints);
  const auto n = static_cast<Eigen::Index>(path.waypoints.size());
  path.trajectories.assign(static_cast<std::size_t>(r), PointSet(d, n));
  path.robot_lengths.assign(static_cast<std::size_t>(r), 0.0);
  for (int i = 0; i < r; ++i) {
    const auto si = static_cast<std::size_t>(i);
    for (Eigen::Index k = 0; k < n; ++k) {
      path.trajectories[si].col(k) = roadmaps[si].vertex(path.waypoints[static_cast<std::size_t>(k)][si]);
      if (k > 0) path.robot_lengths[si] += (path.trajectories[si].col(k) - path.trajectories[si].col(k - 1)).norm();
    }
  }
  path.cost = path_cost(path, problem.metric);
  return path;
}

double path_cost(const CompositePath& path, CostMetric metric) {
  double sum = 0;
  double mx = 0;
  for (double l : path.robot_lengths) {
    sum += l;
    mx = std::max(mx, l);
  }
  return metric == CostMetric::kSum ? sum : mx;
}

const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::kSolved: return "solved";
    case PlanStatus::kUnreachable: return "unreachable";
    case PlanStatus::kBudgetExceeded: return "budget_exceeded";
    case PlanStatus::kFailed: return "failed";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Open-addressing set of composite states stored flat, `arity` ints each.
class StateTable {
 public:
  explicit StateTable(int arity) : arity_(arity), slots_(1 << 16, -1) {}

  int size() const { return static_cast<int>(pos_.size() / static_cast<std::size_t>(arity_)); }
  const int* state(int id) const { return pos_.data() + static_cast<std::ptrdiff_t>(id) * arity_; }

  // Returns the id and whether it was inserted.
  std::pair<int, bool> insert(const int* s) {
    if (static_cast<std::size_t>(size() + 1) * 2 > slots_.size()) grow();
    std::size_t slot = hash(s) & (slots_.size() - 1);
    while (slots_[slot] != -1) {
      if (std::equal(s, s + arity_, state(slots_[slot]))) return {slots_[slot], false};
      slot = (slot + 1) & (slots_.size() - 1);
    }
    const int id = size();
    pos_.insert(pos_.end(), s, s + arity_);
    slots_[slot] = id;
    return {id, true};
  }

 private:
  std::size_t hash(const int* s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < arity_; ++i) {
      h ^= static_cast<std::uint32_t>(s[i]);
      h *= 0xff51afd7ed558ccdull;
      h ^= h >> 32;
    }
    return static_cast<std::size_t>(h);
  }

  void grow() {
    std::vector<int> fresh(slots_.size() * 2, -1);
    for (int id = 0; id < size(); ++id) {
      std::size_t slot = hash(state(id)) & (fresh.size() - 1);
      while (fresh[slot] != -1) slot = (slot + 1) & (fresh.size() - 1);
      fresh[slot] = id;
    }
    slots_.swap(fresh);
  }

  int arity_;
  std::vector<int> slots_;
  std::vector<int> pos_;
};

std::int64_t quantize(double x) { return std::llround(x * 1e9); }

}  // namespace

// Operator decomposition: a composite step is built one robot at a time.
// Partial steps are search nodes of their own, so a step never enumerates the
// full product of per-robot choices. Completed steps are deduplicated on the
// composite state.
PlanResult plan_composite_astar(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                                const PlannerConfig& config) {
  const auto t0 = Clock::now();
  const Kinematics kin(problem, roadmaps);
  const int r = kin.robots;
  const int cap = effective_move_cap(config, r);
  const CompositeVertex start = start_vertex(roadmaps);
  const CompositeVertex goal = goal_vertex(roadmaps);
  if (!composite_vertex_valid(problem, roadmaps, start)) throw InvalidProblem("robots overlap at their starts");
  if (!composite_vertex_valid(problem, roadmaps, goal)) throw InvalidProblem("robots overlap at their goals");
  const bool use_max = problem.metric == CostMetric::kMax;

  PlanResult result;
  std::vector<std::vector<double>> h(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const auto si = static_cast<std::size_t>(i);
    h[si] = distances_to(roadmaps[si], goal[si]);
    if (std::isinf(h[si][static_cast<std::size_t>(start[si])])) {
      result.status = PlanStatus::kUnreachable;
      result.message = "robot " + std::to_string(i) + " cannot reach its goal in its own roadmap";
      result.stats.seconds = seconds_since(t0);
      return result;
    }
  }

  StateTable table(r);
  std::vector<double> acc;      // per state, r travelled lengths
  std::vector<double> g_sum;    // per state
  std::vector<double> g_max;    // per state
  std::vector<int> parent;      // per state
  std::vector<char> closed;     // per state

  struct Partial {
    std::uint32_t prev;   // previous partial node, kRoot at level 1
    std::uint32_t state;  // state the step starts from
    std::int32_t pos;     // new vertex of robot level - 1
    std::uint16_t level;
    std::uint16_t movers;
    double cost;  // length moved by robot level - 1
  };
  constexpr std::uint32_t kRoot = 0xffffffffu;
  std::vector<Partial> partials;

  struct Entry {
    std::int64_t f;
    std::int64_t h;
    std::uint64_t seq;
    std::uint32_t id;
    bool full;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);
  std::uint64_t seq = 0;

  std::vector<int> cur(static_cast<std::size_t>(r));
  std::vector<double> cur_acc(static_cast<std::size_t>(r));

  // Evaluates (f, h) for positions `cur` with travelled lengths `cur_acc`.
  auto evaluate = [&](std::int64_t* fk, std::int64_t* hk) {
    double sum_acc = 0, max_f = 0, sum_h = 0, max_h = 0;
    for (int i = 0; i < r; ++i) {
      const auto si = static_cast<std::size_t>(i);
      const double hi = h[si][static_cast<std::size_t>(cur[si])];
      sum_acc += cur_acc[si];
      sum_h += hi;
      max_h = std::max(max_h, hi);
      max_f = std::max(max_f, cur_acc[si] + hi);
    }
    if (use_max) {
      *fk = quantize(max_f);
      *hk = quantize(max_h);
    } else {
      *fk = quantize(sum_acc + sum_h);
      *hk = quantize(sum_h);
    }
  };

  auto push_state = [&](const int* s, const double* s_acc, int from) {
    auto [id, inserted] = table.insert(s);
    double gs = 0, gm = 0;
    for (int i = 0; i < r; ++i) {
      gs += s_acc[i];
      gm = std::max(gm, s_acc[i]);
    }
    if (inserted) {
      acc.insert(acc.end(), s_acc, s_acc + r);
      g_sum.push_back(kInfinity);
      g_max.push_back(kInfinity);
      parent.push_back(-1);
      closed.push_back(0);
    }
    const auto sid = static_cast<std::size_t>(id);
    if (closed[sid]) return;
    const bool better = use_max ? (gm < g_max[sid] - 1e-12 || (gm <= g_max[sid] + 1e-12 && gs < g_sum[sid] - 1e-12))
                                : gs < g_sum[sid] - 1e-12;
    if (!better) return;
    g_sum[sid] = gs;
    g_max[sid] = gm;
    parent[sid] = from;
    std::copy(s_acc, s_acc + r, acc.begin() + static_cast<std::ptrdiff_t>(sid) * r);
    std::copy(s, s + r, cur.begin());
    std::copy(s_acc, s_acc + r, cur_acc.begin());
    Entry e{};
    evaluate(&e.f, &e.h);
    e.seq = seq++;
    e.id = static_cast<std::uint32_t>(id);
    e.full = true;
    open.push(e);
    ++result.stats.generated;
  };

  push_state(start.data(), std::vector<double>(static_cast<std::size_t>(r), 0.0).data(), -1);

  std::vector<int> base(static_cast<std::size_t>(r));
  std::vector<double> base_acc(static_cast<std::size_t>(r));
  std::vector<int> assigned(static_cast<std::size_t>(r));
  std::vector<double> moved(static_cast<std::size_t>(r));
  int goal_state = -1;

  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    if (result.stats.expansions >= config.max_expansions ||
        (config.time_limit_s > 0 && (result.stats.expansions & 1023) == 0 && seconds_since(t0) > config.time_limit_s)) {
      result.status = PlanStatus::kBudgetExceeded;
      result.message = "search budget exhausted after " + std::to_string(result.stats.expansions) + " expansions";
      result.stats.seconds = seconds_since(t0);
      return result;
    }
    ++result.stats.expansions;

    std::uint32_t state;
    int level;
    int movers;
    std::uint32_t partial_id = kRoot;
    if (top.full) {
      state = top.id;
      if (closed[state]) continue;
      const int* s = table.state(static_cast<int>(state));
      if (std::equal(s, s + r, goal.begin())) {
        goal_state = static_cast<int>(state);
        break;
      }
      closed[state] = 1;
      level = 0;
      movers = 0;
    } else {
      partial_id = top.id;
      const Partial& p = partials[partial_id];
      state = p.state;
      level = p.level;
      movers = p.movers;
      if (closed[state] == 2) continue;
      for (std::uint32_t q = partial_id; q != kRoot; q = partials[q].prev) {
        assigned[static_cast<std::size_t>(partials[q].level - 1)] = partials[q].pos;
        moved[static_cast<std::size_t>(partials[q].level - 1)] = partials[q].cost;
      }
    }
    const int* s = table.state(static_cast<int>(state));
    std::copy(s, s + r, base.begin());
    std::copy(acc.begin() + static_cast<std::ptrdiff_t>(state) * r,
              acc.begin() + static_cast<std::ptrdiff_t>(state + 1) * r, base_acc.begin());

    const int k = level;
    const auto sk = static_cast<std::size_t>(k);
    auto compatible = [&](int target) {
      for (int i = 0; i < k; ++i) {
        const auto si = static_cast<std::size_t>(i);
        if (assigned[si] == base[si] && target == base[sk]) continue;
        if (!kin.clear(i, base[si], assigned[si], k, base[sk], target)) return false;
      }
      return true;
    };
    auto emit = [&](int target, double len, int new_movers) {
      if (k + 1 == r) {
        if (new_movers == 0) return;
        for (int i = 0; i < k; ++i) {
          const auto si = static_cast<std::size_t>(i);
          cur[si] = assigned[si];
          cur_acc[si] = base_acc[si] + moved[si];
        }
        cur[sk] = target;
        cur_acc[sk] = base_acc[sk] + len;
        const std::vector<int> next_state(cur);
        const std::vector<double> next_acc(cur_acc);
        push_state(next_state.data(), next_acc.data(), static_cast<int>(state));
        return;
      }
      for (int i = 0; i < r; ++i) {
        const auto si = static_cast<std::size_t>(i);
        if (i < k) {
          cur[si] = assigned[si];
          cur_acc[si] = base_acc[si] + moved[si];
        } else {
          cur[si] = base[si];
          cur_acc[si] = base_acc[si];
        }
      }
      cur[sk] = target;
      cur_acc[sk] = base_acc[sk] + len;
      Entry e{};
      evaluate(&e.f, &e.h);
      e.seq = seq++;
      e.id = static_cast<std::uint32_t>(partials.size());
      e.full = false;
      partials.push_back(Partial{partial_id, state, target, static_cast<std::uint16_t>(k + 1),
                                 static_cast<std::uint16_t>(new_movers), len});
      open.push(e);
      ++result.stats.generated;
    };

    if (compatible(base[sk])) emit(base[sk], 0.0, movers);
    if (movers < cap) {
      for (const auto& e : roadmaps[sk].neighbors(base[sk])) {
        if (compatible(e.to)) emit(e.to, e.length, movers + 1);
      }
    }
  }

  result.stats.seconds = seconds_since(t0);
  if (goal_state < 0) {
    result.status = PlanStatus::kUnreachable;
    result.message = "no path in the collision-pruned tensor roadmap";
    return result;
  }
  std::vector<CompositeVertex> waypoints;
  for (int sid = goal_state; sid != -1; sid = parent[static_cast<std::size_t>(sid)]) {
    const int* st = table.state(sid);
    waypoints.emplace_back(st, st + r);
  }
  std::reverse(waypoints.begin(), waypoints.end());
  result.path = make_composite_path(problem, roadmaps, std::move(waypoints));
  result.status = PlanStatus::kSolved;
  return result;
}

std::vector<TimingEntry> order_timing_list(const std::vector<std::vector<double>>& times) {
  std::vector<TimingEntry> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& t = times[i];
    if (t.empty()) throw std::invalid_argument("order_timing_list: empty timing");
    for (std::size_t j = 1; j < t.size(); ++j) {
      if (!(t[j] > t[j - 1])) throw std::invalid_argument("order_timing_list: times must increase");
      out.push_back({static_cast<int>(i), t[j], static_cast<int>(j)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TimingEntry& a, const TimingEntry& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.robot < b.robot;
  });
  return out;
}

std::vector<std::vector<int>> timing_index_sequence(const std::vector<std::vector<double>>& times) {
  std::vector<int> idx(times.size(), 0);
  std::vector<std::vector<int>> seq{idx};
  for (const auto& e : order_timing_list(times)) {
    idx[static_cast<std::size_t>(e.robot)] = e.index;
    seq.push_back(idx);
  }
  return seq;
}

namespace {

// Shortest path restricted to vertices and edges with clearance >= delta in
// the robot's inflated workspace; the start and goal are exempt.
std::optional<RoadmapPath> clear_reference(const Roadmap& rm, const Workspace& ws, double delta) {
  const int n = rm.vertex_count();
  std::vector<char> ok(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    ok[static_cast<std::size_t>(v)] =
        v == rm.start_index() || v == rm.goal_index() || signed_clearance(ws, rm.vertex(v)) >= delta - kGeomTol;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    if (!ok[static_cast<std::size_t>(u)]) continue;
    for (const auto& e : rm.neighbors(u)) {
      if (e.to <= u || !ok[static_cast<std::size_t>(e.to)]) continue;
      if (segment_clearance(ws, rm.vertex(u), rm.vertex(e.to)) >= delta - kGeomTol) edges.emplace_back(u, e.to);
    }
  }
  const Roadmap sub = Roadmap::from_parts(rm.vertices(), edges, rm.radius(), rm.start_index(), rm.goal_index());
  return shortest_path(sub, rm.start_index(), rm.goal_index());
}

}  // namespace

PlanResult plan_prioritized_timing(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps,
                                   const PlannerConfig& config, const std::vector<PointSet>* references) {
  const auto t0 = Clock::now();
  const Kinematics kin(problem, roadmaps);
  const int r = kin.robots;
  validate_epsilon(config.epsilon);
  if (std::isinf(config.epsilon)) throw std::invalid_argument("prioritized timing needs a finite epsilon");
  if (references && static_cast<int>(references->size()) != r)
    throw std::invalid_argument("need one reference path per robot");
  const CompositeVertex start = start_vertex(roadmaps);
  if (!composite_vertex_valid(problem, roadmaps, start)) throw InvalidProblem("robots overlap at their starts");

  PlanResult result;
  auto fail = [&](std::string msg) {
    result.status = PlanStatus::kFailed;
    result.message = std::move(msg);
    result.stats.seconds = seconds_since(t0);
    return result;
  };

  std::vector<std::vector<double>> times(static_cast<std::size_t>(r));
  std::vector<std::vector<int>> verts(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const Roadmap& rm = roadmaps[si];
    const RobotSpec& spec = problem.robots[si];
    const double rho = spec.delta / (config.epsilon + 2.0);

    PointSet sigma;
    if (references) {
      sigma = (*references)[si];
      if (sigma.rows() != kin.dim || sigma.cols() < 1 || sigma.col(0) != rm.vertex(rm.start_index()) ||
          sigma.col(sigma.cols() - 1) != rm.vertex(rm.goal_index()))
        throw std::invalid_argument("reference path must run from the robot's start to its goal");
    } else {
      auto ref = clear_reference(rm, problem.robot_workspace(i), spec.delta);
      if (!ref) ref = shortest_path(rm, rm.start_index(), rm.goal_index());
      if (!ref) return fail("robot " + std::to_string(i) + " has no path in its roadmap");
      sigma = ref->points;
    }

    const PointSet ends = sigma(Eigen::all, {Eigen::Index{0}, sigma.cols() - 1});
    if ((ends.col(0) - ends.col(1)).norm() < rho) {
      times[si] = {0.0};
      verts[si] = {rm.start_index()};
      if (rm.start_index() != rm.goal_index() && ends.col(0) != ends.col(1)) {
        times[si].push_back(1.0);
        verts[si].push_back(rm.goal_index());
      }
    } else {
      // Snap onto the roadmap's sample vertices.
      std::vector<int> ids;
      for (int v = 0; v < rm.vertex_count(); ++v)
        if (v != rm.start_index() && v != rm.goal_index()) ids.push_back(v);
      if (ids.empty()) return fail("robot " + std::to_string(i) + " has no sample vertices to snap to");
      SampleSet grid;
      grid.points.resize(kin.dim, static_cast<Eigen::Index>(ids.size()));
      for (std::size_t j = 0; j < ids.size(); ++j) grid.points.col(static_cast<Eigen::Index>(j)) = rm.vertex(ids[j]);
      const SnappedPath snapped = snap_path(sigma, rho, grid);
      const auto l = snapped.times.size();
      for (std::size_t j = 0; j < l; ++j) {
        int v;
        if (j == 0) v = rm.start_index();
        else if (j + 1 == l) v = rm.goal_index();
        else v = ids[static_cast<std::size_t>(snapped.sample_indices[j])];
        if (!verts[si].empty() && verts[si].back() == v) continue;
        times[si].push_back(snapped.times[j]);
        verts[si].push_back(v);
      }
    }
    for (std::size_t j = 1; j < verts[si].size(); ++j)
      if (!rm.has_edge(verts[si][j - 1], verts[si][j]))
        return fail("robot " + std::to_string(i) + ": snapped points " + std::to_string(j - 1) + " and " +
                    std::to_string(j) + " are not joined by a roadmap edge");
  }

  std::vector<CompositeVertex> waypoints{start};
  CompositeVertex cur = start;
  for (const auto& e : order_timing_list(times)) {
    const auto si = static_cast<std::size_t>(e.robot);
    const int from = cur[si];
    const int to = verts[si][static_cast<std::size_t>(e.index)];
    for (int j = 0; j < r; ++j) {
      if (j == e.robot) continue;
      const auto sj = static_cast<std::size_t>(j);
      if (!kin.clear(e.robot, from, to, j, cur[sj], cur[sj]))
        return fail("robot " + std::to_string(e.robot) + " collides with robot " + std::to_string(j) +
                    " at timestamp " + std::to_string(e.time));
    }
    cur[si] = to;
    waypoints.push_back(cur);
    ++result.stats.expansions;
  }
  result.path = make_composite_path(problem, roadmaps, std::move(waypoints));
  result.status = PlanStatus::kSolved;
  result.stats.seconds = seconds_since(t0);
  return result;
}

PlanResult plan(const MultiRobotProblem& problem, const std::vector<Roadmap>& roadmaps, const PlannerConfig& config) {
  if (config.mode == PlannerMode::kPrioritizedTiming) return plan_prioritized_timing(problem, roadmaps, config);
  return plan_composite_astar(problem, roadmaps, config);
}

ValidationReport dense_validate(const MultiRobotProblem& problem, const CompositePath& path, int steps_per_edge,
                                double tolerance) {
  problem.validate();
  const int r = problem.robot_count();
  if (static_cast<int>(path.trajectories.size()) != r) throw std::invalid_argument("dense_validate: arity mismatch");
  if (steps_per_edge < 1) throw std::invalid_argument("dense_validate: steps must be positive");
  std::vector<Workspace> ws;
  for (int i = 0; i < r; ++i) ws.push_back(problem.robot_workspace(i));
  ValidationReport rep;
  const Eigen::Index n = path.trajectories.empty() ? 0 : path.trajectories[0].cols();
  std::vector<Point> pos(static_cast<std::size_t>(r));
  std::vector<char> moving(static_cast<std::size_t>(r));
  for (Eigen::Index k = 0; k < n; ++k) {
    // A robot at rest during an edge was already checked at the waypoint, and
    // two robots at rest cannot come closer.
    for (int i = 0; i < r; ++i) {
      const auto& tr = path.trajectories[static_cast<std::size_t>(i)];
      moving[static_cast<std::size_t>(i)] = k == 0 || tr.col(k) != tr.col(k - 1);
    }
    const int steps = k == 0 ? 0 : steps_per_edge;
    for (int s = 0; s <= steps; ++s) {
      if (k > 0 && s == 0) continue;
      const double t = steps == 0 ? 0.0 : static_cast<double>(s) / steps;
      for (int i = 0; i < r; ++i) {
        const auto si = static_cast<std::size_t>(i);
        const auto& tr = path.trajectories[si];
        pos[si] = k == 0 ? Point(tr.col(0)) : Point(tr.col(k - 1) + t * (tr.col(k) - tr.col(k - 1)));
        if (moving[si]) rep.worst_obstacle = std::min(rep.worst_obstacle, signed_clearance(ws[si], pos[si]));
      }
      for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
          const auto si = static_cast<std::size_t>(i);
          const auto sj = static_cast<std::size_t>(j);
          if (!moving[si] && !moving[sj]) continue;
          const double sep = (pos[si] - pos[sj]).norm() - problem.robots[si].radius - problem.robots[sj].radius;
          rep.worst_robot = std::min(rep.worst_robot, sep);
        }
    }
  }
  if (rep.worst_obstacle < -tolerance) {
    rep.ok = false;
    rep.detail = "robot-obstacle penetration " + std::to_string(-rep.worst_obstacle);
  }
  if (rep.worst_robot < -tolerance) {
    rep.ok = false;
    rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("robot-robot penetration ") +
                  std::to_string(-rep.worst_robot);
  }
  return rep;
}

}  // namespace tprm

#include "tprm/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tprm {

std::vector<double> default_epsilons() { return {kInfinity, 50, 20, 10, 5, 2, 1.5, 1, 0.75}; }

std::string format_epsilon(double epsilon) {
  if (std::isinf(epsilon)) return epsilon > 0 ? "inf" : "-inf";
  char buf[64];
  for (int prec : {15, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, epsilon);
    if (std::strtod(buf, nullptr) == epsilon) break;
  }
  return buf;
}

double parse_epsilon(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return kInfinity;
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("epsilon '" + text + "' is not a number or 'inf'");
  }
  if (used != text.size()) throw std::invalid_argument("epsilon '" + text + "' is not a number or 'inf'");
  validate_epsilon(v);
  return v;
}

namespace {

// Runs fn(0..n-1) on up to `threads` workers; each index writes its own slot.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

struct CellOutcome {
  bool success = false;
  double cost = kInfinity;
  double seconds = 0;
  std::size_t expansions = 0;
  std::string status;
};

CellOutcome run_cell(const Scenario& s, const MultiRobotProblem& problem, const std::vector<SampleSet>& samples,
                     const std::vector<double>& radii, double epsilon, const SweepConfig& config, unsigned threads) {
  CellOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto roadmaps = build_robot_roadmaps(problem, samples, radii, PrmOptions{BoundaryMode::kIgnore, threads});
    PlannerConfig pc;
    pc.epsilon = epsilon;
    pc.move_cap = config.move_cap ? config.move_cap : s.move_cap;
    pc.mode = config.mode;
    pc.max_expansions = config.max_expansions;
    pc.time_limit_s = config.time_limit_s;
    const PlanResult res = plan(problem, roadmaps, pc);
    out.expansions = res.stats.expansions;
    out.status = to_string(res.status);
    if (res.solved()) {
      const ValidationReport rep = dense_validate(problem, *res.path, config.validate_steps);
      out.cost = res.path->cost;
      out.success = rep.ok;
      if (!rep.ok) out.status = "validation_failed: " + sanitize(rep.detail);
    }
  } catch (const std::exception& e) {
    out.status = "error: " + sanitize(e.what());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

struct StaggeredSetup {
  std::vector<SampleSet> samples;
  std::vector<double> radii;
  std::uint64_t count = 0;
};

StaggeredSetup staggered_setup(const MultiRobotProblem& problem, double epsilon) {
  std::vector<double> deltas;
  for (const auto& r : problem.robots) deltas.push_back(r.delta);
  StaggeredSetup st;
  for (const auto& p : theorem2_params(epsilon, deltas, problem.dim())) {
    st.samples.push_back(staggered_grid(p.grid));
    st.radii.push_back(p.radius);
  }
  st.count = static_cast<std::uint64_t>(st.samples.front().size());
  return st;
}

}  // namespace

ExperimentResult run_ratio_sweep(const Scenario& s, const SweepConfig& config,
                                 const std::optional<ReferenceCost>& reference) {
  validate_scenario(s);
  if (config.epsilons.empty()) throw std::invalid_argument("ratio sweep needs at least one epsilon");
  for (double e : config.epsilons) validate_epsilon(e);
  const ReferenceCost ref = reference ? *reference : reference_cost(s, OracleOptions{0, std::max(1u, config.threads)});
  const MultiRobotProblem problem = to_problem(s, s.mu);
  const std::size_t n = config.epsilons.size();
  const unsigned inner = n > 1 && config.threads > 1 ? 1 : std::max(1u, config.threads);

  ExperimentResult result;
  result.scenario = s.name;
  result.rows.resize(n);
  parallel_for(n, config.threads, [&](std::size_t k) {
    const double eps = config.epsilons[k];
    SweepRow& row = result.rows[k];
    row.scenario = s.name;
    row.epsilon = eps;
    row.reference = ref.value;
    row.reference_lower_bound = ref.lower_bound;
    const StaggeredSetup st = staggered_setup(problem, eps);
    row.samples = st.count;
    const CellOutcome c = run_cell(s, problem, st.samples, st.radii, eps, config, inner);
    row.success = c.success;
    row.cost = c.cost;
    row.seconds = c.seconds;
    row.expansions = c.expansions;
    row.status = c.status;
    row.ratio = c.success ? c.cost / ref.value : kInfinity;
  });
  return result;
}

std::vector<ComparisonRow> run_random_comparison(const Scenario& s, const SweepConfig& config, int trials,
                                                 std::uint64_t base_seed) {
  validate_scenario(s);
  if (config.epsilons.empty()) throw std::invalid_argument("random comparison needs at least one epsilon");
  if (trials < 1) throw std::invalid_argument("random comparison needs at least one trial");
  for (double e : config.epsilons) validate_epsilon(e);
  const MultiRobotProblem problem = to_problem(s, s.mu);
  const std::size_t ne = config.epsilons.size();
  const std::size_t per = static_cast<std::size_t>(trials) + 1;  // slot 0 is the staggered run

  std::vector<StaggeredSetup> setups(ne);
  for (std::size_t k = 0; k < ne; ++k) setups[k] = staggered_setup(problem, config.epsilons[k]);

  std::vector<CellOutcome> cells(ne * per);
  parallel_for(cells.size(), config.threads, [&](std::size_t idx) {
    const std::size_t k = idx / per;
    const std::size_t t = idx % per;
    const StaggeredSetup& st = setups[k];
    if (t == 0) {
      cells[idx] = run_cell(s, problem, st.samples, st.radii, config.epsilons[k], config, 1);
      return;
    }
    std::vector<SampleSet> samples;
    for (int i = 0; i < problem.robot_count(); ++i) {
      const std::uint64_t seed = base_seed + 1000 * (t - 1) + static_cast<std::uint64_t>(i);
      samples.push_back(random_samples(st.count, s.mu, problem.dim(), seed));
    }
    cells[idx] = run_cell(s, problem, samples, st.radii, config.epsilons[k], config, 1);
  });

  std::vector<ComparisonRow> rows(ne);
  for (std::size_t k = 0; k < ne; ++k) {
    ComparisonRow& row = rows[k];
    row.scenario = s.name;
    row.epsilon = config.epsilons[k];
    row.samples = setups[k].count;
    const CellOutcome& st = cells[k * per];
    row.staggered_success = st.success;
    row.staggered_cost = st.cost;
    row.random_trials = trials;
    double sum = 0;
    for (std::size_t t = 1; t < per; ++t) {
      const CellOutcome& c = cells[k * per + t];
      if (!c.success) continue;
      ++row.random_successes;
      sum += c.cost;
    }
    row.random_mean_cost = row.random_successes > 0 ? sum / row.random_successes : kInfinity;
  }
  return rows;
}

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_num(const std::string& s) {
  if (s == "inf") return kInfinity;
  if (s == "-inf") return -kInfinity;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

constexpr const char* kSweepHeader =
    "scenario,epsilon,samples,cost,reference,reference_lower_bound,ratio,seconds,expansions,success,status";

}  // namespace

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepHeader << "\n";
  for (const auto& r : rows) {
    os << r.scenario << ',' << format_epsilon(r.epsilon) << ',' << r.samples << ',' << num(r.cost) << ','
       << num(r.reference) << ',' << (r.reference_lower_bound ? 1 : 0) << ',' << num(r.ratio) << ','
       << num(r.seconds) << ',' << r.expansions << ',' << (r.success ? 1 : 0) << ',' << sanitize(r.status) << "\n";
  }
  return os.str();
}

std::vector<SweepRow> sweep_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) throw std::invalid_argument("sweep CSV: unexpected header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 11) throw std::invalid_argument("sweep CSV: expected 11 columns");
    try {
      SweepRow r;
      r.scenario = c[0];
      r.epsilon = parse_num(c[1]);
      r.samples = std::stoull(c[2]);
      r.cost = parse_num(c[3]);
      r.reference = parse_num(c[4]);
      r.reference_lower_bound = c[5] == "1";
      r.ratio = parse_num(c[6]);
      r.seconds = parse_num(c[7]);
      r.expansions = std::stoull(c[8]);
      r.success = c[9] == "1";
      r.status = c[10];
      rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw std::invalid_argument(std::string("sweep CSV: ") + e.what());
    }
  }
  return rows;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "scenario,epsilon,samples,staggered_success,staggered_cost,random_trials,random_successes,"
        "random_success_rate,random_mean_cost\n";
  for (const auto& r : rows) {
    os << r.scenario << ',' << format_epsilon(r.epsilon) << ',' << r.samples << ',' << (r.staggered_success ? 1 : 0)
       << ',' << num(r.staggered_cost) << ',' << r.random_trials << ',' << r.random_successes << ','
       << num(r.random_success_rate()) << ',' << num(r.random_mean_cost) << "\n";
  }
  return os.str();
}

}  // namespace tprm

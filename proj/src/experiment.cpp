#include "blb/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "blb/oracle.hpp"

namespace blb {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SeedResult run_seed(const Experiment& experiment, const BlbParams& params, double rho_star,
                    std::uint64_t horizon, std::uint64_t seed) {
  SeedResult result;
  result.seed = seed;
  result.trace = run_blb(*experiment.environment, experiment.representations, params, horizon,
                         make_rng(experiment.environment->seed(), seed));
  result.regret = compute_regret(result.trace, rho_star);
  return result;
}

std::vector<SeedResult> run_seeds(const Experiment& experiment, const BlbParams& params,
                                  double rho_star, std::uint64_t horizon,
                                  std::span<const std::uint64_t> seeds, Execution exec) {
  std::vector<SeedResult> results(seeds.size());
  const long n = static_cast<long>(seeds.size());
  if (exec == Execution::parallel) {
    // Runs share only immutable inputs; each owns its history and stream.
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
      results[k] = run_seed(experiment, params, rho_star, horizon, seeds[k]);
    }
  } else {
    for (long k = 0; k < n; ++k) {
      results[k] = run_seed(experiment, params, rho_star, horizon, seeds[k]);
    }
  }
  return results;
}

namespace {

const char* phase_name(Phase p) { return p == Phase::explore ? "explore" : "exploit"; }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigError("csv: bad number '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw ConfigError("csv: bad integer '" + s + "'");
  return v;
}

constexpr const char* kTraceHeader =
    "t,stage,phase,model_index,rep_state,action,reward,cum_reward,cum_regret";
constexpr const char* kRegretHeader = "t,cum_reward,cum_regret";

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace, const RegretReport& regret) {
  if (regret.cumulative_regret.size() != trace.steps.size() + 1) {
    throw ContractError("write_trace_csv: regret report does not match the trace");
  }
  out << kTraceHeader << '\n';
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const StepRecord& s = trace.steps[k];
    out << s.t << ',' << s.stage << ',' << phase_name(s.phase) << ',' << s.model << ','
        << s.rep_state << ',' << s.action << ',' << format_double(s.reward) << ','
        << format_double(regret.cumulative_reward[k + 1]) << ','
        << format_double(regret.cumulative_regret[k + 1]) << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw ConfigError("trace csv: missing or unexpected header");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw ConfigError("trace csv: expected 9 columns");
    TraceRow row;
    row.step.t = parse_uint(f[0]);
    row.step.stage = static_cast<unsigned>(parse_uint(f[1]));
    if (f[2] == "explore") {
      row.step.phase = Phase::explore;
    } else if (f[2] == "exploit") {
      row.step.phase = Phase::exploit;
    } else {
      throw ConfigError("trace csv: bad phase '" + f[2] + "'");
    }
    row.step.model = parse_uint(f[3]);
    row.step.rep_state = parse_uint(f[4]);
    row.step.action = parse_uint(f[5]);
    row.step.reward = parse_double(f[6]);
    row.cum_reward = parse_double(f[7]);
    row.cum_regret = parse_double(f[8]);
    rows.push_back(row);
  }
  return rows;
}

void write_regret_csv(std::ostream& out, const RegretReport& regret) {
  out << kRegretHeader << '\n';
  for (std::size_t t = 0; t < regret.cumulative_regret.size(); ++t) {
    out << t << ',' << format_double(regret.cumulative_reward[t]) << ','
        << format_double(regret.cumulative_regret[t]) << '\n';
  }
}

RegretReport read_regret_csv(std::istream& in, double rho_star) {
  std::string line;
  if (!std::getline(in, line) || line != kRegretHeader) {
    throw ConfigError("regret csv: missing or unexpected header");
  }
  RegretReport report;
  report.rho_star = rho_star;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 3) throw ConfigError("regret csv: expected 3 columns");
    if (parse_uint(f[0]) != report.cumulative_regret.size()) {
      throw ConfigError("regret csv: rows out of order");
    }
    report.cumulative_reward.push_back(parse_double(f[1]));
    report.cumulative_regret.push_back(parse_double(f[2]));
  }
  return report;
}

json stage_summary_json(const RunTrace& trace) {
  json stages = json::array();
  for (const StageSummary& s : trace.stages) {
    json means = json::array();
    for (const auto& m : s.explore_means) means.push_back(m ? json(*m) : json(nullptr));
    json selections = json::array();
    for (const auto& e : s.selections) selections.push_back({{"t", e.t}, {"model", e.model}});
    json eliminations = json::array();
    for (const auto& e : s.eliminations) {
      eliminations.push_back({{"t", e.t}, {"model", e.model}, {"run_length", e.run_length}});
    }
    stages.push_back({{"stage", s.schedule.stage},
                      {"first_t", s.first_t},
                      {"steps", s.steps},
                      {"truncated", s.truncated},
                      {"length", s.schedule.length},
                      {"exploration", s.schedule.exploration},
                      {"exploitation", s.schedule.exploitation},
                      {"slot", s.schedule.slot},
                      {"delta_i", s.delta},
                      {"bounds", s.bounds},
                      {"explore_means", means},
                      {"explore_steps", s.explore_steps},
                      {"exploit_steps", s.exploit_steps},
                      {"selections", selections},
                      {"eliminations", eliminations},
                      {"resets", s.resets}});
  }
  return stages;
}

namespace {

struct Stats {
  double mean, min, max;
};

Stats stats_of(const std::vector<double>& v) {
  Stats s{0.0, v.front(), v.front()};
  for (double x : v) {
    s.mean += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean /= static_cast<double>(v.size());
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text,
                std::vector<std::filesystem::path>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output.dir: cannot write " + path.string());
  out << text;
  files.push_back(path);
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, Execution exec) {
  config.validate();
  const Experiment exp = build_experiment(config);
  const BestMarkovGain best = best_markov_gain(exp.representations, exp.induced, 1e-12);

  ExperimentOutcome outcome;
  outcome.rho_star = best.gain;
  outcome.best_index = best.index;
  outcome.results =
      run_seeds(exp, config.blb, best.gain, config.horizon, config.seeds, exec);

  const std::filesystem::path dir = config.output.dir;
  std::filesystem::create_directories(dir);
  std::vector<double> finals;
  json per_seed = json::array();
  for (const SeedResult& r : outcome.results) {
    const std::string tag = "seed" + std::to_string(r.seed);
    std::ostringstream trace_csv, regret_csv;
    write_trace_csv(trace_csv, r.trace, r.regret);
    write_regret_csv(regret_csv, r.regret);
    write_file(dir / ("trace_" + tag + ".csv"), trace_csv.str(), outcome.files);
    write_file(dir / ("regret_" + tag + ".csv"), regret_csv.str(), outcome.files);

    std::vector<std::uint64_t> tests(exp.representations.size(), 0);
    std::vector<std::uint64_t> failures(exp.representations.size(), 0);
    for (const TestRecord& t : r.trace.tests) {
      ++tests[t.model];
      if (!t.passed) ++failures[t.model];
    }
    json summary = {{"seed", r.seed},
                    {"rho_star", outcome.rho_star},
                    {"horizon", config.horizon},
                    {"final_regret", r.regret.final_regret()},
                    {"tests", tests},
                    {"test_failures", failures},
                    {"stages", stage_summary_json(r.trace)}};
    write_file(dir / ("summary_" + tag + ".json"), summary.dump(2) + "\n", outcome.files);
    finals.push_back(r.regret.final_regret());
    per_seed.push_back({{"seed", r.seed}, {"final_regret", r.regret.final_regret()}});
  }
  const Stats s = stats_of(finals);
  json aggregate = {{"rho_star", outcome.rho_star},
                    {"best_markov_index", outcome.best_index},
                    {"horizon", config.horizon},
                    {"final_regret", {{"mean", s.mean}, {"min", s.min}, {"max", s.max}}},
                    {"seeds", per_seed}};
  write_file(dir / "summary.json", aggregate.dump(2) + "\n", outcome.files);
  return outcome;
}

std::vector<SweepRow> sweep(const ExperimentConfig& config,
                            std::span<const std::uint64_t> horizons, Execution exec) {
  config.validate();
  if (horizons.empty()) throw ConfigError("horizons: at least one horizon required");
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    if (horizons[k] < 1 || (k > 0 && horizons[k] <= horizons[k - 1])) {
      throw ConfigError("horizons: must be positive and strictly increasing");
    }
  }
  const Experiment exp = build_experiment(config);
  const double rho = best_markov_gain(exp.representations, exp.induced, 1e-12).gain;
  std::vector<SweepRow> rows;
  for (std::uint64_t T : horizons) {
    const auto results = run_seeds(exp, config.blb, rho, T, config.seeds, exec);
    const double Td = static_cast<double>(T);
    const double T23 = std::cbrt(Td * Td);
    SweepRow mean{T, std::nullopt, 0.0, 0.0, 0.0};
    for (const SeedResult& r : results) {
      const double d = r.regret.final_regret();
      rows.push_back({T, r.seed, d, d / Td, d / T23});
      mean.regret += d;
    }
    mean.regret /= static_cast<double>(results.size());
    mean.regret_per_t = mean.regret / Td;
    mean.regret_per_t23 = mean.regret / T23;
    rows.push_back(mean);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "horizon,seed,regret,regret_per_t,regret_per_t23\n";
  for (const SweepRow& r : rows) {
    out << r.horizon << ',' << (r.seed ? std::to_string(*r.seed) : std::string("mean")) << ','
        << format_double(r.regret) << ',' << format_double(r.regret_per_t) << ','
        << format_double(r.regret_per_t23) << '\n';
  }
}

namespace {

void describe_mdp(std::ostringstream& out, const std::string& title, const TabularMDP& mdp) {
  if (auto pair = mdp.unreachable_pair()) {
    throw ConfigError(title + ": not weakly communicating, state " + std::to_string(pair->second) +
                      " is unreachable from state " + std::to_string(pair->first));
  }
  const GainSolution gain = optimal_gain(mdp, 1e-12);
  const DiameterResult d = diameter(mdp, 1e-12);
  out << title << " (S=" << mdp.num_states() << ", A=" << mdp.num_actions() << ")\n";
  out << "  rho*     = " << format_double(gain.gain) << '\n';
  out << "  policy   = [";
  for (std::size_t s = 0; s < gain.policy.size(); ++s) {
    out << (s ? ", " : "") << gain.policy[s];
  }
  out << "]\n";
  out << "  diameter = " << format_double(d.diameter) << '\n';
  if (mdp.num_states() > 1) {
    double lo = std::numeric_limits<double>::infinity();
    std::pair<StateId, StateId> lo_pair{0, 0}, hi_pair{0, 0};
    double hi = -1.0;
    for (StateId i = 0; i < mdp.num_states(); ++i) {
      for (StateId j = 0; j < mdp.num_states(); ++j) {
        if (i == j) continue;
        const double h = d.hitting_time(i, j);
        if (h < lo) lo = h, lo_pair = {i, j};
        if (h > hi) hi = h, hi_pair = {i, j};
      }
    }
    out << "  hitting  min " << format_double(lo) << " (" << lo_pair.first << " -> "
        << lo_pair.second << "), max " << format_double(hi) << " (" << hi_pair.first << " -> "
        << hi_pair.second << ")\n";
  }
}

}  // namespace

std::string oracle_report(const ExperimentConfig& config) {
  std::ostringstream out;
  describe_mdp(out, "environment", config.environment.mdp);
  for (std::size_t j = 0; j < config.representations.size(); ++j) {
    const auto& rep = config.representations[j];
    if (!rep.is_markov || !rep.induced_mdp) continue;
    describe_mdp(out, "representations[" + std::to_string(j) + "] " + rep.kind + " induced MDP",
                 *rep.induced_mdp);
  }
  return out.str();
}

}  // namespace blb

#ifndef BLB_EXPERIMENT_HPP
#define BLB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "blb/config.hpp"
#include "blb/kernels.hpp"
#include "blb/regret.hpp"
#include "blb/selector.hpp"

namespace blb {

struct SeedResult {
  std::uint64_t seed = 0;
  RunTrace trace;
  RegretReport regret;
};

/// The run's random stream is seeded from (environment seed, run seed).
SeedResult run_seed(const Experiment& experiment, const BlbParams& params, double rho_star,
                    std::uint64_t horizon, std::uint64_t seed);

/// One run per seed; Execution::parallel spreads seeds over OpenMP threads.
/// Results are in seed-list order and identical for both paths.
std::vector<SeedResult> run_seeds(const Experiment& experiment, const BlbParams& params,
                                  double rho_star, std::uint64_t horizon,
                                  std::span<const std::uint64_t> seeds,
                                  Execution exec = Execution::parallel);

// Trace CSV: t,stage,phase,model_index,rep_state,action,reward,cum_reward,cum_regret
struct TraceRow {
  StepRecord step;
  double cum_reward;
  double cum_regret;
};

void write_trace_csv(std::ostream& out, const RunTrace& trace, const RegretReport& regret);
std::vector<TraceRow> read_trace_csv(std::istream& in);

// Regret CSV: t,cum_reward,cum_regret (row t = 0 included)
void write_regret_csv(std::ostream& out, const RegretReport& regret);
RegretReport read_regret_csv(std::istream& in, double rho_star);

/// Per-stage events (schedule, means, bounds, selections, eliminations, resets).
nlohmann::json stage_summary_json(const RunTrace& trace);

struct ExperimentOutcome {
  double rho_star = 0.0;
  std::size_t best_index = 0;
  std::vector<SeedResult> results;
  std::vector<std::filesystem::path> files;
};

/// Computes rho*, runs every seed, writes trace_seed<k>.csv,
/// regret_seed<k>.csv, summary_seed<k>.json and summary.json under the
/// output directory.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 Execution exec = Execution::parallel);

struct SweepRow {
  std::uint64_t horizon;
  std::optional<std::uint64_t> seed;  // unset on per-horizon mean rows
  double regret;
  double regret_per_t;
  double regret_per_t23;
};

/// One row per (horizon, seed) plus one mean row per horizon. Throws
/// ConfigError unless horizons are strictly increasing.
std::vector<SweepRow> sweep(const ExperimentConfig& config,
                            std::span<const std::uint64_t> horizons,
                            Execution exec = Execution::parallel);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// rho*, policy, diameter and hitting-time extremes of the environment MDP
/// and of every Markov-flagged representation's induced MDP.
std::string oracle_report(const ExperimentConfig& config);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace blb

#endif  // BLB_EXPERIMENT_HPP

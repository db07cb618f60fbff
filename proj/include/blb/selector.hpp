#ifndef BLB_SELECTOR_HPP
#define BLB_SELECTOR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blb/environment.hpp"
#include "blb/representation.hpp"

// Best-Lower-Bound representation selection: doubling stages, each split into
// a round-robin UCRL2 exploration of every model and an exploitation phase
// that plays the model with the highest lower bound and drops it when its
// running mean falls below that bound.
namespace blb {

enum class FMode { log2_plus_one, power };

struct BlbParams {
  double delta = 0.1;
  FMode f_mode = FMode::log2_plus_one;
  double epsilon = 0.5;  // power mode exponent
  double bound_scale = 1.0;
  bool clip_bound_at_one = true;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Diameter guess f(t): log2(t) + 1 or t^epsilon.
double f_value(const BlbParams& params, double t);

struct StageSchedule {
  unsigned stage = 0;
  std::uint64_t length = 0;        // tau_i = 2^i
  std::uint64_t exploration = 0;   // tau_{i,1}
  std::uint64_t exploitation = 0;  // tau_{i,2}
  std::uint64_t slot = 0;          // tau_{i,1,J}, steps per model while exploring

  bool operator==(const StageSchedule&) const = default;
};

/// slot = ceil(2^{2i/3} / J) computed exactly in integers;
/// exploration = min(J * slot, 2^i); exploitation = 2^i - exploration.
/// Requires 1 <= i <= 62 and J >= 1.
StageSchedule stage_schedule(unsigned stage, std::size_t num_models);

/// Per-stage UCRL2 confidence parameter
///   (2^i - (1/J + 1) 2^{2i/3} + 4)^{-1} 2^{-i+1} delta
/// with real-valued powers.
double delta_i(unsigned stage, std::size_t num_models, double delta);

/// Lower-bound width
///   scale * 34 f(tau_i - 1 + tau_{i,1}) |S| sqrt(A ln(slot / delta_i) / slot),
/// clipped to 1 when params.clip_bound_at_one.
double bound_B(unsigned stage, std::size_t num_models, std::size_t state_count,
               std::size_t action_count, const BlbParams& params);

/// argmax over candidates of mean - 2 * bound, ties to the lowest index.
/// Throws ContractError on an empty candidate set.
std::size_t select_model(std::span<const std::size_t> candidates, std::span<const double> means,
                         std::span<const double> bounds);

/// Pass iff run_mean >= explore_mean - 2 * bound.
bool exploitation_test(double run_mean, double explore_mean, double bound);

enum class Phase : std::uint8_t { explore, exploit };

struct StepRecord {
  std::uint64_t t;
  unsigned stage;
  Phase phase;
  std::size_t model;
  StateId rep_state;
  ActionId action;
  double reward;

  bool operator==(const StepRecord&) const = default;
};

struct TestRecord {
  std::uint64_t t;
  unsigned stage;
  std::size_t model;
  std::uint64_t run_length;
  double run_mean;
  double explore_mean;
  double bound;
  bool passed;

  bool operator==(const TestRecord&) const = default;
};

struct SelectionRecord {
  std::uint64_t t;  // first step of the run
  std::size_t model;

  bool operator==(const SelectionRecord&) const = default;
};

struct EliminationRecord {
  std::uint64_t t;
  std::size_t model;
  std::uint64_t run_length;

  bool operator==(const EliminationRecord&) const = default;
};

struct StageSummary {
  StageSchedule schedule;
  double delta = 0.0;
  std::vector<double> bounds;                      // per model, as used
  std::vector<std::optional<double>> explore_means;  // unset if the slot got no steps
  std::vector<std::uint64_t> explore_steps;        // per model
  std::vector<std::uint64_t> exploit_steps;        // per model, tau_{i,2}(phi)
  std::vector<SelectionRecord> selections;
  std::vector<EliminationRecord> eliminations;
  std::vector<std::uint64_t> resets;  // t of the step whose test emptied the set
  std::uint64_t first_t = 0;
  std::uint64_t steps = 0;
  bool truncated = false;

  /// Model playing when the exploitation phase ended, if it had any steps.
  std::optional<std::size_t> final_model() const {
    if (selections.empty()) return std::nullopt;
    return selections.back().model;
  }

  bool operator==(const StageSummary&) const = default;
};

struct RunTrace {
  std::vector<StepRecord> steps;
  std::vector<StageSummary> stages;
  std::vector<TestRecord> tests;

  std::vector<double> rewards() const;
  bool operator==(const RunTrace&) const = default;
};

/// The single interaction stream shared by every model of a run.
class Interaction {
 public:
  Interaction(const Environment& env, Rng rng);

  const Environment& environment() const { return *env_; }
  const History& history() const { return history_; }
  /// Index of the next step, t for h_{<t}.
  std::uint64_t t() const { return history_.length() + 1; }

  Outcome play(ActionId action);

 private:
  const Environment* env_;
  Rng rng_;
  History history_;
};

/// Runs stage `stage` for at most `remaining` steps, appending to `trace`.
StageSummary run_stage(unsigned stage, Interaction& io, std::span<const RepresentationFn> reps,
                       const BlbParams& params, std::uint64_t remaining, RunTrace& trace);

/// Stages 1, 2, ... until exactly `horizon` steps. Deterministic in
/// (environment, reps, params, rng state). The trace for a horizon is a
/// prefix of the trace for any longer one.
RunTrace run_blb(const Environment& env, std::span<const RepresentationFn> reps,
                 const BlbParams& params, std::uint64_t horizon, Rng rng);

/// Number of complete stages before time T: floor(log2(T + 1)).
unsigned stages_before(std::uint64_t horizon);

}  // namespace blb

#endif  // BLB_SELECTOR_HPP

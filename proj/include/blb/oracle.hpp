#ifndef BLB_ORACLE_HPP
#define BLB_ORACLE_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "blb/kernels.hpp"
#include "blb/representation.hpp"
#include "blb/tabular_mdp.hpp"

// Exact solvers on known MDPs. Used for regret accounting and test fixtures,
// never by the learner.
namespace blb {

struct GainSolution {
  double gain = 0.0;
  std::vector<double> bias;  // min entry is 0
  std::vector<ActionId> policy;
  std::size_t sweeps = 0;
};

struct GainOptions {
  double tol = 1e-9;
  std::size_t max_sweeps = 1'000'000;
  Execution execution = Execution::serial;
};

/// Relative value iteration on the aperiodicity-transformed MDP, stopped when
/// span(u_{n+1} - u_n) < tol. The gain is the midpoint of the span bounds.
/// Throws ConvergenceError past max_sweeps, ContractError for tol <= 0.
GainSolution optimal_gain(const TabularMDP& mdp, const GainOptions& options);
inline GainSolution optimal_gain(const TabularMDP& mdp, double tol = 1e-9) {
  return optimal_gain(mdp, GainOptions{.tol = tol});
}

/// max_s |max_a (r(s,a) + P(.|s,a) . bias) - bias(s) - gain|
double bellman_residual(const TabularMDP& mdp, const GainSolution& solution);

/// Long-run state occupancy of the chain induced by `policy`, started from
/// the uniform distribution. Power iteration on the lazy chain (P + I) / 2,
/// which shares the Cesaro limit of P and is aperiodic.
std::vector<double> occupancy(const TabularMDP& mdp, std::span<const ActionId> policy,
                              double tol = 1e-12, std::size_t max_iterations = 10'000'000);

/// Average reward of a deterministic stationary policy from a uniform start.
double policy_gain(const TabularMDP& mdp, std::span<const ActionId> policy, double tol = 1e-12);

struct EnumerationResult {
  double gain;
  std::vector<ActionId> policy;
};

/// Max of policy_gain over all A^S deterministic policies. Independent of the
/// value-iteration path, for cross-checks on small instances.
EnumerationResult best_policy_by_enumeration(const TabularMDP& mdp,
                                             Execution exec = Execution::serial);

struct DiameterResult {
  double diameter = 0.0;
  std::size_t num_states = 0;
  std::vector<double> hitting_times;  // [from * S + to], diagonal 0
  /// Set when some state cannot reach another; diameter is then +inf.
  std::optional<std::pair<StateId, StateId>> unreachable;

  double hitting_time(StateId from, StateId to) const {
    return hitting_times[from * num_states + to];
  }
};

/// Minimal expected travel times by value iteration on each target's
/// shortest-path fixed point. Targets are independent and run in parallel
/// under Execution::parallel.
DiameterResult diameter(const TabularMDP& mdp, double tol = 1e-10,
                        Execution exec = Execution::serial,
                        std::size_t max_sweeps = 10'000'000);

struct BestMarkovGain {
  double gain;
  std::size_t index;
};

/// Highest optimal gain over the Markov-flagged representations, ties to the
/// lowest index. `induced[j]` is the MDP the builder derived for reps[j].
/// Throws ConfigError when no representation is flagged Markov or a flagged
/// one lacks its induced MDP.
BestMarkovGain best_markov_gain(std::span<const RepresentationFn> reps,
                                std::span<const std::optional<TabularMDP>> induced,
                                double tol = 1e-9);

}  // namespace blb

#endif  // BLB_ORACLE_HPP

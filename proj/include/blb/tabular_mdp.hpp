#ifndef BLB_TABULAR_MDP_HPP
#define BLB_TABULAR_MDP_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "blb/common.hpp"

namespace blb {

/// Finite MDP with a row-stochastic S x A x S kernel and mean rewards in [0,1].
/// Storage is dense and row-major: transition(s, a) is a contiguous span of S.
class TabularMDP {
 public:
  TabularMDP(std::size_t num_states, std::size_t num_actions);
  /// transitions[s][a][s'] and rewards[s][a]; validated on construction.
  TabularMDP(const std::vector<std::vector<std::vector<double>>>& transitions,
             const std::vector<std::vector<double>>& rewards);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  std::span<const double> transition(StateId s, ActionId a) const {
    return {kernel_.data() + (s * num_actions_ + a) * num_states_, num_states_};
  }
  std::span<double> transition(StateId s, ActionId a) {
    return {kernel_.data() + (s * num_actions_ + a) * num_states_, num_states_};
  }
  double reward(StateId s, ActionId a) const { return rewards_[s * num_actions_ + a]; }
  void set_reward(StateId s, ActionId a, double r) { rewards_[s * num_actions_ + a] = r; }

  /// Throws ConfigError on rows not summing to 1 within 1e-12, negative
  /// entries, or rewards outside [0,1].
  void validate_stochastic() const;

  /// First ordered pair (from, to) with `to` unreachable from `from` in the
  /// union-over-actions support graph, if any.
  std::optional<std::pair<StateId, StateId>> unreachable_pair() const;
  bool weakly_communicating() const { return !unreachable_pair().has_value(); }

  /// validate_stochastic() plus the communication check.
  void validate() const;

  /// Same MDP with states relabeled: new state perm[s] plays old state s.
  TabularMDP permuted(std::span<const std::size_t> perm) const;

  bool operator==(const TabularMDP&) const = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> kernel_;
  std::vector<double> rewards_;
};

/// Fixtures used by the builtin environments, the tests, and the CLI.
namespace mdps {
/// Deterministic two-state cycle, one action, rewards (0, 1). Gain 0.5, D = 1.
TabularMDP two_cycle();
/// Two states, two actions. Optimal policy (a1, a0), gain 0.75, D = 1.25.
TabularMDP two_state_example();
/// Single state and action with reward mean 1.
TabularMDP constant_one();
/// RiverSwim chain with n states (n >= 2).
TabularMDP river_swim(std::size_t n);
}  // namespace mdps

}  // namespace blb

#endif  // BLB_TABULAR_MDP_HPP

#ifndef BLB_UCRL2_HPP
#define BLB_UCRL2_HPP

#include <span>
#include <vector>

#include "blb/common.hpp"

namespace blb {

struct ConfidenceWidths {
  double reward;
  double transition;  // L1 radius
};

/// W_r = sqrt(7 ln(2 S A t / delta) / (2 max(1, N))),
/// W_p = sqrt(14 S ln(2 A t / delta) / max(1, N)).
ConfidenceWidths confidence_widths(std::size_t num_states, std::size_t num_actions,
                                   std::uint64_t t, std::uint64_t visits, double delta);

/// Inputs to extended value iteration: empirical means and confidence radii
/// per (s, a). Rows of p_hat for unvisited pairs are uniform.
struct EmpiricalModel {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> p_hat;          // [(s * A + a) * S + s']
  std::vector<double> r_hat;          // [s * A + a]
  std::vector<double> reward_width;   // [s * A + a]
  std::vector<double> transition_width;

  EmpiricalModel(std::size_t s, std::size_t a);
  std::size_t pair(StateId s, ActionId a) const { return s * num_actions + a; }
  std::span<const double> row(StateId s, ActionId a) const {
    return {p_hat.data() + pair(s, a) * num_states, num_states};
  }
  std::span<double> row(StateId s, ActionId a) {
    return {p_hat.data() + pair(s, a) * num_states, num_states};
  }
};

struct OptimisticModel {
  std::vector<double> reward_upper;  // [s * A + a], r~ = min(1, r_hat + W_r)
  std::vector<double> kernels;       // [(s * A + a) * S + s'], p~ at the last sweep
  double gain = 0.0;
  std::vector<double> u;             // min entry is 0
  std::vector<ActionId> policy;
  std::size_t sweeps = 0;
};

struct EviOptions {
  double epsilon;  // stop when span(u_{k+1} - u_k) < epsilon
  std::size_t max_sweeps = 1'000'000;
};

/// argmax of p . u over the L1 ball of radius `width` around p_hat, within
/// the simplex. Mass moves onto the best state; the excess is removed from
/// the worst states upward. Ties in u keep the lower index as the better one.
std::vector<double> inner_max_transition(std::span<const double> p_hat, double width,
                                         std::span<const double> u);

/// Same, with `order` the state indices sorted best-first; writes into `out`.
void inner_max_transition(std::span<const double> p_hat, double width,
                          std::span<const std::size_t> order, std::span<double> out);

/// Value iteration over the optimistic MDP set. Sweeps use the aperiodicity
/// mix 1/2 so that periodic optimistic chains still converge; re-centered to
/// min u = 0 every sweep. Throws ConvergenceError past the sweep cap.
OptimisticModel extended_value_iteration(const EmpiricalModel& model, const EviOptions& options);

/// One UCRL2 learner on a fixed finite state space.
///
/// Counts folded at the start of the current episode are N(s,a); episode
/// counts are nu(s,a). Transition counts and reward sums always include the
/// running episode, so sum_{s'} N(s,a,s') = N(s,a) + nu(s,a).
class Ucrl2 {
 public:
  /// Throws ContractError unless delta in (0,1) and both sizes >= 1.
  Ucrl2(std::size_t num_states, std::size_t num_actions, double delta);

  /// Action for `state` under the current policy. Ends the episode first
  /// when nu(s, pi(s)) >= max(1, N(s, pi(s))).
  ActionId act(StateId state);

  /// Records (s, a, r, s'). Throws ContractError for r outside [0,1] or
  /// out-of-range ids.
  void update(StateId s, ActionId a, double reward, StateId next);

  /// Widths from the folded counts N(s,a) and the current step t.
  ConfidenceWidths confidence_widths(StateId s, ActionId a) const;

  /// Empirical model from all counts so far; zero_widths forces W_r = W_p = 0.
  EmpiricalModel empirical_model(bool zero_widths = false) const;

  /// EVI on empirical_model() with epsilon = 1/sqrt(t).
  OptimisticModel plan() const;

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  double delta() const { return delta_; }
  std::uint64_t t() const { return t_; }
  std::uint64_t episode_start() const { return episode_start_; }
  std::size_t episodes() const { return episodes_; }
  double optimistic_gain() const { return optimistic_gain_; }

  std::uint64_t visits(StateId s, ActionId a) const { return visits_[pair(s, a)]; }
  std::uint64_t episode_visits(StateId s, ActionId a) const { return episode_visits_[pair(s, a)]; }
  std::uint64_t transitions(StateId s, ActionId a, StateId next) const {
    return transitions_[pair(s, a) * num_states_ + next];
  }
  double reward_sum(StateId s, ActionId a) const { return reward_sums_[pair(s, a)]; }
  const std::vector<ActionId>& policy() const { return policy_; }

  bool operator==(const Ucrl2&) const = default;

 private:
  std::size_t pair(StateId s, ActionId a) const { return s * num_actions_ + a; }
  void start_episode();

  std::size_t num_states_;
  std::size_t num_actions_;
  double delta_;
  std::uint64_t t_ = 1;
  std::uint64_t episode_start_ = 1;
  std::size_t episodes_ = 0;
  double optimistic_gain_ = 0.0;
  std::vector<std::uint64_t> visits_;
  std::vector<std::uint64_t> episode_visits_;
  std::vector<std::uint64_t> transitions_;
  std::vector<double> reward_sums_;
  std::vector<ActionId> policy_;
};

}  // namespace blb

#endif  // BLB_UCRL2_HPP

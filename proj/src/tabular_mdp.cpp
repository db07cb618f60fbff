#include "blb/tabular_mdp.hpp"

#include <cmath>
#include <string>

namespace blb {

TabularMDP::TabularMDP(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      kernel_(num_states * num_actions * num_states, 0.0),
      rewards_(num_states * num_actions, 0.0) {
  if (num_states == 0 || num_actions == 0) {
    throw ConfigError("mdp: num_states and num_actions must be positive");
  }
}

TabularMDP::TabularMDP(const std::vector<std::vector<std::vector<double>>>& transitions,
                       const std::vector<std::vector<double>>& rewards)
    : TabularMDP(transitions.size(), transitions.empty() ? 0 : transitions[0].size()) {
  if (rewards.size() != num_states_) {
    throw ConfigError("mdp.rewards: expected " + std::to_string(num_states_) + " rows");
  }
  for (StateId s = 0; s < num_states_; ++s) {
    if (transitions[s].size() != num_actions_ || rewards[s].size() != num_actions_) {
      throw ConfigError("mdp: state " + std::to_string(s) + " must list " +
                        std::to_string(num_actions_) + " actions");
    }
    for (ActionId a = 0; a < num_actions_; ++a) {
      if (transitions[s][a].size() != num_states_) {
        throw ConfigError("mdp.transitions[" + std::to_string(s) + "][" + std::to_string(a) +
                          "]: expected " + std::to_string(num_states_) + " entries");
      }
      auto row = transition(s, a);
      for (StateId n = 0; n < num_states_; ++n) row[n] = transitions[s][a][n];
      set_reward(s, a, rewards[s][a]);
    }
  }
  validate_stochastic();
}

void TabularMDP::validate_stochastic() const {
  for (StateId s = 0; s < num_states_; ++s) {
    for (ActionId a = 0; a < num_actions_; ++a) {
      const std::string where = "[" + std::to_string(s) + "][" + std::to_string(a) + "]";
      double total = 0.0;
      for (double p : transition(s, a)) {
        if (!(p >= 0.0)) throw ConfigError("mdp.transitions" + where + ": negative entry");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError("mdp.transitions" + where + ": row sums to " + std::to_string(total));
      }
      const double r = reward(s, a);
      if (!(r >= 0.0 && r <= 1.0)) {
        throw ConfigError("mdp.rewards" + where + ": mean reward outside [0,1]");
      }
    }
  }
}

std::optional<std::pair<StateId, StateId>> TabularMDP::unreachable_pair() const {
  const std::size_t n = num_states_;
  // Transitive closure of the union-over-actions support graph.
  std::vector<char> reach(n * n, 0);
  for (StateId s = 0; s < n; ++s) {
    reach[s * n + s] = 1;
    for (ActionId a = 0; a < num_actions_; ++a) {
      auto row = transition(s, a);
      for (StateId t = 0; t < n; ++t) {
        if (row[t] > 0.0) reach[s * n + t] = 1;
      }
    }
  }
  for (StateId k = 0; k < n; ++k) {
    for (StateId i = 0; i < n; ++i) {
      if (!reach[i * n + k]) continue;
      for (StateId j = 0; j < n; ++j) {
        if (reach[k * n + j]) reach[i * n + j] = 1;
      }
    }
  }
  for (StateId i = 0; i < n; ++i) {
    for (StateId j = 0; j < n; ++j) {
      if (!reach[i * n + j]) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

void TabularMDP::validate() const {
  validate_stochastic();
  if (auto pair = unreachable_pair()) {
    throw ConfigError("mdp: not weakly communicating, state " + std::to_string(pair->second) +
                      " is unreachable from state " + std::to_string(pair->first));
  }
}

TabularMDP TabularMDP::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != num_states_) throw ContractError("permuted: wrong permutation length");
  TabularMDP out(num_states_, num_actions_);
  for (StateId s = 0; s < num_states_; ++s) {
    for (ActionId a = 0; a < num_actions_; ++a) {
      out.set_reward(perm[s], a, reward(s, a));
      auto src = transition(s, a);
      auto dst = out.transition(perm[s], a);
      for (StateId t = 0; t < num_states_; ++t) dst[perm[t]] = src[t];
    }
  }
  return out;
}

namespace mdps {

TabularMDP two_cycle() {
  return TabularMDP({{{0.0, 1.0}}, {{1.0, 0.0}}}, {{0.0}, {1.0}});
}

TabularMDP two_state_example() {
  return TabularMDP({{{0.9, 0.1}, {0.1, 0.9}}, {{0.3, 0.7}, {0.8, 0.2}}},
                    {{0.0, 0.0}, {1.0, 0.0}});
}

TabularMDP constant_one() { return TabularMDP({{{1.0}}}, {{1.0}}); }

TabularMDP river_swim(std::size_t n) {
  if (n < 2) throw ConfigError("river_swim: needs at least 2 states");
  TabularMDP mdp(n, 2);
  constexpr ActionId left = 0, right = 1;
  for (StateId s = 0; s < n; ++s) {
    mdp.transition(s, left)[s == 0 ? 0 : s - 1] = 1.0;
    auto row = mdp.transition(s, right);
    if (s == 0) {
      row[0] = 0.6;
      row[1] = 0.4;
    } else if (s == n - 1) {
      row[s - 1] = 0.4;
      row[s] = 0.6;
    } else {
      row[s - 1] = 0.05;
      row[s] = 0.6;
      row[s + 1] = 0.35;
    }
  }
  mdp.set_reward(0, left, 0.005);
  mdp.set_reward(n - 1, right, 1.0);
  return mdp;
}

}  // namespace mdps

}  // namespace blb

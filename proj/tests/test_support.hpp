#ifndef BLB_TEST_SUPPORT_HPP
#define BLB_TEST_SUPPORT_HPP

#include <numeric>
#include <vector>

#include "blb/common.hpp"
#include "blb/tabular_mdp.hpp"
#include "blb/ucrl2.hpp"

namespace blb::testing {

/// Random weakly-communicating MDP: each row has a random support of size
/// >= 1 with weights in [0.05, 1]; rejection-sampled until communicating.
inline TabularMDP random_mdp(Rng& rng, std::size_t states, std::size_t actions,
                             double max_reward = 1.0) {
  for (;;) {
    TabularMDP mdp(states, actions);
    for (StateId s = 0; s < states; ++s) {
      for (ActionId a = 0; a < actions; ++a) {
        auto row = mdp.transition(s, a);
        double total = 0.0;
        for (StateId t = 0; t < states; ++t) {
          row[t] = uniform01(rng) < 0.6 ? 0.05 + 0.95 * uniform01(rng) : 0.0;
          total += row[t];
        }
        if (total == 0.0) {
          const StateId t = rng() % states;
          row[t] = 1.0;
          total = 1.0;
        }
        for (double& p : row) p /= total;
        // Make the row sum to 1 to the last bit.
        double rest = 0.0;
        StateId last = 0;
        for (StateId t = 0; t < states; ++t) {
          if (row[t] > 0.0) last = t;
        }
        for (StateId t = 0; t < states; ++t) {
          if (t != last) rest += row[t];
        }
        row[last] = 1.0 - rest;
        mdp.set_reward(s, a, max_reward * uniform01(rng));
      }
    }
    if (mdp.weakly_communicating()) {
      mdp.validate_stochastic();
      return mdp;
    }
  }
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
  return p;
}

/// Empirical model whose estimates are the MDP itself, all widths `width`.
inline EmpiricalModel model_of(const TabularMDP& mdp, double width = 0.0) {
  EmpiricalModel m(mdp.num_states(), mdp.num_actions());
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    for (ActionId a = 0; a < mdp.num_actions(); ++a) {
      const auto src = mdp.transition(s, a);
      std::copy(src.begin(), src.end(), m.row(s, a).begin());
      m.r_hat[m.pair(s, a)] = mdp.reward(s, a);
      m.reward_width[m.pair(s, a)] = width;
      m.transition_width[m.pair(s, a)] = width;
    }
  }
  return m;
}

}  // namespace blb::testing

#endif  // BLB_TEST_SUPPORT_HPP

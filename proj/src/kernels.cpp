#include "blb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blb {

namespace {

// Value of the transformed operator at one state; shared by both sweep paths.
inline double backup_state(const TabularMDP& mdp, std::span<const double> u, StateId s,
                           double mix, ActionId& greedy) {
  const std::size_t actions = mdp.num_actions();
  double small[16];
  std::vector<double> large;
  double* q = small;
  if (actions > 16) {
    large.resize(actions);
    q = large.data();
  }
  double best = -std::numeric_limits<double>::infinity();
  for (ActionId a = 0; a < actions; ++a) {
    auto row = mdp.transition(s, a);
    double expected = 0.0;
    for (StateId n = 0; n < row.size(); ++n) expected += row[n] * u[n];
    q[a] = mdp.reward(s, a) + mix * expected;
    best = std::max(best, q[a]);
  }
  greedy = 0;
  while (q[greedy] < best - kTieTolerance) ++greedy;
  return best + (1.0 - mix) * u[s];
}

}  // namespace

SweepIncrement bellman_sweep_serial(const TabularMDP& mdp, std::span<const double> u,
                                    std::span<double> next, std::span<ActionId> greedy,
                                    double mix) {
  SweepIncrement inc{-std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    next[s] = backup_state(mdp, u, s, mix, greedy[s]);
    const double d = next[s] - u[s];
    inc.max = std::max(inc.max, d);
    inc.min = std::min(inc.min, d);
  }
  return inc;
}

SweepIncrement bellman_sweep_parallel(const TabularMDP& mdp, std::span<const double> u,
                                      std::span<double> next, std::span<ActionId> greedy,
                                      double mix) {
  const long n = static_cast<long>(mdp.num_states());
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : hi) reduction(min : lo)
  for (long s = 0; s < n; ++s) {
    next[s] = backup_state(mdp, u, static_cast<StateId>(s), mix, greedy[s]);
    const double d = next[s] - u[s];
    hi = std::max(hi, d);
    lo = std::min(lo, d);
  }
  return {hi, lo};
}

SweepIncrement bellman_sweep(const TabularMDP& mdp, std::span<const double> u,
                             std::span<double> next, std::span<ActionId> greedy, double mix,
                             Execution exec) {
  return exec == Execution::parallel ? bellman_sweep_parallel(mdp, u, next, greedy, mix)
                                     : bellman_sweep_serial(mdp, u, next, greedy, mix);
}

double hitting_time_sweep(const TabularMDP& mdp, StateId target, std::span<const double> times,
                          std::span<double> next) {
  double change = 0.0;
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    if (s == target) {
      next[s] = 0.0;
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < mdp.num_actions(); ++a) {
      auto row = mdp.transition(s, a);
      double expected = 0.0;
      for (StateId n = 0; n < row.size(); ++n) {
        if (row[n] > 0.0) expected += row[n] * times[n];
      }
      best = std::min(best, expected);
    }
    next[s] = 1.0 + best;
    change = std::max(change, std::abs(next[s] - times[s]));
  }
  return change;
}

}  // namespace blb

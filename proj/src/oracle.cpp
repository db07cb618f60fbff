#include "blb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace blb {

namespace {
constexpr double kMix = 0.5;
}

GainSolution optimal_gain(const TabularMDP& mdp, const GainOptions& options) {
  if (!(options.tol > 0.0)) throw ContractError("optimal_gain: tol must be positive");
  const std::size_t n = mdp.num_states();
  std::vector<double> u(n, 0.0), next(n, 0.0);
  std::vector<ActionId> greedy(n, 0);
  double span = std::numeric_limits<double>::infinity();
  for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    const SweepIncrement inc = bellman_sweep(mdp, u, next, greedy, kMix, options.execution);
    span = inc.span();
    if (span < options.tol) {
      GainSolution sol;
      sol.gain = 0.5 * (inc.max + inc.min);
      const double lo = *std::min_element(next.begin(), next.end());
      sol.bias.resize(n);
      // The transformed operator's relative values are the original bias / mix.
      for (StateId s = 0; s < n; ++s) sol.bias[s] = kMix * (next[s] - lo);
      sol.policy = greedy;
      sol.sweeps = sweep;
      return sol;
    }
    const double ref = next[0];
    for (StateId s = 0; s < n; ++s) u[s] = next[s] - ref;
  }
  throw ConvergenceError("optimal_gain: no convergence after " +
                             std::to_string(options.max_sweeps) + " sweeps, span " +
                             std::to_string(span),
                         span);
}

double bellman_residual(const TabularMDP& mdp, const GainSolution& solution) {
  double worst = 0.0;
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < mdp.num_actions(); ++a) {
      auto row = mdp.transition(s, a);
      double q = mdp.reward(s, a);
      for (StateId t = 0; t < row.size(); ++t) q += row[t] * solution.bias[t];
      best = std::max(best, q);
    }
    worst = std::max(worst, std::abs(best - solution.bias[s] - solution.gain));
  }
  return worst;
}

std::vector<double> occupancy(const TabularMDP& mdp, std::span<const ActionId> policy,
                              double tol, std::size_t max_iterations) {
  const std::size_t n = mdp.num_states();
  if (policy.size() != n) throw ContractError("occupancy: policy length differs from S");
  for (ActionId a : policy) {
    if (a >= mdp.num_actions()) throw ContractError("occupancy: invalid action in policy");
  }
  std::vector<double> d(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (StateId s = 0; s < n; ++s) {
      auto row = mdp.transition(s, policy[s]);
      next[s] += 0.5 * d[s];
      for (StateId t = 0; t < n; ++t) next[t] += 0.5 * d[s] * row[t];
    }
    double change = 0.0;
    for (StateId s = 0; s < n; ++s) change += std::abs(next[s] - d[s]);
    d.swap(next);
    if (change < tol) break;
  }
  return d;
}

double policy_gain(const TabularMDP& mdp, std::span<const ActionId> policy, double tol) {
  const auto d = occupancy(mdp, policy, tol);
  double gain = 0.0;
  for (StateId s = 0; s < d.size(); ++s) gain += d[s] * mdp.reward(s, policy[s]);
  return gain;
}

namespace {

std::vector<ActionId> decode_policy(std::uint64_t index, std::size_t states, std::size_t actions) {
  std::vector<ActionId> policy(states);
  for (StateId s = 0; s < states; ++s) {
    policy[s] = index % actions;
    index /= actions;
  }
  return policy;
}

}  // namespace

EnumerationResult best_policy_by_enumeration(const TabularMDP& mdp, Execution exec) {
  const std::size_t states = mdp.num_states();
  const std::size_t actions = mdp.num_actions();
  std::uint64_t total = 1;
  for (StateId s = 0; s < states; ++s) {
    if (total > (std::uint64_t{1} << 24) / actions) {
      throw ContractError("best_policy_by_enumeration: too many policies");
    }
    total *= actions;
  }
  double best_gain = -1.0;
  std::uint64_t best_index = 0;
  const long count = static_cast<long>(total);
  if (exec == Execution::parallel) {
#pragma omp parallel
    {
      double local_gain = -1.0;
      std::uint64_t local_index = 0;
#pragma omp for schedule(static) nowait
      for (long i = 0; i < count; ++i) {
        const double g = policy_gain(mdp, decode_policy(i, states, actions));
        if (g > local_gain) {
          local_gain = g;
          local_index = static_cast<std::uint64_t>(i);
        }
      }
#pragma omp critical
      {
        if (local_gain > best_gain || (local_gain == best_gain && local_index < best_index)) {
          best_gain = local_gain;
          best_index = local_index;
        }
      }
    }
  } else {
    for (long i = 0; i < count; ++i) {
      const double g = policy_gain(mdp, decode_policy(i, states, actions));
      if (g > best_gain) {
        best_gain = g;
        best_index = static_cast<std::uint64_t>(i);
      }
    }
  }
  return {best_gain, decode_policy(best_index, states, actions)};
}

namespace {

// Column `target` of the hitting-time table.
void solve_target(const TabularMDP& mdp, StateId target, double tol, std::size_t max_sweeps,
                  std::span<double> column) {
  const std::size_t n = mdp.num_states();
  std::vector<double> times(n, 0.0), next(n, 0.0);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    const double change = hitting_time_sweep(mdp, target, times, next);
    times.swap(next);
    if (change < tol) {
      std::copy(times.begin(), times.end(), column.begin());
      return;
    }
  }
  std::fill(column.begin(), column.end(), std::numeric_limits<double>::infinity());
  column[target] = 0.0;
}

}  // namespace

DiameterResult diameter(const TabularMDP& mdp, double tol, Execution exec,
                        std::size_t max_sweeps) {
  const std::size_t n = mdp.num_states();
  DiameterResult result;
  result.num_states = n;
  result.hitting_times.assign(n * n, 0.0);
  if (auto pair = mdp.unreachable_pair()) {
    result.unreachable = pair;
    result.diameter = std::numeric_limits<double>::infinity();
    return result;
  }
  // columns[target * n + from], transposed into hitting_times afterwards
  std::vector<double> columns(n * n, 0.0);
  const long targets = static_cast<long>(n);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < targets; ++t) {
      solve_target(mdp, t, tol, max_sweeps, {columns.data() + t * n, n});
    }
  } else {
    for (long t = 0; t < targets; ++t) {
      solve_target(mdp, t, tol, max_sweeps, {columns.data() + t * n, n});
    }
  }
  for (StateId to = 0; to < n; ++to) {
    for (StateId from = 0; from < n; ++from) {
      const double h = columns[to * n + from];
      result.hitting_times[from * n + to] = h;
      if (h > result.diameter) result.diameter = h;
      if (std::isinf(h) && !result.unreachable) result.unreachable = std::pair{from, to};
    }
  }
  return result;
}

BestMarkovGain best_markov_gain(std::span<const RepresentationFn> reps,
                                std::span<const std::optional<TabularMDP>> induced, double tol) {
  if (induced.size() != reps.size()) {
    throw ContractError("best_markov_gain: one induced-MDP slot per representation");
  }
  std::optional<BestMarkovGain> best;
  for (std::size_t j = 0; j < reps.size(); ++j) {
    if (!reps[j].is_markov_ground_truth()) continue;
    if (!induced[j]) {
      throw ConfigError("representations[" + std::to_string(j) +
                        "].induced_mdp: required for a Markov-flagged representation");
    }
    const double g = optimal_gain(*induced[j], tol).gain;
    if (!best || g > best->gain) best = BestMarkovGain{g, j};
  }
  if (!best) {
    throw ConfigError(
        "representations: no representation is flagged is_markov; at least one of the "
        "candidate models must be a Markov model of the environment");
  }
  return *best;
}

}  // namespace blb

#include "blb/ucrl2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "blb/kernels.hpp"

namespace blb {

namespace {
constexpr double kMix = 0.5;
}

EmpiricalModel::EmpiricalModel(std::size_t s, std::size_t a)
    : num_states(s),
      num_actions(a),
      p_hat(s * a * s, 1.0 / static_cast<double>(s)),
      r_hat(s * a, 0.0),
      reward_width(s * a, 0.0),
      transition_width(s * a, 0.0) {}

void inner_max_transition(std::span<const double> p_hat, double width,
                          std::span<const std::size_t> order, std::span<double> out) {
  std::copy(p_hat.begin(), p_hat.end(), out.begin());
  const std::size_t best = order[0];
  out[best] = std::min(1.0, p_hat[best] + 0.5 * width);
  double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (std::size_t l = order.size() - 1; l > 0 && total > 1.0; --l) {
    const std::size_t worst = order[l];
    const double cut = std::min(out[worst], total - 1.0);
    out[worst] -= cut;
    total -= cut;
  }
}

namespace {

void sort_best_first(std::span<const double> u, std::vector<std::size_t>& order) {
  order.resize(u.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });
}

}  // namespace

std::vector<double> inner_max_transition(std::span<const double> p_hat, double width,
                                         std::span<const double> u) {
  if (p_hat.size() != u.size() || p_hat.empty()) {
    throw ContractError("inner_max_transition: p_hat and u must have equal nonzero length");
  }
  if (!(width >= 0.0)) throw ContractError("inner_max_transition: width must be >= 0");
  std::vector<std::size_t> order;
  sort_best_first(u, order);
  std::vector<double> out(p_hat.size());
  inner_max_transition(p_hat, width, order, out);
  return out;
}

OptimisticModel extended_value_iteration(const EmpiricalModel& model, const EviOptions& options) {
  const std::size_t S = model.num_states;
  const std::size_t A = model.num_actions;
  OptimisticModel out;
  out.reward_upper.resize(S * A);
  for (std::size_t sa = 0; sa < S * A; ++sa) {
    out.reward_upper[sa] = std::min(1.0, model.r_hat[sa] + model.reward_width[sa]);
  }
  out.kernels.assign(S * A * S, 0.0);
  out.policy.assign(S, 0);

  std::vector<double> u(S, 0.0), next(S, 0.0), q(A, 0.0);
  std::vector<std::size_t> order;
  double span = std::numeric_limits<double>::infinity();
  for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    sort_best_first(u, order);
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (StateId s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (ActionId a = 0; a < A; ++a) {
        const std::size_t sa = model.pair(s, a);
        std::span<double> kernel{out.kernels.data() + sa * S, S};
        inner_max_transition(model.row(s, a), model.transition_width[sa], order, kernel);
        double expected = 0.0;
        for (StateId t = 0; t < S; ++t) expected += kernel[t] * u[t];
        q[a] = out.reward_upper[sa] + kMix * expected;
        best = std::max(best, q[a]);
      }
      ActionId greedy = 0;
      while (q[greedy] < best - kTieTolerance) ++greedy;
      out.policy[s] = greedy;
      next[s] = best + (1.0 - kMix) * u[s];
      hi = std::max(hi, next[s] - u[s]);
      lo = std::min(lo, next[s] - u[s]);
    }
    span = hi - lo;
    const double base = *std::min_element(next.begin(), next.end());
    for (StateId s = 0; s < S; ++s) u[s] = next[s] - base;
    if (span < options.epsilon) {
      out.gain = 0.5 * (hi + lo);
      out.u = u;
      out.sweeps = sweep;
      return out;
    }
  }
  throw ConvergenceError("extended_value_iteration: no convergence after " +
                             std::to_string(options.max_sweeps) + " sweeps, span " +
                             std::to_string(span),
                         span);
}

Ucrl2::Ucrl2(std::size_t num_states, std::size_t num_actions, double delta)
    : num_states_(num_states), num_actions_(num_actions), delta_(delta) {
  if (num_states == 0 || num_actions == 0) {
    throw ContractError("ucrl2: num_states and num_actions must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ContractError("ucrl2: delta must lie in (0,1)");
  const std::size_t pairs = num_states * num_actions;
  visits_.assign(pairs, 0);
  episode_visits_.assign(pairs, 0);
  transitions_.assign(pairs * num_states, 0);
  reward_sums_.assign(pairs, 0.0);
  policy_.assign(num_states, 0);
  start_episode();
}

void Ucrl2::start_episode() {
  for (std::size_t sa = 0; sa < visits_.size(); ++sa) {
    visits_[sa] += episode_visits_[sa];
    episode_visits_[sa] = 0;
  }
  episode_start_ = t_;
  ++episodes_;
  OptimisticModel model = plan();
  policy_ = std::move(model.policy);
  optimistic_gain_ = model.gain;
}

ActionId Ucrl2::act(StateId state) {
  if (state >= num_states_) throw ContractError("ucrl2: state out of range");
  const ActionId a = policy_[state];
  const std::size_t sa = pair(state, a);
  if (episode_visits_[sa] >= std::max<std::uint64_t>(1, visits_[sa])) {
    start_episode();
    return policy_[state];
  }
  return a;
}

void Ucrl2::update(StateId s, ActionId a, double reward, StateId next) {
  if (s >= num_states_ || next >= num_states_ || a >= num_actions_) {
    throw ContractError("ucrl2: update with out-of-range ids");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw ContractError("ucrl2: reward " + std::to_string(reward) + " outside [0,1]");
  }
  const std::size_t sa = pair(s, a);
  ++episode_visits_[sa];
  reward_sums_[sa] += reward;
  ++transitions_[sa * num_states_ + next];
  ++t_;
}

ConfidenceWidths confidence_widths(std::size_t num_states, std::size_t num_actions,
                                   std::uint64_t t, std::uint64_t visits, double delta) {
  const double S = static_cast<double>(num_states);
  const double A = static_cast<double>(num_actions);
  const double steps = static_cast<double>(t);
  const double n = static_cast<double>(std::max<std::uint64_t>(1, visits));
  return {std::sqrt(7.0 * std::log(2.0 * S * A * steps / delta) / (2.0 * n)),
          std::sqrt(14.0 * S * std::log(2.0 * A * steps / delta) / n)};
}

ConfidenceWidths Ucrl2::confidence_widths(StateId s, ActionId a) const {
  return blb::confidence_widths(num_states_, num_actions_, t_, visits_[pair(s, a)], delta_);
}

EmpiricalModel Ucrl2::empirical_model(bool zero_widths) const {
  EmpiricalModel model(num_states_, num_actions_);
  for (StateId s = 0; s < num_states_; ++s) {
    for (ActionId a = 0; a < num_actions_; ++a) {
      const std::size_t sa = pair(s, a);
      const std::uint64_t n = visits_[sa] + episode_visits_[sa];
      if (n > 0) {
        model.r_hat[sa] = reward_sums_[sa] / static_cast<double>(n);
        auto row = model.row(s, a);
        for (StateId t = 0; t < num_states_; ++t) {
          row[t] = static_cast<double>(transitions_[sa * num_states_ + t]) /
                   static_cast<double>(n);
        }
      }
      if (!zero_widths) {
        const ConfidenceWidths w = confidence_widths(s, a);
        model.reward_width[sa] = w.reward;
        model.transition_width[sa] = w.transition;
      }
    }
  }
  return model;
}

OptimisticModel Ucrl2::plan() const {
  return extended_value_iteration(empirical_model(),
                                  {.epsilon = 1.0 / std::sqrt(static_cast<double>(t_))});
}

}  // namespace blb

#include "blb/selector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "blb/ucrl2.hpp"

namespace blb {

void BlbParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("blb.delta: must lie in (0,1)");
  if (!(bound_scale >= 0.0) || !std::isfinite(bound_scale)) {
    throw ConfigError("blb.bound_scale: must be finite and >= 0");
  }
  if (f_mode == FMode::power && !(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("blb.epsilon: must lie in (0,1) in power mode");
  }
}

double f_value(const BlbParams& params, double t) {
  return params.f_mode == FMode::log2_plus_one ? std::log2(t) + 1.0
                                               : std::pow(t, params.epsilon);
}

StageSchedule stage_schedule(unsigned stage, std::size_t num_models) {
  if (stage < 1 || stage > 62) throw ContractError("stage_schedule: stage must lie in [1, 62]");
  if (num_models < 1) throw ContractError("stage_schedule: need at least one model");
  using u128 = unsigned __int128;
  const u128 target = u128{1} << (2 * stage);  // (tau_i^{2/3})^3 = 4^i
  const u128 J = num_models;
  // Smallest slot with (slot * J)^3 >= 4^i, seeded from floating point.
  auto covers = [&](u128 slot) {
    const u128 x = slot * J;
    return x * x * x >= target;
  };
  u128 slot = static_cast<u128>(
      std::ceil(std::exp2(2.0 * stage / 3.0) / static_cast<double>(num_models)));
  if (slot == 0) slot = 1;
  while (slot > 1 && covers(slot - 1)) --slot;
  while (!covers(slot)) ++slot;

  StageSchedule s;
  s.stage = stage;
  s.length = std::uint64_t{1} << stage;
  s.slot = static_cast<std::uint64_t>(slot);
  const u128 exploration = slot * J;
  s.exploration = exploration >= s.length ? s.length : static_cast<std::uint64_t>(exploration);
  s.exploitation = s.length - s.exploration;
  return s;
}

double delta_i(unsigned stage, std::size_t num_models, double delta) {
  const double i = static_cast<double>(stage);
  const double denom =
      std::exp2(i) - (1.0 / static_cast<double>(num_models) + 1.0) * std::exp2(2.0 * i / 3.0) + 4.0;
  if (!(denom > 0.0)) throw ContractError("delta_i: nonpositive denominator");
  const double value = std::exp2(1.0 - i) * delta / denom;
  if (!(value < 1.0)) throw ContractError("delta_i: result not below 1");
  return value;
}

double bound_B(unsigned stage, std::size_t num_models, std::size_t state_count,
               std::size_t action_count, const BlbParams& params) {
  const StageSchedule sched = stage_schedule(stage, num_models);
  const double slot = static_cast<double>(sched.slot);
  const double f = f_value(params, static_cast<double>(sched.length - 1 + sched.exploration));
  const double log_term = std::log(slot / delta_i(stage, num_models, params.delta));
  const double b = params.bound_scale * 34.0 * f * static_cast<double>(state_count) *
                   std::sqrt(static_cast<double>(action_count) * log_term / slot);
  return params.clip_bound_at_one ? std::min(b, 1.0) : b;
}

std::size_t select_model(std::span<const std::size_t> candidates, std::span<const double> means,
                         std::span<const double> bounds) {
  if (candidates.empty()) throw ContractError("select_model: empty candidate set");
  std::size_t best = candidates[0];
  double best_value = means[best] - 2.0 * bounds[best];
  for (std::size_t j : candidates) {
    const double v = means[j] - 2.0 * bounds[j];
    if (v > best_value || (v == best_value && j < best)) {
      best = j;
      best_value = v;
    }
  }
  return best;
}

bool exploitation_test(double run_mean, double explore_mean, double bound) {
  return run_mean >= explore_mean - 2.0 * bound;
}

std::vector<double> RunTrace::rewards() const {
  std::vector<double> r(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) r[k] = steps[k].reward;
  return r;
}

Interaction::Interaction(const Environment& env, Rng rng)
    : env_(&env), rng_(std::move(rng)), history_(env.initial_observation(rng_)) {}

Outcome Interaction::play(ActionId action) {
  const Outcome out = step(*env_, history_, action, rng_);
  history_.append(action, out.reward, out.observation);
  return out;
}

StageSummary run_stage(unsigned stage, Interaction& io, std::span<const RepresentationFn> reps,
                       const BlbParams& params, std::uint64_t remaining, RunTrace& trace) {
  if (reps.empty()) throw ContractError("run_stage: no representations");
  if (remaining < 1) throw ContractError("run_stage: remaining horizon must be >= 1");
  const std::size_t J = reps.size();
  const std::size_t A = io.environment().action_count();

  StageSummary summary;
  summary.schedule = stage_schedule(stage, J);
  summary.delta = delta_i(stage, J, params.delta);
  summary.first_t = io.t();
  summary.bounds.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    summary.bounds[j] = bound_B(stage, J, reps[j].state_count(), A, params);
  }
  summary.explore_means.assign(J, std::nullopt);
  summary.explore_steps.assign(J, 0);
  summary.exploit_steps.assign(J, 0);

  const std::uint64_t budget = std::min(summary.schedule.length, remaining);
  summary.truncated = budget < summary.schedule.length;
  std::uint64_t used = 0;

  auto play = [&](Ucrl2& agent, std::size_t model, Phase phase) {
    const RepresentationFn& rep = reps[model];
    const StateId s = rep.map(io.history());
    const ActionId a = agent.act(s);
    const std::uint64_t t = io.t();
    const Outcome out = io.play(a);
    agent.update(s, a, out.reward, rep.map(io.history()));
    trace.steps.push_back({t, stage, phase, model, s, a, out.reward});
    ++used;
    return out.reward;
  };

  for (std::size_t j = 0; j < J; ++j) {
    const std::uint64_t steps = std::min(summary.schedule.slot, budget - used);
    if (steps == 0) continue;
    Ucrl2 agent(reps[j].state_count(), A, summary.delta);
    double total = 0.0;
    for (std::uint64_t k = 0; k < steps; ++k) total += play(agent, j, Phase::explore);
    summary.explore_steps[j] = steps;
    summary.explore_means[j] = total / static_cast<double>(steps);
  }

  if (used < budget) {
    std::vector<double> means(J);
    for (std::size_t j = 0; j < J; ++j) {
      if (!summary.explore_means[j]) throw ContractError("run_stage: exploitation before exploring");
      means[j] = *summary.explore_means[j];
    }
    std::vector<std::size_t> candidates(J);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});

    while (used < budget) {
      const std::size_t chosen = select_model(candidates, means, summary.bounds);
      summary.selections.push_back({io.t(), chosen});
      Ucrl2 agent(reps[chosen].state_count(), A, summary.delta);
      std::uint64_t run_length = 0;
      double run_total = 0.0;
      while (used < budget) {
        run_total += play(agent, chosen, Phase::exploit);
        ++run_length;
        ++summary.exploit_steps[chosen];
        if (run_length <= summary.schedule.slot) continue;
        const double run_mean = run_total / static_cast<double>(run_length);
        const bool passed = exploitation_test(run_mean, means[chosen], summary.bounds[chosen]);
        const std::uint64_t t = io.t() - 1;
        trace.tests.push_back({t, stage, chosen, run_length, run_mean, means[chosen],
                               summary.bounds[chosen], passed});
        if (passed) continue;
        summary.eliminations.push_back({t, chosen, run_length});
        std::erase(candidates, chosen);
        if (candidates.empty()) {
          summary.resets.push_back(t);
          candidates.resize(J);
          std::iota(candidates.begin(), candidates.end(), std::size_t{0});
        }
        break;
      }
    }
  }
  summary.steps = used;
  return summary;
}

RunTrace run_blb(const Environment& env, std::span<const RepresentationFn> reps,
                 const BlbParams& params, std::uint64_t horizon, Rng rng) {
  if (horizon < 1) throw ContractError("run_blb: horizon must be >= 1");
  if (reps.empty()) throw ContractError("run_blb: no representations");
  params.validate();
  Interaction io(env, std::move(rng));
  RunTrace trace;
  trace.steps.reserve(horizon);
  std::uint64_t consumed = 0;
  for (unsigned stage = 1; consumed < horizon; ++stage) {
    StageSummary summary = run_stage(stage, io, reps, params, horizon - consumed, trace);
    consumed += summary.steps;
    trace.stages.push_back(std::move(summary));
  }
  return trace;
}

unsigned stages_before(std::uint64_t horizon) {
  return static_cast<unsigned>(std::bit_width(horizon + 1) - 1);
}

}  // namespace blb

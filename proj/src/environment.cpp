#include "blb/environment.hpp"

#include <string>

namespace blb {

void History::append(ActionId action, double reward, ObservationId observation) {
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw ContractError("history: reward " + std::to_string(reward) + " outside [0,1]");
  }
  steps_.push_back({action, reward, observation});
}

Outcome step(const Environment& env, const History& history, ActionId action, Rng& rng) {
  if (action >= env.action_count()) {
    throw ContractError("step: action " + std::to_string(action) + " out of range (" +
                        std::to_string(env.action_count()) + " actions)");
  }
  Outcome out = env.sample(history, action, rng);
#ifndef NDEBUG
  if (!(out.reward >= 0.0 && out.reward <= 1.0) || out.observation >= env.observation_count()) {
    throw ContractError("step: environment produced an out-of-range outcome");
  }
#endif
  return out;
}

StateId sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  StateId last_positive = 0;
  for (StateId i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    acc += probabilities[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;  // rounding slack on rows summing to 1 - ulp
}

MdpEnvironment::MdpEnvironment(TabularMDP mdp, unsigned noise_bits, std::uint64_t seed,
                               StateId initial_state)
    : mdp_(std::move(mdp)), noise_bits_(noise_bits), seed_(seed), initial_state_(initial_state) {
  if (noise_bits_ > 16) throw ConfigError("environment.noise_bits: at most 16");
  if (initial_state_ >= mdp_.num_states()) throw ConfigError("environment: bad initial state");
}

std::size_t MdpEnvironment::observation_count() const {
  return mdp_.num_states() << noise_bits_;
}

ObservationId MdpEnvironment::encode(StateId s, Rng& rng) const {
  const std::uint64_t noise = noise_bits_ == 0 ? 0 : rng() >> (64 - noise_bits_);
  return (s << noise_bits_) | noise;
}

ObservationId MdpEnvironment::initial_observation(Rng& rng) const {
  return encode(initial_state_, rng);
}

Outcome MdpEnvironment::sample(const History& history, ActionId action, Rng& rng) const {
  const StateId s = state_of(history.last_observation());
  const double reward = uniform01(rng) < mdp_.reward(s, action) ? 1.0 : 0.0;
  const StateId next = sample_index(mdp_.transition(s, action), rng);
  return {reward, encode(next, rng)};
}

std::unique_ptr<MdpEnvironment> make_mdp_env(TabularMDP mdp, unsigned noise_bits,
                                             std::uint64_t seed) {
  mdp.validate();
  return std::make_unique<MdpEnvironment>(std::move(mdp), noise_bits, seed);
}

}  // namespace blb

#ifndef BLB_ENVIRONMENT_HPP
#define BLB_ENVIRONMENT_HPP

#include <cstdint>
#include <memory>

#include "blb/common.hpp"
#include "blb/history.hpp"
#include "blb/tabular_mdp.hpp"

namespace blb {

struct Outcome {
  double reward;
  ObservationId observation;
};

/// Generative process (history, action) -> (reward, observation).
///
/// Implementations are immutable; all randomness comes from the caller's
/// stream so that one seed fixes a whole interaction.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t observation_count() const = 0;
  virtual std::size_t action_count() const = 0;

  /// Draws o_0 from the initial law.
  virtual ObservationId initial_observation(Rng& rng) const = 0;

  /// Draws (r_t, o_t) given h_{<t} and a_t. `action` is already range-checked.
  virtual Outcome sample(const History& history, ActionId action, Rng& rng) const = 0;

  /// Seed associated with this environment instance by its builder.
  virtual std::uint64_t seed() const { return 0; }
};

/// One interaction step. Throws ContractError on an out-of-range action; in
/// debug builds also checks the sampled reward and observation ranges.
Outcome step(const Environment& env, const History& history, ActionId action, Rng& rng);

/// Environment whose observation packs an MDP state with a uniform noise word:
/// observation = state * 2^noise_bits + noise. Rewards are Bernoulli with the
/// MDP's mean reward. The chain starts in `initial_state`.
class MdpEnvironment final : public Environment {
 public:
  MdpEnvironment(TabularMDP mdp, unsigned noise_bits, std::uint64_t seed,
                 StateId initial_state = 0);

  std::size_t observation_count() const override;
  std::size_t action_count() const override { return mdp_.num_actions(); }
  ObservationId initial_observation(Rng& rng) const override;
  Outcome sample(const History& history, ActionId action, Rng& rng) const override;
  std::uint64_t seed() const override { return seed_; }

  const TabularMDP& mdp() const { return mdp_; }
  unsigned noise_bits() const { return noise_bits_; }

  StateId state_of(ObservationId o) const { return o >> noise_bits_; }
  std::uint64_t noise_of(ObservationId o) const {
    return o & ((std::uint64_t{1} << noise_bits_) - 1);
  }

 private:
  ObservationId encode(StateId s, Rng& rng) const;

  TabularMDP mdp_;
  unsigned noise_bits_;
  std::uint64_t seed_;
  StateId initial_state_;
};

/// Validates the MDP (stochastic rows, weak communication) and builds the
/// noisy environment. noise_bits is capped at 16.
std::unique_ptr<MdpEnvironment> make_mdp_env(TabularMDP mdp, unsigned noise_bits,
                                             std::uint64_t seed);

/// Samples the next state index from a probability row.
StateId sample_index(std::span<const double> probabilities, Rng& rng);

}  // namespace blb

#endif  // BLB_ENVIRONMENT_HPP

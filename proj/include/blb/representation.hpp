#ifndef BLB_REPRESENTATION_HPP
#define BLB_REPRESENTATION_HPP

#include <string>
#include <variant>
#include <vector>

#include "blb/common.hpp"
#include "blb/history.hpp"

namespace blb {

enum class RepresentationKind { last_obs, window_k, partition, constant };

std::string to_string(RepresentationKind kind);

namespace descriptor {
struct LastObs {};
/// Last observation plus the k-1 preceding (observation, action) pairs.
struct Window {
  std::size_t k;
};
/// observation id -> cell id.
struct Partition {
  std::vector<StateId> cells;
};
struct Constant {};
}  // namespace descriptor

using RepresentationDescriptor =
    std::variant<descriptor::LastObs, descriptor::Window, descriptor::Partition,
                 descriptor::Constant>;

/// phi: History -> [0, state_count). Pure and deterministic.
///
/// The window encoding is mixed radix. The most recent observation is the
/// lowest digit (radix O); each older slot holds (observation, action) as
/// o * A + a with the value O * A reserved for "before the start of the
/// history", so the radix of those slots is O * A + 1.
class RepresentationFn {
 public:
  RepresentationKind kind() const { return kind_; }
  std::size_t state_count() const { return state_count_; }
  std::size_t window() const { return window_; }

  /// Ground truth from the experiment builder. Only the regret accountant
  /// reads it; the selection algorithm never does.
  bool is_markov_ground_truth() const { return is_markov_; }
  void set_markov_ground_truth(bool v) { is_markov_ = v; }

  StateId map(const History& history) const;
  StateId operator()(const History& history) const { return map(history); }

 private:
  friend RepresentationFn make_representation(const RepresentationDescriptor&, std::size_t,
                                              std::size_t);

  RepresentationKind kind_ = RepresentationKind::constant;
  std::size_t state_count_ = 1;
  std::size_t observation_count_ = 0;
  std::size_t action_count_ = 0;
  std::size_t window_ = 0;
  std::vector<StateId> cells_;
  bool is_markov_ = false;
};

/// Throws ConfigError for a partition table whose length differs from
/// observation_count, or for window k == 0 / an encoded space that overflows.
RepresentationFn make_representation(const RepresentationDescriptor& descriptor,
                                     std::size_t observation_count, std::size_t action_count);

/// Partition cells for an MdpEnvironment-style observation: keep the MDP
/// state and drop the noise word.
descriptor::Partition state_projection(std::size_t num_states, unsigned noise_bits);
/// Keep only the noise word.
descriptor::Partition noise_projection(std::size_t num_states, unsigned noise_bits);

}  // namespace blb

#endif  // BLB_REPRESENTATION_HPP

#include "blb/representation.hpp"

#include <limits>

namespace blb {

std::string to_string(RepresentationKind kind) {
  switch (kind) {
    case RepresentationKind::last_obs: return "last_obs";
    case RepresentationKind::window_k: return "window";
    case RepresentationKind::partition: return "partition";
    case RepresentationKind::constant: return "constant";
  }
  return "unknown";
}

StateId RepresentationFn::map(const History& history) const {
  switch (kind_) {
    case RepresentationKind::constant:
      return 0;
    case RepresentationKind::last_obs:
      return history.last_observation();
    case RepresentationKind::partition:
      return cells_[history.last_observation()];
    case RepresentationKind::window_k: {
      const auto& steps = history.steps();
      const std::size_t len = steps.size();
      const std::size_t pad = observation_count_ * action_count_;
      StateId code = 0;
      // Oldest slot first so that slot 1 ends up as the lowest pair digit.
      for (std::size_t j = window_ - 1; j >= 1; --j) {
        std::size_t digit = pad;
        if (len >= j) {
          const std::size_t idx = len - j;  // o_{idx} was followed by a_{idx+1}
          const ObservationId o =
              idx == 0 ? history.initial_observation() : steps[idx - 1].observation;
          digit = o * action_count_ + steps[idx].action;
        }
        code = code * (pad + 1) + digit;
      }
      return code * observation_count_ + history.last_observation();
    }
  }
  return 0;
}

RepresentationFn make_representation(const RepresentationDescriptor& descriptor,
                                     std::size_t observation_count, std::size_t action_count) {
  if (observation_count == 0 || action_count == 0) {
    throw ConfigError("representation: environment has no observations or actions");
  }
  RepresentationFn rep;
  rep.observation_count_ = observation_count;
  rep.action_count_ = action_count;
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, descriptor::LastObs>) {
          rep.kind_ = RepresentationKind::last_obs;
          rep.state_count_ = observation_count;
        } else if constexpr (std::is_same_v<D, descriptor::Constant>) {
          rep.kind_ = RepresentationKind::constant;
          rep.state_count_ = 1;
        } else if constexpr (std::is_same_v<D, descriptor::Window>) {
          if (d.k == 0) throw ConfigError("representation.params.k: must be >= 1");
          rep.kind_ = RepresentationKind::window_k;
          rep.window_ = d.k;
          const std::size_t radix = observation_count * action_count + 1;
          std::size_t count = observation_count;
          for (std::size_t j = 1; j < d.k; ++j) {
            if (count > std::numeric_limits<std::size_t>::max() / radix ||
                count * radix > (std::size_t{1} << 32)) {
              throw ConfigError("representation.params.k: encoded window space too large");
            }
            count *= radix;
          }
          rep.state_count_ = count;
        } else {
          if (d.cells.size() != observation_count) {
            throw ConfigError("representation.params.cells: table covers " +
                              std::to_string(d.cells.size()) + " of " +
                              std::to_string(observation_count) + " observation ids");
          }
          rep.kind_ = RepresentationKind::partition;
          rep.cells_ = d.cells;
          StateId max_cell = 0;
          for (StateId c : d.cells) max_cell = std::max(max_cell, c);
          rep.state_count_ = max_cell + 1;
        }
      },
      descriptor);
  return rep;
}

descriptor::Partition state_projection(std::size_t num_states, unsigned noise_bits) {
  descriptor::Partition p;
  p.cells.resize(num_states << noise_bits);
  for (std::size_t o = 0; o < p.cells.size(); ++o) p.cells[o] = o >> noise_bits;
  return p;
}

descriptor::Partition noise_projection(std::size_t num_states, unsigned noise_bits) {
  descriptor::Partition p;
  p.cells.resize(num_states << noise_bits);
  const std::size_t mask = (std::size_t{1} << noise_bits) - 1;
  for (std::size_t o = 0; o < p.cells.size(); ++o) p.cells[o] = o & mask;
  return p;
}

}  // namespace blb

#ifndef BLB_HISTORY_HPP
#define BLB_HISTORY_HPP

#include <vector>

#include "blb/common.hpp"

namespace blb {

struct Step {
  ActionId action;
  double reward;
  ObservationId observation;
};

/// h_{<t}: the first observation followed by t-1 (action, reward, observation) steps.
class History {
 public:
  explicit History(ObservationId initial_observation) : initial_(initial_observation) {}

  ObservationId initial_observation() const { return initial_; }
  const std::vector<Step>& steps() const { return steps_; }
  std::size_t length() const { return steps_.size(); }

  ObservationId last_observation() const {
    return steps_.empty() ? initial_ : steps_.back().observation;
  }

  /// Rewards outside [0,1] throw ContractError.
  void append(ActionId action, double reward, ObservationId observation);

  void reserve(std::size_t n) { steps_.reserve(n); }

  bool operator==(const History&) const = default;

 private:
  ObservationId initial_;
  std::vector<Step> steps_;
};

inline bool operator==(const Step& a, const Step& b) {
  return a.action == b.action && a.reward == b.reward && a.observation == b.observation;
}

}  // namespace blb

#endif  // BLB_HISTORY_HPP

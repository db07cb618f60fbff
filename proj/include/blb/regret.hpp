#ifndef BLB_REGRET_HPP
#define BLB_REGRET_HPP

#include <span>
#include <vector>

#include "blb/selector.hpp"

namespace blb {

/// Cumulative regret Delta(t) = t * rho - sum_{u <= t} r_u for t = 0..T.
/// Entries may be negative on lucky prefixes.
struct RegretReport {
  double rho_star = 0.0;
  std::vector<double> cumulative_reward;  // index t, [0] = 0
  std::vector<double> cumulative_regret;  // index t, [0] = 0

  std::uint64_t horizon() const { return cumulative_regret.size() - 1; }
  double final_regret() const { return cumulative_regret.back(); }
};

/// Throws ContractError for rho outside [0,1].
RegretReport compute_regret(std::span<const double> rewards, double rho_star);
RegretReport compute_regret(const RunTrace& trace, double rho_star);

}  // namespace blb

#endif  // BLB_REGRET_HPP

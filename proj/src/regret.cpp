#include "blb/regret.hpp"

namespace blb {

RegretReport compute_regret(std::span<const double> rewards, double rho_star) {
  if (!(rho_star >= 0.0 && rho_star <= 1.0)) {
    throw ContractError("compute_regret: rho* must lie in [0,1]");
  }
  RegretReport report;
  report.rho_star = rho_star;
  report.cumulative_reward.resize(rewards.size() + 1);
  report.cumulative_regret.resize(rewards.size() + 1);
  report.cumulative_reward[0] = 0.0;
  report.cumulative_regret[0] = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < rewards.size(); ++k) {
    total += rewards[k];
    const double t = static_cast<double>(k + 1);
    report.cumulative_reward[k + 1] = total;
    report.cumulative_regret[k + 1] = t * rho_star - total;
  }
  return report;
}

RegretReport compute_regret(const RunTrace& trace, double rho_star) {
  return compute_regret(trace.rewards(), rho_star);
}

}  // namespace blb

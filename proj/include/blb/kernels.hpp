#ifndef BLB_KERNELS_HPP
#define BLB_KERNELS_HPP

#include <span>

#include "blb/tabular_mdp.hpp"

namespace blb {

/// Selects between the serial reference path and the OpenMP path of a kernel.
/// Both paths compute every output element with the same arithmetic, so their
/// results are bit-identical.
enum class Execution { serial, parallel };

/// Actions whose value is within this distance of the maximum count as ties;
/// ties resolve toward the lowest action id.
inline constexpr double kTieTolerance = 1e-12;

struct SweepIncrement {
  double max;
  double min;
  double span() const { return max - min; }
};

/// One Bellman sweep of the aperiodicity-transformed operator
///   next(s) = max_a [ r(s,a) + mix * P(.|s,a) . u ] + (1 - mix) * u(s),
/// which has the same gain as the original MDP for mix in (0,1]. Writes the
/// greedy action per state and returns the extremes of next - u.
SweepIncrement bellman_sweep_serial(const TabularMDP& mdp, std::span<const double> u,
                                    std::span<double> next, std::span<ActionId> greedy,
                                    double mix);
SweepIncrement bellman_sweep_parallel(const TabularMDP& mdp, std::span<const double> u,
                                      std::span<double> next, std::span<ActionId> greedy,
                                      double mix);
SweepIncrement bellman_sweep(const TabularMDP& mdp, std::span<const double> u,
                             std::span<double> next, std::span<ActionId> greedy, double mix,
                             Execution exec);

/// One sweep of the stochastic-shortest-path operator toward `target`:
///   next(s) = 1 + min_a P(.|s,a) . times, next(target) = 0.
/// Returns max |next - times|.
double hitting_time_sweep(const TabularMDP& mdp, StateId target, std::span<const double> times,
                          std::span<double> next);

}  // namespace blb

#endif  // BLB_KERNELS_HPP

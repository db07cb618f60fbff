#ifndef BLB_COMMON_HPP
#define BLB_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace blb {

using StateId = std::size_t;
using ActionId = std::size_t;
using ObservationId = std::size_t;

/// A caller broke a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad experiment or representation configuration. The message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its sweep cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_span)
      : std::runtime_error(what), span_(achieved_span) {}
  double achieved_span() const { return span_; }

 private:
  double span_;
};

/// The single random stream of a run. mt19937_64 output is fixed by the
/// standard, so traces are reproducible across standard libraries.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

// Uniform on [0,1) with 53 random bits; avoids implementation-defined
// std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace blb

#endif  // BLB_COMMON_HPP

#ifndef BLB_CONFIG_HPP
#define BLB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blb/environment.hpp"
#include "blb/representation.hpp"
#include "blb/selector.hpp"
#include "blb/tabular_mdp.hpp"

namespace blb {

struct EnvironmentConfig {
  std::string kind = "tabular";  // tabular | two_cycle | two_state_example | constant_one | river_swim
  TabularMDP mdp = mdps::constant_one();
  unsigned noise_bits = 0;
  std::uint64_t seed = 0;
};

struct RepresentationConfig {
  std::string kind;  // last_obs | window | partition | constant
  RepresentationDescriptor descriptor;
  bool is_markov = false;
  std::optional<TabularMDP> induced_mdp;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  std::vector<RepresentationConfig> representations;
  BlbParams blb;
  std::uint64_t horizon = 1024;
  std::vector<std::uint64_t> seeds{1};
  OutputConfig output;

  /// Throws ConfigError naming the field.
  void validate() const;
};

/// Keys: environment{kind, transitions, rewards, states, noise_bits, seed},
/// representations[{kind, params, is_markov, induced_mdp}],
/// blb{delta, f_mode, epsilon, bound_scale, clip_bound_at_one},
/// horizon, seeds, output{dir, format}.
///
/// `induced_mdp` is either {transitions, rewards} or the string
/// "environment" for the environment's own MDP. Partition params are
/// {cells: [...]} or {projection: "state" | "noise"}.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

TabularMDP parse_mdp(const nlohmann::json& doc, const std::string& field);

/// Environment, representations and induced MDPs built from a config.
struct Experiment {
  std::unique_ptr<MdpEnvironment> environment;
  std::vector<RepresentationFn> representations;
  std::vector<std::optional<TabularMDP>> induced;
};

Experiment build_experiment(const ExperimentConfig& config);

}  // namespace blb

#endif  // BLB_CONFIG_HPP

#include "blb/config.hpp"

#include <fstream>
#include <sstream>

namespace blb {

using nlohmann::json;

namespace {

template <class T>
T read(const json& obj, const char* key, const std::string& field, T fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field + "." + key + ": wrong type");
  }
}

const json& require(const json& obj, const char* key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(field + "." + key + ": missing");
  }
  return obj.at(key);
}

EnvironmentConfig parse_environment(const json& doc) {
  const std::string field = "environment";
  EnvironmentConfig env;
  env.kind = read<std::string>(doc, "kind", field, "tabular");
  env.noise_bits = read<unsigned>(doc, "noise_bits", field, 0);
  env.seed = read<std::uint64_t>(doc, "seed", field, 0);
  if (env.noise_bits > 16) throw ConfigError("environment.noise_bits: at most 16");
  if (env.kind == "tabular") {
    env.mdp = parse_mdp(doc, field);
  } else if (env.kind == "two_cycle") {
    env.mdp = mdps::two_cycle();
  } else if (env.kind == "two_state_example") {
    env.mdp = mdps::two_state_example();
  } else if (env.kind == "constant_one") {
    env.mdp = mdps::constant_one();
  } else if (env.kind == "river_swim") {
    env.mdp = mdps::river_swim(read<std::size_t>(doc, "states", field, 6));
  } else {
    throw ConfigError("environment.kind: unknown kind '" + env.kind + "'");
  }
  return env;
}

RepresentationConfig parse_representation(const json& doc, std::size_t index,
                                          const EnvironmentConfig& env) {
  const std::string field = "representations[" + std::to_string(index) + "]";
  RepresentationConfig rep;
  rep.kind = read<std::string>(doc, "kind", field, "");
  rep.is_markov = read<bool>(doc, "is_markov", field, false);
  const json params = doc.contains("params") ? doc.at("params") : json::object();
  const std::string pfield = field + ".params";
  const std::size_t S = env.mdp.num_states();
  if (rep.kind == "last_obs") {
    rep.descriptor = descriptor::LastObs{};
  } else if (rep.kind == "constant") {
    rep.descriptor = descriptor::Constant{};
  } else if (rep.kind == "window") {
    rep.descriptor = descriptor::Window{read<std::size_t>(params, "k", pfield, 0)};
    if (std::get<descriptor::Window>(rep.descriptor).k == 0) {
      throw ConfigError(pfield + ".k: must be >= 1");
    }
  } else if (rep.kind == "partition") {
    if (params.contains("cells")) {
      rep.descriptor =
          descriptor::Partition{read<std::vector<StateId>>(params, "cells", pfield, {})};
    } else {
      const auto projection = read<std::string>(params, "projection", pfield, "");
      if (projection == "state") {
        rep.descriptor = state_projection(S, env.noise_bits);
      } else if (projection == "noise") {
        rep.descriptor = noise_projection(S, env.noise_bits);
      } else {
        throw ConfigError(pfield + ": needs cells or projection = state | noise");
      }
    }
  } else {
    throw ConfigError(field + ".kind: unknown kind '" + rep.kind + "'");
  }
  if (doc.contains("induced_mdp")) {
    const json& induced = doc.at("induced_mdp");
    if (induced.is_string()) {
      if (induced.get<std::string>() != "environment") {
        throw ConfigError(field + ".induced_mdp: string form must be \"environment\"");
      }
      rep.induced_mdp = env.mdp;
    } else {
      rep.induced_mdp = parse_mdp(induced, field + ".induced_mdp");
    }
  }
  return rep;
}

BlbParams parse_blb(const json& doc) {
  const std::string field = "blb";
  BlbParams p;
  p.delta = read<double>(doc, "delta", field, p.delta);
  p.epsilon = read<double>(doc, "epsilon", field, p.epsilon);
  p.bound_scale = read<double>(doc, "bound_scale", field, p.bound_scale);
  p.clip_bound_at_one = read<bool>(doc, "clip_bound_at_one", field, p.clip_bound_at_one);
  const auto mode = read<std::string>(doc, "f_mode", field, "log2_plus_one");
  if (mode == "log2_plus_one") {
    p.f_mode = FMode::log2_plus_one;
  } else if (mode == "power") {
    p.f_mode = FMode::power;
  } else {
    throw ConfigError("blb.f_mode: expected log2_plus_one or power");
  }
  return p;
}

}  // namespace

TabularMDP parse_mdp(const json& doc, const std::string& field) {
  using Kernel = std::vector<std::vector<std::vector<double>>>;
  using Table = std::vector<std::vector<double>>;
  Kernel transitions;
  Table rewards;
  try {
    transitions = require(doc, "transitions", field).get<Kernel>();
  } catch (const json::exception&) {
    throw ConfigError(field + ".transitions: expected an S x A x S array of numbers");
  }
  try {
    rewards = require(doc, "rewards", field).get<Table>();
  } catch (const json::exception&) {
    throw ConfigError(field + ".rewards: expected an S x A array of numbers");
  }
  if (transitions.empty()) throw ConfigError(field + ".transitions: empty");
  try {
    return TabularMDP(transitions, rewards);
  } catch (const ConfigError& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

void ExperimentConfig::validate() const {
  try {
    environment.mdp.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("environment: ") + e.what());
  }
  if (representations.empty()) throw ConfigError("representations: at least one required");
  bool any_markov = false;
  for (std::size_t j = 0; j < representations.size(); ++j) {
    const auto& rep = representations[j];
    if (!rep.is_markov) continue;
    any_markov = true;
    if (!rep.induced_mdp) {
      throw ConfigError("representations[" + std::to_string(j) +
                        "].induced_mdp: required for a Markov-flagged representation");
    }
    try {
      rep.induced_mdp->validate();
    } catch (const ConfigError& e) {
      throw ConfigError("representations[" + std::to_string(j) + "].induced_mdp: " + e.what());
    }
  }
  if (!any_markov) {
    throw ConfigError(
        "representations: no representation is flagged is_markov; at least one of the "
        "candidate models must be a Markov model of the environment");
  }
  blb.validate();
  if (horizon < 1) throw ConfigError("horizon: must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds: at least one seed required");
  if (output.format != "csv") throw ConfigError("output.format: only csv is supported");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig config;
  config.environment = parse_environment(require(doc, "environment", "config"));
  const json& reps = require(doc, "representations", "config");
  if (!reps.is_array()) throw ConfigError("representations: expected an array");
  for (std::size_t j = 0; j < reps.size(); ++j) {
    config.representations.push_back(parse_representation(reps[j], j, config.environment));
  }
  if (doc.contains("blb")) config.blb = parse_blb(doc.at("blb"));
  config.horizon = read<std::uint64_t>(doc, "horizon", "config", config.horizon);
  config.seeds = read<std::vector<std::uint64_t>>(doc, "seeds", "config", config.seeds);
  if (doc.contains("output")) {
    const json& out = doc.at("output");
    config.output.dir = read<std::string>(out, "dir", "output", config.output.dir);
    config.output.format = read<std::string>(out, "format", "output", config.output.format);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

Experiment build_experiment(const ExperimentConfig& config) {
  Experiment exp;
  exp.environment = make_mdp_env(config.environment.mdp, config.environment.noise_bits,
                                 config.environment.seed);
  for (std::size_t j = 0; j < config.representations.size(); ++j) {
    const auto& rc = config.representations[j];
    RepresentationFn rep;
    try {
      rep = make_representation(rc.descriptor, exp.environment->observation_count(),
                                exp.environment->action_count());
    } catch (const ConfigError& e) {
      throw ConfigError("representations[" + std::to_string(j) + "]: " + e.what());
    }
    rep.set_markov_ground_truth(rc.is_markov);
    exp.representations.push_back(std::move(rep));
    exp.induced.push_back(rc.induced_mdp);
  }
  return exp;
}

}  // namespace blb

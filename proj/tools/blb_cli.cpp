// Command-line entry point: run, sweep and oracle subcommands over a JSON
// experiment config.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blb/config.hpp"
#include "blb/experiment.hpp"

namespace {

std::vector<std::uint64_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw blb::ConfigError(std::string(flag) + ": bad entry '" + item + "'");
    }
  }
  if (out.empty()) throw blb::ConfigError(std::string(flag) + ": empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-Lower-Bound state-representation selection experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t horizon = 0;
  std::string seeds_text;
  std::string out_dir;
  std::string horizons_text;
  bool serial = false;

  auto* run = app.add_subcommand("run", "Run every seed and write traces, regret and summaries");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--horizon", horizon, "Override the horizon T");
  run->add_option("--seeds", seeds_text, "Override the seed list, e.g. 1,2,3");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_flag("--serial", serial, "Run seeds on one thread");

  auto* sw = app.add_subcommand("sweep", "Final regret over several horizons");
  sw->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sw->add_option("--horizons", horizons_text, "Strictly increasing, e.g. 256,1024,4096")
      ->required();
  sw->add_option("--seeds", seeds_text, "Override the seed list");
  sw->add_option("--out", out_dir, "Override the output directory");
  sw->add_flag("--serial", serial, "Run seeds on one thread");

  auto* oracle = app.add_subcommand("oracle", "Print rho*, optimal policy and diameter");
  oracle->add_option("--config", config_path, "Experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    blb::ExperimentConfig config = blb::load_config(config_path);
    if (horizon > 0) config.horizon = horizon;
    if (!seeds_text.empty()) config.seeds = parse_list(seeds_text, "--seeds");
    if (!out_dir.empty()) config.output.dir = out_dir;
    config.validate();
    const auto exec = serial ? blb::Execution::serial : blb::Execution::parallel;

    if (*oracle) {
      std::cout << blb::oracle_report(config);
    } else if (*run) {
      const auto outcome = blb::run_experiment(config, exec);
      std::cout << "rho* = " << blb::format_double(outcome.rho_star) << " (representation "
                << outcome.best_index << ")\n";
      for (const auto& r : outcome.results) {
        std::cout << "seed " << r.seed << ": regret(T=" << r.regret.horizon()
                  << ") = " << blb::format_double(r.regret.final_regret()) << '\n';
      }
      std::cout << "wrote " << outcome.files.size() << " files to " << config.output.dir << '\n';
    } else if (*sw) {
      const auto horizons = parse_list(horizons_text, "--horizons");
      const auto rows = blb::sweep(config, horizons, exec);
      std::filesystem::create_directories(config.output.dir);
      const auto path = std::filesystem::path(config.output.dir) / "sweep.csv";
      std::ofstream file(path);
      if (!file) throw blb::ConfigError("output.dir: cannot write " + path.string());
      blb::write_sweep_csv(file, rows);
      blb::write_sweep_csv(std::cout, rows);
    }
  } catch (const blb::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

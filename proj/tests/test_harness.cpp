#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blb/config.hpp"
#include "blb/experiment.hpp"
#include "blb/regret.hpp"
#include "trace_checks.hpp"

using namespace blb;
using namespace blb::testing;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("blb_test_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json small_config() {
  return json::parse(R"({
    "environment": {"kind": "two_state_example", "noise_bits": 1, "seed": 4},
    "representations": [
      {"kind": "partition", "params": {"projection": "state"}, "is_markov": true,
       "induced_mdp": "environment"},
      {"kind": "partition", "params": {"projection": "noise"}}
    ],
    "blb": {"delta": 0.1, "bound_scale": 0.01},
    "horizon": 30,
    "seeds": [1]
  })");
}

void check_regret_identity(const RunTrace& trace, const RegretReport& r) {
  REQUIRE(r.cumulative_regret.size() == trace.steps.size() + 1);
  CHECK(r.cumulative_regret[0] == 0.0);
  double sum = 0.0;
  for (std::size_t t = 1; t <= trace.steps.size(); ++t) {
    sum += trace.steps[t - 1].reward;
    REQUIRE(r.cumulative_reward[t] == sum);
    REQUIRE(r.cumulative_regret[t] == static_cast<double>(t) * r.rho_star - sum);
  }
}

}  // namespace

TEST_CASE("compute_regret examples") {
  const std::vector<double> ten{1, 0, 1, 0, 1, 0, 1, 0, 0, 0};
  auto r = compute_regret(ten, 0.5);
  CHECK(r.horizon() == 10);
  CHECK(r.final_regret() == 1.0);

  const std::vector<double> flat(12, 0.25);
  r = compute_regret(flat, 0.25);
  for (double d : r.cumulative_regret) CHECK(d == 0.0);

  const std::vector<double> ones(8, 1.0);
  r = compute_regret(ones, 0.75);
  CHECK(r.final_regret() == -2.0);
  CHECK(r.cumulative_regret[0] == 0.0);

  CHECK_THROWS_AS(compute_regret(ones, 1.5), ContractError);
  CHECK_THROWS_AS(compute_regret(ones, -0.1), ContractError);
}

TEST_CASE("regret identity holds on traces") {
  const auto config = two_rep_noisy(0.01);
  const Experiment e = build_experiment(config);
  const auto results = run_seeds(e, config.blb, 0.75, 3000, std::vector<std::uint64_t>{1, 2, 3});
  for (const auto& r : results) check_regret_identity(r.trace, r.regret);
}

TEST_CASE("csv round trip") {
  const auto config = two_rep_noisy(0.01);
  const Experiment e = build_experiment(config);
  const auto r = run_seed(e, config.blb, 0.75, 1500, 9);

  std::stringstream trace_csv;
  write_trace_csv(trace_csv, r.trace, r.regret);
  std::string header;
  std::getline(std::stringstream(trace_csv.str()), header);
  CHECK(header == "t,stage,phase,model_index,rep_state,action,reward,cum_reward,cum_regret");
  const auto rows = read_trace_csv(trace_csv);
  REQUIRE(rows.size() == r.trace.steps.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    REQUIRE(rows[k].step == r.trace.steps[k]);
    REQUIRE(rows[k].cum_reward == r.regret.cumulative_reward[k + 1]);
    REQUIRE(rows[k].cum_regret == r.regret.cumulative_regret[k + 1]);
  }

  std::stringstream regret_csv;
  write_regret_csv(regret_csv, r.regret);
  const auto back = read_regret_csv(regret_csv, 0.75);
  CHECK(back.cumulative_reward == r.regret.cumulative_reward);
  CHECK(back.cumulative_regret == r.regret.cumulative_regret);

  // awkward doubles survive the text form exactly
  const RegretReport odd = compute_regret(std::vector<double>{0.1, 0.2, 1.0 / 3.0}, 0.7);
  std::stringstream odd_csv;
  write_regret_csv(odd_csv, odd);
  CHECK(read_regret_csv(odd_csv, 0.7).cumulative_regret == odd.cumulative_regret);

  std::stringstream bad("t,x\n1,2\n");
  CHECK_THROWS_AS(read_trace_csv(bad), ConfigError);
}

TEST_CASE("config parsing") {
  const auto config = parse_config(small_config());
  CHECK(config.environment.noise_bits == 1);
  CHECK(config.representations.size() == 2);
  CHECK(config.representations[0].is_markov);
  CHECK(config.blb.bound_scale == 0.01);
  CHECK(config.horizon == 30);

  auto expect_error = [](json doc, const std::string& needle) {
    try {
      parse_config(doc);
      FAIL("expected ConfigError containing " << needle);
    } catch (const ConfigError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  json doc = small_config();
  doc["representations"][0]["is_markov"] = false;
  expect_error(doc, "must be a Markov model");

  doc = small_config();
  doc["representations"][0].erase("induced_mdp");
  expect_error(doc, "representations[0].induced_mdp");

  doc = small_config();
  doc["blb"]["delta"] = 1.5;
  expect_error(doc, "blb.delta");

  doc = small_config();
  doc["blb"]["f_mode"] = "cubic";
  expect_error(doc, "blb.f_mode");

  doc = small_config();
  doc["horizon"] = 0;
  expect_error(doc, "horizon");

  doc = small_config();
  doc["seeds"] = json::array();
  expect_error(doc, "seeds");

  doc = small_config();
  doc["environment"]["kind"] = "maze";
  expect_error(doc, "environment.kind");

  doc = small_config();
  doc["output"] = {{"format", "parquet"}};
  expect_error(doc, "output.format");

  doc = small_config();
  doc["representations"][1] = {{"kind", "window"}, {"params", {{"k", 0}}}};
  expect_error(doc, "representations[1].params.k");

  doc = small_config();
  doc["environment"] = {{"kind", "tabular"},
                        {"transitions", {{{1.0, 0.0}}, {{0.0, 1.0}}}},
                        {"rewards", {{0.0}, {1.0}}}};
  expect_error(doc, "environment");

  doc = small_config();
  doc["environment"] = {{"kind", "tabular"},
                        {"transitions", {{{0.5, 0.6}}, {{0.0, 1.0}}}},
                        {"rewards", {{0.0}, {1.0}}}};
  expect_error(doc, "environment");

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("run_experiment outputs") {
  auto doc = small_config();
  const auto dir = scratch("run");
  doc["output"] = {{"dir", dir.string()}};
  const auto config = parse_config(doc);
  const auto outcome = run_experiment(config);
  CHECK(outcome.rho_star == doctest::Approx(0.75).epsilon(1e-8));
  CHECK(outcome.best_index == 0);

  std::ifstream trace(dir / "trace_seed1.csv");
  REQUIRE(trace.good());
  std::size_t lines = 0;
  for (std::string line; std::getline(trace, line);) ++lines;
  CHECK(lines == 31);
  CHECK(std::filesystem::exists(dir / "regret_seed1.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));

  const json summary = json::parse(slurp(dir / "summary_seed1.json"));
  CHECK(summary["stages"].size() == 4);
  CHECK(summary.contains("tests"));

  std::vector<std::string> first;
  for (const auto& f : outcome.files) first.push_back(slurp(f));
  run_experiment(config);
  for (std::size_t k = 0; k < outcome.files.size(); ++k) {
    CHECK_MESSAGE(slurp(outcome.files[k]) == first[k], outcome.files[k]);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("seed isolation") {
  const auto config = two_rep_noisy(0.01);
  const Experiment e = build_experiment(config);
  const std::vector<std::uint64_t> seeds{5, 1, 9, 2};
  const std::vector<std::uint64_t> permuted{2, 9, 5, 1};
  const auto a = run_seeds(e, config.blb, 0.75, 800, seeds);
  const auto b = run_seeds(e, config.blb, 0.75, 800, permuted);
  for (const auto& x : a) {
    const auto it = std::find_if(b.begin(), b.end(), [&](const auto& y) { return y.seed == x.seed; });
    REQUIRE(it != b.end());
    CHECK(it->trace == x.trace);
    CHECK(it->regret.cumulative_regret == x.regret.cumulative_regret);
  }
  const auto serial = run_seeds(e, config.blb, 0.75, 800, seeds, Execution::serial);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(serial[k].seed == a[k].seed);
    CHECK(serial[k].trace == a[k].trace);
  }
}

TEST_CASE("sweep shape") {
  auto config = two_rep_noisy(0.01);
  config.seeds = {1, 2, 3, 4, 5};
  const std::vector<std::uint64_t> horizons{256, 1024, 4096};
  const auto rows = sweep(config, horizons);
  REQUIRE(rows.size() == 18);
  std::size_t means = 0;
  for (const auto& r : rows) {
    if (!r.seed) ++means;
    const double T = static_cast<double>(r.horizon);
    CHECK(r.regret_per_t == doctest::Approx(r.regret / T));
    CHECK(r.regret_per_t23 == doctest::Approx(r.regret / std::cbrt(T * T)));
  }
  CHECK(means == 3);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  CHECK(csv.str().rfind("horizon,seed,regret,regret_per_t,regret_per_t23\n", 0) == 0);

  const std::vector<std::uint64_t> bad{1024, 256};
  CHECK_THROWS_AS(sweep(config, bad), ConfigError);
}

TEST_CASE("constant environment has zero regret") {
  ExperimentConfig config;
  config.environment.kind = "constant_one";
  config.environment.mdp = mdps::constant_one();
  config.representations = {{"last_obs", descriptor::LastObs{}, true, mdps::constant_one()},
                            {"constant", descriptor::Constant{}, false, std::nullopt}};
  config.seeds = {1, 2, 3};
  const std::vector<std::uint64_t> horizons{16, 64, 256};
  for (const auto& r : sweep(config, horizons)) CHECK(r.regret == 0.0);
}

TEST_CASE("oracle report") {
  const std::string example = oracle_report(two_rep_noisy(0.01));
  CHECK(example.find("rho*     = 0.7499999999") != std::string::npos);
  CHECK(example.find("policy   = [1, 0]") != std::string::npos);
  CHECK(example.find("diameter = 1.24999999999") != std::string::npos);
  CHECK(example.find("induced MDP") != std::string::npos);

  ExperimentConfig cycle;
  cycle.environment.mdp = mdps::two_cycle();
  cycle.representations = {{"last_obs", descriptor::LastObs{}, true, mdps::two_cycle()}};
  const std::string c = oracle_report(cycle);
  CHECK(c.find("rho*     = 0.5\n") != std::string::npos);
  CHECK(c.find("diameter = 1\n") != std::string::npos);

  ExperimentConfig single;
  single.representations = {{"last_obs", descriptor::LastObs{}, true, mdps::constant_one()}};
  const std::string s = oracle_report(single);
  CHECK(s.find("rho*     = 1\n") != std::string::npos);
  CHECK(s.find("diameter = 0\n") != std::string::npos);

  ExperimentConfig broken;
  TabularMDP absorbing({{{1.0, 0.0}}, {{0.5, 0.5}}}, {{0.0}, {1.0}});
  broken.environment.mdp = absorbing;
  broken.representations = {{"last_obs", descriptor::LastObs{}, true, mdps::two_cycle()}};
  try {
    oracle_report(broken);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("state 1 is unreachable from state 0") != std::string::npos);
  }
}

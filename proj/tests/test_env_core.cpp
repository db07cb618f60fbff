#include <doctest.h>

#include <map>
#include <set>

#include "blb/environment.hpp"
#include "blb/representation.hpp"

using namespace blb;

namespace {

std::unique_ptr<MdpEnvironment> cycle_env(unsigned noise = 0) {
  return make_mdp_env(mdps::two_cycle(), noise, 3);
}

// Every history of length <= max_len over the given alphabets, rewards fixed to 0.
std::vector<History> all_histories(std::size_t obs, std::size_t actions, std::size_t max_len) {
  std::vector<History> out, frontier;
  for (ObservationId o = 0; o < obs; ++o) frontier.emplace_back(o);
  for (std::size_t len = 0; len <= max_len; ++len) {
    out.insert(out.end(), frontier.begin(), frontier.end());
    std::vector<History> next;
    for (const History& h : frontier) {
      for (ActionId a = 0; a < actions; ++a) {
        for (ObservationId o = 0; o < obs; ++o) {
          History g = h;
          g.append(a, 0.0, o);
          next.push_back(g);
        }
      }
    }
    frontier.swap(next);
  }
  return out;
}

}  // namespace

TEST_CASE("step on a constant-reward environment always pays 1") {
  auto env = make_mdp_env(mdps::constant_one(), 0, 1);
  Rng rng = make_rng(1);
  History h(env->initial_observation(rng));
  for (int k = 0; k < 100; ++k) {
    const Outcome o = step(*env, h, 0, rng);
    CHECK(o.reward == 1.0);
    CHECK(o.observation < env->observation_count());
    h.append(0, o.reward, o.observation);
  }
}

TEST_CASE("step on the deterministic two-cycle") {
  auto env = cycle_env();
  Rng rng = make_rng(5);
  const Outcome from0 = step(*env, History(0), 0, rng);
  CHECK(from0.reward == 0.0);
  CHECK(from0.observation == 1);
  const Outcome from1 = step(*env, History(1), 0, rng);
  CHECK(from1.reward == 1.0);
  CHECK(from1.observation == 0);
}

TEST_CASE("step rejects an out-of-range action") {
  auto env = cycle_env();
  Rng rng = make_rng(0);
  CHECK_THROWS_AS(step(*env, History(0), 1, rng), ContractError);
}

TEST_CASE("step is reproducible for a fixed seed and prefix") {
  auto env = make_mdp_env(mdps::two_state_example(), 2, 11);
  auto rollout = [&](std::uint64_t seed) {
    Rng rng = make_rng(seed);
    History h(env->initial_observation(rng));
    for (int k = 0; k < 500; ++k) {
      const ActionId a = static_cast<ActionId>(k % 2);
      const Outcome o = step(*env, h, a, rng);
      h.append(a, o.reward, o.observation);
    }
    return h;
  };
  CHECK(rollout(9) == rollout(9));
  CHECK_FALSE(rollout(9) == rollout(10));
}

TEST_CASE("history rejects rewards outside [0,1]") {
  History h(0);
  CHECK_THROWS_AS(h.append(0, 1.5, 0), ContractError);
  CHECK_THROWS_AS(h.append(0, -0.1, 0), ContractError);
  h.append(0, 1.0, 0);
  CHECK(h.length() == 1);
}

TEST_CASE("last_obs and constant representations") {
  auto env = cycle_env(1);
  REQUIRE(env->observation_count() == 4);
  const auto last = make_representation(descriptor::LastObs{}, 4, 1);
  CHECK(last.state_count() == 4);
  History h(2);
  CHECK(last.map(h) == 2);
  h.append(0, 0.0, 3);
  CHECK(last.map(h) == 3);

  const auto constant = make_representation(descriptor::Constant{}, 4, 1);
  CHECK(constant.state_count() == 1);
  CHECK(constant.map(h) == 0);
}

TEST_CASE("window k=2 encoding enumerated over short histories") {
  const std::size_t O = 2, A = 2;
  const auto rep = make_representation(descriptor::Window{2}, O, A);
  // Current observation times (previous (observation, action) pair or pad).
  CHECK(rep.state_count() == (O * A + 1) * O);

  // Window content: (o_{t-1}, optional (o_{t-2}, a_{t-1})).
  std::map<std::tuple<int, int, int>, StateId> seen;
  std::set<StateId> states;
  for (const History& h : all_histories(O, A, 3)) {
    const auto& steps = h.steps();
    const int last = static_cast<int>(h.last_observation());
    int prev_o = -1, prev_a = -1;
    if (!steps.empty()) {
      prev_a = static_cast<int>(steps.back().action);
      prev_o = steps.size() == 1 ? static_cast<int>(h.initial_observation())
                                 : static_cast<int>(steps[steps.size() - 2].observation);
    }
    const StateId s = rep.map(h);
    REQUIRE(s < rep.state_count());
    CHECK(rep.map(h) == s);
    const auto key = std::tuple{last, prev_o, prev_a};
    auto [it, inserted] = seen.emplace(key, s);
    CHECK(it->second == s);  // same window, same state
    states.insert(s);
  }
  // Bijective between window contents and states.
  CHECK(seen.size() == rep.state_count());
  CHECK(states.size() == rep.state_count());
}

TEST_CASE("window k=1 reduces to last_obs") {
  const auto w = make_representation(descriptor::Window{1}, 3, 2);
  CHECK(w.state_count() == 3);
  for (const History& h : all_histories(3, 2, 2)) CHECK(w.map(h) == h.last_observation());
}

TEST_CASE("window k=3 stays in range and distinguishes histories by their window") {
  const std::size_t O = 2, A = 2;
  const auto rep = make_representation(descriptor::Window{3}, O, A);
  CHECK(rep.state_count() == 2 * 5 * 5);
  std::set<StateId> states;
  for (const History& h : all_histories(O, A, 3)) {
    const StateId s = rep.map(h);
    REQUIRE(s < rep.state_count());
    states.insert(s);
  }
  // Length-0: 2, length-1: 2*4, length >= 2: 2*4*4.
  CHECK(states.size() == 2 + 8 + 32);
}

TEST_CASE("partition representation") {
  const auto rep = make_representation(descriptor::Partition{{0, 0, 1, 1}}, 4, 2);
  CHECK(rep.state_count() == 2);
  CHECK(rep.map(History(3)) == 1);
  CHECK_THROWS_AS(make_representation(descriptor::Partition{{0, 1, 0}}, 4, 2), ConfigError);
  CHECK_THROWS_AS(make_representation(descriptor::Window{0}, 4, 2), ConfigError);

  const auto proj = state_projection(2, 1);
  CHECK(proj.cells == std::vector<StateId>{0, 0, 1, 1});
  const auto noise = noise_projection(2, 1);
  CHECK(noise.cells == std::vector<StateId>{0, 1, 0, 1});
}

TEST_CASE("make_mdp_env observation counts") {
  CHECK(cycle_env(0)->observation_count() == 2);
  CHECK(cycle_env(1)->observation_count() == 4);
  CHECK(cycle_env(3)->observation_count() == 16);
  CHECK_THROWS_AS(make_mdp_env(mdps::two_cycle(), 17, 0), ConfigError);
}

TEST_CASE("noisy cycle: state projection is deterministic, noise word is uniform") {
  auto env = cycle_env(1);
  const auto proj = make_representation(state_projection(2, 1), 4, 1);
  Rng rng = make_rng(21);
  History h(env->initial_observation(rng));
  std::size_t noise_ones = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const StateId before = proj.map(h);
    const Outcome o = step(*env, h, 0, rng);
    h.append(0, o.reward, o.observation);
    CHECK(proj.map(h) == 1 - before);
    noise_ones += env->noise_of(o.observation);
  }
  CHECK(static_cast<double>(noise_ones) / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("same seed and action sequence give the same observations") {
  auto env = cycle_env(2);
  auto observations = [&] {
    Rng rng = make_rng(env->seed(), 4);
    History h(env->initial_observation(rng));
    for (int k = 0; k < 200; ++k) {
      const Outcome o = step(*env, h, 0, rng);
      h.append(0, o.reward, o.observation);
    }
    return h;
  };
  CHECK(observations() == observations());
}

TEST_CASE("last_obs rollout frequencies converge to the kernel") {
  const TabularMDP mdp = mdps::two_state_example();
  auto env = make_mdp_env(mdp, 0, 2);
  const auto rep = make_representation(descriptor::LastObs{}, 2, 2);
  Rng rng = make_rng(77);
  Rng policy_rng = make_rng(78);
  History h(env->initial_observation(rng));
  std::vector<double> counts(2 * 2 * 2, 0.0), reward_sum(4, 0.0);
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const StateId s = rep.map(h);
    const ActionId a = policy_rng() & 1;
    const Outcome o = step(*env, h, a, rng);
    REQUIRE(o.reward >= 0.0);
    REQUIRE(o.reward <= 1.0);
    REQUIRE(o.observation < env->observation_count());
    h.append(a, o.reward, o.observation);
    counts[(s * 2 + a) * 2 + rep.map(h)] += 1.0;
    reward_sum[s * 2 + a] += o.reward;
  }
  for (StateId s = 0; s < 2; ++s) {
    for (ActionId a = 0; a < 2; ++a) {
      const double total = counts[(s * 2 + a) * 2] + counts[(s * 2 + a) * 2 + 1];
      REQUIRE(total > 10000);
      for (StateId t = 0; t < 2; ++t) {
        CHECK(std::abs(counts[(s * 2 + a) * 2 + t] / total - mdp.transition(s, a)[t]) < 0.02);
      }
      CHECK(std::abs(reward_sum[s * 2 + a] / total - mdp.reward(s, a)) < 0.02);
    }
  }
}

TEST_CASE("noise-only projection: next-cell law does not depend on the action") {
  auto env = make_mdp_env(mdps::two_state_example(), 1, 8);
  const auto noise = make_representation(noise_projection(2, 1), 4, 2);
  Rng rng = make_rng(31);
  Rng policy_rng = make_rng(32);
  History h(env->initial_observation(rng));
  std::vector<double> ones(4, 0.0), total(4, 0.0);
  for (int k = 0; k < 100000; ++k) {
    const StateId s = noise.map(h);
    const ActionId a = policy_rng() & 1;
    const Outcome o = step(*env, h, a, rng);
    h.append(a, o.reward, o.observation);
    ones[s * 2 + a] += static_cast<double>(noise.map(h));
    total[s * 2 + a] += 1.0;
  }
  for (std::size_t sa = 0; sa < 4; ++sa) CHECK(std::abs(ones[sa] / total[sa] - 0.5) < 0.02);
}

TEST_CASE("tabular MDP validation") {
  CHECK_THROWS_AS(TabularMDP({{{0.5, 0.4}}, {{0.0, 1.0}}}, {{0.0}, {0.0}}), ConfigError);
  CHECK_THROWS_AS(TabularMDP({{{1.0}}}, {{1.5}}), ConfigError);
  // State 1 absorbing: 0 is unreachable from 1.
  const TabularMDP trap({{{0.5, 0.5}}, {{0.0, 1.0}}}, {{0.0}, {1.0}});
  REQUIRE(trap.unreachable_pair().has_value());
  CHECK(trap.unreachable_pair()->first == 1);
  CHECK(trap.unreachable_pair()->second == 0);
  CHECK_THROWS_AS(make_mdp_env(trap, 0, 0), ConfigError);
  CHECK(mdps::two_state_example().weakly_communicating());
  CHECK(mdps::river_swim(6).weakly_communicating());
}

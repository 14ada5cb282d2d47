#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lprc/errors.hpp"
#include "lprc/genbench.hpp"
#include "lprc/oracle.hpp"
#include "support/oracles.hpp"

using namespace lprc;

namespace {

std::vector<int> servable_ods(const Instance& in, int line) {
  std::vector<int> out;
  auto index = build_subpath_index(in);
  for (int o = 0; o < in.num_ods(); ++o)
    if (index.at(o, line)) out.push_back(o);
  return out;
}

}  // namespace

TEST_CASE("k-cover reduction layout") {
  KCoverSpec spec{9, {{0, 2, 8}, {1, 3}}, 1};
  Instance in = gen_kcover_instance(spec);
  CHECK(validate(in).empty());
  std::vector<std::string> visited;
  for (int n : in.lines[0].nodes) visited.push_back(in.network.nodes[n]);
  CHECK(visited == std::vector<std::string>{"o1_1", "o1_2", "o3_1", "o3_2", "o9_1", "o9_2"});
  CHECK(servable_ods(in, 0) == std::vector<int>{0, 2, 8});
  auto index = build_subpath_index(in);
  CHECK(index.at(2, 0) == ArcRange{2, 2});
  CHECK_FALSE(index.at(1, 0).has_value());
  CHECK(in.K == 1);
  CHECK(in.costs.empty());
  CHECK(in.lines.back().is_dummy());
  CHECK_THROWS_AS(gen_kcover_instance({3, {{}}, 1}), PreconditionError);
  CHECK_THROWS_AS(gen_kcover_instance({3, {{0}}, 2}), PreconditionError);
}

TEST_CASE("k-cover oracle equals brute force") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 8; ++t) {
    KCoverSpec spec;
    spec.n = 3 + static_cast<int>(gen() % 5);
    int L = 2 + static_cast<int>(gen() % 3);
    for (int j = 0; j < L; ++j) {
      std::vector<int> g;
      for (int e = 0; e < spec.n; ++e)
        if (gen() % 3 == 0) g.push_back(e);
      if (g.empty()) g.push_back(static_cast<int>(gen() % spec.n));
      spec.sets.push_back(g);
    }
    spec.k = 1 + static_cast<int>(gen() % 2);
    Instance in = gen_kcover_instance(spec);
    for (int j = 0; j < L; ++j) {
      std::vector<int> g = spec.sets[j];
      std::sort(g.begin(), g.end());
      CHECK(servable_ods(in, j) == g);
    }
    CHECK(solve_exact(IndexedInstance(in)).opt_value == lprc::testing::brute_kcover(spec));
  }
}

TEST_CASE("distance reward rule") {
  CHECK(distance_reward(2, 3, 4) == 0);  // D_l = 1.5 D_s exactly
  CHECK(distance_reward(2, 4, 1) == 0);
  CHECK(distance_reward(2, 2, 4) == make_rational(1, 2));
  CHECK(distance_reward(1, 1, 2) == make_rational(3536, 10000));
}

TEST_CASE("random generator: regimes, reproducibility, errors") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomConfig zero = lprc::testing::micro_config(CostRegime::kZero);
    Instance a = gen_random_instance(zero, seed);
    CHECK(a.costs.empty());
    CHECK(save_instance(a) == save_instance(gen_random_instance(zero, seed)));

    RandomConfig small = lprc::testing::micro_config(CostRegime::kSmall, 2);
    small.eta = make_rational(2, 5);
    Instance s = gen_random_instance(small, seed);
    Rational cap = small.eta * small.eta * small.eta / (256 * 8);
    for (const auto& [key, c] : s.costs) CHECK(c <= cap);

    Instance g = gen_random_instance(lprc::testing::micro_config(CostRegime::kGeneral), seed);
    CHECK(validate(g).empty());
  }
  RandomConfig bad = lprc::testing::micro_config(CostRegime::kZero);
  bad.capacities.clear();
  CHECK_THROWS_AS(gen_random_instance(bad, 0), PreconditionError);
  RandomConfig impossible = lprc::testing::micro_config(CostRegime::kZero);
  impossible.grid_width = 2;
  impossible.grid_height = 1;
  impossible.min_line_arcs = 3;
  impossible.max_line_arcs = 3;
  CHECK_THROWS_AS(gen_random_instance(impossible, 0), Error);
}

TEST_CASE("capacities split across the fleet") {
  RandomConfig c = lprc::testing::micro_config(CostRegime::kZero);
  c.buses = 4;
  c.capacities = {25, 30, 35, 40};
  Instance in = gen_random_instance(c, 3);
  for (int b = 0; b < 4; ++b) CHECK(in.buses[b].capacity == 25 + 5 * b);
}

TEST_CASE("run_trials: deterministic plan has zero stderr") {
  KCoverSpec spec{3, {{0, 1, 2}}, 1};
  IndexedInstance in(gen_kcover_instance(spec));
  AlgorithmSpec nc;
  TrialOptions opt;
  opt.trials = 50;
  TrialReport r = run_trials(in, nc, opt);
  CHECK(r.stats.mean == 3.0);
  CHECK(r.stats.stderr_ == 0.0);
  CHECK(r.stats.best == 3.0);
  for (const Trial& t : r.stats.per_trial) CHECK(t.reward == 3);
}

TEST_CASE("run_trials: stats recomputable, parallel equals serial, CSV layout") {
  Instance raw = gen_random_instance(lprc::testing::micro_config(CostRegime::kSmall, 2), 4);
  IndexedInstance in(raw);
  AlgorithmSpec lc;
  lc.kind = AlgorithmSpec::Kind::kLC;
  lc.eta = make_rational(1, 5);
  TrialOptions opt;
  opt.trials = 200;
  opt.base_seed = 17;
  TrialReport serial = run_trials(in, lc, opt);
  opt.jobs = 3;
  TrialReport parallel = run_trials(in, lc, opt);
  CHECK(serial.stats.rewards == parallel.stats.rewards);
  TrialStats copy;
  copy.rewards = serial.stats.rewards;
  compute_stats(copy);
  CHECK(copy.mean == serial.stats.mean);
  CHECK(copy.stderr_ == serial.stats.stderr_);
  CHECK(serial.stats.per_trial[5].seed == 22);
  std::string csv = trials_csv(serial, 2);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "seed,reward,discarded,usage_1,usage_2");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);
}

TEST_CASE("run_trials: NC rejects costs; bounds") {
  Instance raw = gen_random_instance(lprc::testing::micro_config(CostRegime::kGeneral), 2);
  IndexedInstance in(raw);
  AlgorithmSpec nc;
  CHECK_THROWS_AS(run_trials(in, nc, {}), PreconditionError);
  AlgorithmSpec c;
  c.kind = AlgorithmSpec::Kind::kC;
  TrialOptions opt;
  opt.trials = 10;
  opt.opt = Rational(2);
  TrialReport r = run_trials(in, c, opt);
  REQUIRE(r.bound.has_value());
  CHECK(*r.bound == doctest::Approx((0.5 - std::exp(-1.0) / 2 - 0.2) * 2));
  CHECK(parse_algorithm("c-tol") == AlgorithmSpec::Kind::kCTol);
  CHECK_THROWS_AS(parse_algorithm("xyz"), PreconditionError);
}

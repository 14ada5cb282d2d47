// Acceptance suite: one PASS/FAIL line per criterion. Reference values come
// from the brute-force routines in support/oracles.hpp.
//
// Usage: lprc_acceptance [path-to-lprc-cli]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lprc/composite.hpp"
#include "lprc/errors.hpp"
#include "lprc/genbench.hpp"
#include "lprc/oracle.hpp"
#include "lprc/relaxation.hpp"
#include "lprc/report.hpp"
#include "lprc/rounding.hpp"
#include "support/oracles.hpp"

using namespace lprc;
using lprc::testing::Builder;

namespace {

constexpr double kFloatGammaTol = 1e-6;
constexpr double kSigmas = 3.0;
const double kE = std::exp(1.0);

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

int run(int id, const std::string& name, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) out.fail("runtime over " + std::to_string(limit_seconds) + " s");
  std::printf("%s AC%-2d %-34s %8.2fs  %s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.detail.str().c_str());
  std::fflush(stdout);
  return out.pass ? 0 : 1;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Oracle-sized GENERAL instances: three buses on a 3x3 grid.
RandomConfig oracle_config(CostRegime regime, int K) {
  RandomConfig c = lprc::testing::micro_config(regime, K);
  c.buses = 3;
  c.grid_width = 3;
  c.grid_height = 3;
  c.od_pairs = 5;
  return c;
}

// A single line of up to 8 arcs, up to 6 OD pairs along it, demand <= 4,
// capacity <= 5, random rewards and dual prices.
struct PricingCase {
  Instance in;
  int line = 0;
  std::vector<Rational> w;
};

PricingCase random_pricing_case(std::mt19937_64& gen) {
  Builder b;
  int arcs = 1 + static_cast<int>(gen() % 8);
  std::vector<std::string> names;
  for (int i = 0; i <= arcs; ++i) names.push_back("n" + std::to_string(i));
  int line = b.line("L", names);
  b.dummy();
  b.bus("bus", 1 + static_cast<int>(gen() % 5), {0, 1});
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i <= arcs; ++i)
    for (int j = i + 1; j <= arcs; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), gen);
  int ods = std::min<int>(1 + static_cast<int>(gen() % 6), static_cast<int>(pairs.size()));
  PricingCase pc;
  for (int o = 0; o < ods; ++o) {
    int od = b.od(names[pairs[o].first], names[pairs[o].second], 1 + static_cast<int>(gen() % 4));
    long long r = static_cast<long long>(gen() % 13);
    if (r > 0) b.reward(0, line, od, make_rational(r, 4));
    pc.w.push_back(make_rational(static_cast<long long>(gen() % 9), 4));
  }
  pc.in = b.in;
  pc.line = line;
  return pc;
}

std::vector<int> servable_ods(const Instance& in, int line) {
  std::vector<int> out;
  for (int o = 0; o < in.num_ods(); ++o)
    if (lprc::testing::naive_span(in, line, o).first >= 0) out.push_back(o);
  return out;
}

std::string capture(const std::string& command, int* status) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    *status = -1;
    return out;
  }
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  *status = pclose(pipe);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;

  failures += run(1, "pricing integrality & optimality", 30, [](Outcome& out) {
    std::mt19937_64 gen(20240601);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
      PricingCase pc = random_pricing_case(gen);
      IndexedInstance idx(pc.in);
      Rational brute = lprc::testing::brute_pricing(pc.in, 0, pc.line, pc.w);
      std::vector<double> wd;
      for (const Rational& x : pc.w) wd.push_back(to_double(x));
      // solve_pricing raises NumericalError when the basic optimum is not
      // integral within 1e-7.
      if (solve_pricing(idx, 0, pc.line, pc.w).value != brute) out.fail("exact value differs, case " + std::to_string(t));
      if (solve_pricing(idx, 0, pc.line, wd).value != brute) out.fail("float value differs, case " + std::to_string(t));
      ++checked;
    }
    out.detail << checked << " problems matched enumeration exactly";
  });

  failures += run(2, "column generation vs full LP", 120, [](Outcome& out) {
    double worst = 0;
    int n = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      RandomConfig c = lprc::testing::micro_config(seed % 3 == 0 ? CostRegime::kGeneral : CostRegime::kZero,
                                                   1 + static_cast<int>(seed % 2));
      c.buses = 2 + static_cast<int>(seed % 3);
      c.lines = 3 + static_cast<int>(seed % 3);
      c.od_pairs = 4 + static_cast<int>(seed % 3);
      Instance raw = gen_random_instance(c, 1000 + seed);
      IndexedInstance in(raw);
      Rational ref = lprc::testing::full_enumeration_gamma_exact(raw);
      RelaxationOptions exact;
      exact.mode = LpMode::kExact;
      if (solve_relaxation(in, Restriction::full(), exact).gamma_value() != ref)
        out.fail("exact gamma differs, seed " + std::to_string(seed));
      double g = solve_relaxation(in, Restriction::full()).gamma;
      double diff = std::fabs(g - to_double(ref));
      worst = std::max(worst, diff);
      if (diff > kFloatGammaTol) out.fail("float gamma off by " + fmt(diff));
      ++n;
    }
    out.detail << n << " instances, exact equal, worst float gap " << fmt(worst) << " (tol " << kFloatGammaTol << ")";
  });

  // Shared oracle-solved instances for criteria 3, 6 and 7.
  std::vector<Instance> oracle_set;
  std::vector<Rational> oracle_opt;
  double oracle_secs = 0;
  {
    auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      oracle_set.push_back(gen_random_instance(oracle_config(CostRegime::kGeneral, 1 + seed % 2), 5000 + seed));
      oracle_opt.push_back(solve_exact(IndexedInstance(oracle_set.back())).opt_value);
    }
    oracle_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  failures += run(3, "relaxation dominance", 0, [&](Outcome& out) {
    RelaxationOptions exact;
    exact.mode = LpMode::kExact;
    int n = 0;
    auto check = [&](const Instance& raw, const Rational& opt, const std::string& label) {
      Rational g = solve_relaxation(IndexedInstance(raw), Restriction::full(), exact).gamma_value();
      if (g < opt) out.fail(label + ": gamma " + format_rational(g) + " < opt " + format_rational(opt));
      ++n;
    };
    for (size_t i = 0; i < oracle_set.size(); ++i) check(oracle_set[i], oracle_opt[i], "general " + std::to_string(i));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Instance raw = gen_random_instance(lprc::testing::micro_config(CostRegime::kSmall, 1 + seed % 2), 7000 + seed);
      check(raw, solve_exact(IndexedInstance(raw)).opt_value, "small " + std::to_string(seed));
    }
    out.detail << n << " oracle-solved instances (oracle setup " << fmt(oracle_secs) << " s)";
  });

  failures += run(4, "NC bound (zero cost)", 180, [](Outcome& out) {
    double worst_margin = INFINITY;
    long long trials = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Instance raw = gen_random_instance(RandomConfig{}, 100 + seed);
      IndexedInstance in(raw);
      AlgorithmSpec spec;
      spec.kind = AlgorithmSpec::Kind::kNC;
      TrialOptions opt;
      opt.trials = 2000;
      opt.base_seed = seed * 1'000'003;
      TrialReport r = run_trials(in, spec, opt);
      double bound = (1 - 1 / kE) * to_double(r.gamma);
      double margin = r.stats.mean - (bound - kSigmas * r.stats.stderr_);
      worst_margin = std::min(worst_margin, margin);
      if (margin < 0) out.fail("instance " + std::to_string(seed) + " mean " + fmt(r.stats.mean) + " < " + fmt(bound));
      if (r.stats.violations != 0) out.fail("violations on instance " + std::to_string(seed));
      trials += r.stats.trials;
    }
    out.detail << "20 instances, " << trials << " trials, 0 violations, min slack " << fmt(worst_margin);
  });

  failures += run(5, "LC bound (small cost)", 0, [](Outcome& out) {
    std::ostringstream rates;
    double worst_margin = INFINITY;
    int n = 0;
    for (Rational eta : {Rational(1, 5), Rational(2, 5)})
      for (int K : {1, 2}) {
        int discards = 0, trials = 0;
        for (std::uint64_t i = 0; i < 5; ++i) {
          RandomConfig c;
          c.regime = CostRegime::kSmall;
          c.K = K;
          c.eta = eta;
          Instance raw = gen_random_instance(c, 300 + 10 * K + i + (eta == Rational(1, 5) ? 0 : 100));
          IndexedInstance in(raw);
          AlgorithmSpec spec;
          spec.kind = AlgorithmSpec::Kind::kLC;
          spec.eta = eta;
          TrialOptions opt;
          opt.trials = 2000;
          opt.base_seed = 77 + i;
          TrialReport r = run_trials(in, spec, opt);
          double bound = (1 - 1 / kE - to_double(eta)) * to_double(r.gamma);
          double margin = r.stats.mean - (bound - kSigmas * r.stats.stderr_);
          worst_margin = std::min(worst_margin, margin);
          if (margin < 0) out.fail("mean below bound");
          for (const Trial& t : r.stats.per_trial)
            if (!t.discarded)
              for (const Rational& u : t.usage)
                if (u > 1) out.fail("non-discarded trial over budget");
          discards += r.stats.discards;
          trials += r.stats.trials;
          ++n;
        }
        rates << "eta=" << format_rational(eta) << ",K=" << K << ":" << fmt(static_cast<double>(discards) / trials) << " ";
      }
    out.detail << n << " instances, min slack " << fmt(worst_margin) << ", discard rate " << rates.str();
  });

  failures += run(6, "Algorithm C bound + OPT/2 split", 0, [&](Outcome& out) {
    double worst_margin = INFINITY;
    std::ostringstream branches;
    for (size_t i = 0; i < oracle_set.size(); ++i) {
      IndexedInstance in(oracle_set[i]);
      AlgorithmSpec spec;
      spec.kind = AlgorithmSpec::Kind::kC;
      spec.eta = Rational(1, 5);
      spec.options.relaxation.mode = LpMode::kExact;
      TrialOptions opt;
      opt.trials = 2000;
      opt.base_seed = 900 + i;
      opt.opt = oracle_opt[i];
      TrialReport r = run_trials(in, spec, opt);
      const CompositeSetup& s = *r.composite;
      Rational best = std::max(*s.gamma_delta, s.best_value);
      if (2 * best < oracle_opt[i]) out.fail("max(gamma_delta, f(omega*)) < OPT/2 on instance " + std::to_string(i));
      double bound = (0.5 - 1 / (2 * kE) - 0.2) * to_double(oracle_opt[i]);
      double margin = r.stats.mean - (bound - kSigmas * r.stats.stderr_);
      worst_margin = std::min(worst_margin, margin);
      if (margin < 0) out.fail("mean below bound on instance " + std::to_string(i));
      branches << to_string(s.branch)[0];
    }
    out.detail << "10 instances, split inequality exact, min slack " << fmt(worst_margin) << ", branches " << branches.str();
  });

  failures += run(7, "C-Tol bounds + OPT cover", 0, [&](Outcome& out) {
    double worst_margin = INFINITY;
    int runs = 0;
    for (auto [eta, tau] : {std::pair{Rational(1, 5), Rational(1, 10)}, std::pair{Rational(3, 10), Rational(1, 4)}})
      for (size_t i = 0; i < oracle_set.size(); ++i) {
        IndexedInstance in(oracle_set[i]);
        AlgorithmSpec spec;
        spec.kind = AlgorithmSpec::Kind::kCTol;
        spec.eta = eta;
        spec.tau = tau;
        spec.options.relaxation.mode = LpMode::kExact;
        TrialOptions opt;
        opt.trials = 2000;
        opt.base_seed = 4000 + i;
        opt.opt = oracle_opt[i];
        TrialReport r = run_trials(in, spec, opt);
        if (r.composite->best_value < oracle_opt[i]) out.fail("max f < OPT on instance " + std::to_string(i));
        for (const Trial& t : r.stats.per_trial)
          for (const Rational& u : t.usage)
            if (u > 1 + tau) out.fail("usage " + format_rational(u) + " over 1+tau");
        double bound = (1 - 1 / kE - to_double(eta)) * to_double(oracle_opt[i]);
        double margin = r.stats.mean - (bound - kSigmas * r.stats.stderr_);
        worst_margin = std::min(worst_margin, margin);
        if (margin < 0) out.fail("mean below bound on instance " + std::to_string(i));
        ++runs;
      }
    out.detail << runs << " runs, usage within 1+tau, max f >= OPT exact, min slack " << fmt(worst_margin);
  });

  failures += run(8, "k-cover reduction fidelity", 0, [](Outcome& out) {
    std::mt19937_64 gen(8);
    int n_checked = 0;
    for (int t = 0; t < 20; ++t) {
      KCoverSpec spec;
      spec.n = 4 + static_cast<int>(gen() % 9);
      int L = 2 + static_cast<int>(gen() % 7);
      for (int j = 0; j < L; ++j) {
        std::set<int> g;
        int size = 1 + static_cast<int>(gen() % 4);
        while (static_cast<int>(g.size()) < size) g.insert(static_cast<int>(gen() % spec.n));
        spec.sets.emplace_back(g.begin(), g.end());
      }
      spec.k = 1 + static_cast<int>(gen() % std::min(4, L));
      Instance in = gen_kcover_instance(spec);
      for (int j = 0; j < L; ++j)
        if (servable_ods(in, j) != spec.sets[j]) out.fail("servable set differs, spec " + std::to_string(t));
      int brute = lprc::testing::brute_kcover(spec);
      if (solve_exact(IndexedInstance(in)).opt_value != brute) out.fail("opt differs, spec " + std::to_string(t));
      ++n_checked;
    }
    out.detail << n_checked << " specs, servable sets and optima equal";
  });

  failures += run(9, "A_delta enumeration", 0, [](Outcome& out) {
    long long total = 0;
    int n = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      int K = 1 + static_cast<int>(seed % 2);
      Instance raw = gen_random_instance(lprc::testing::micro_config(CostRegime::kGeneral, K), 600 + seed);
      IndexedInstance in(raw);
      Rational delta = seed % 2 == 0 ? Rational(3, 10) : RoundingParams(Rational(1, 5), K).delta();
      auto all = enumerate_a_delta(in, delta);
      if (all.size() != lprc::testing::naive_a_delta_count(raw, delta)) out.fail("count differs, seed " + std::to_string(seed));
      for (const auto& a : all)
        for (const Rational& c : assignment_consumption(in, a.omega))
          if (c > 1) out.fail("infeasible element");
      if (static_cast<long double>(all.size()) > a_delta_size_bound(in, delta)) out.fail("count over bound");
      total += static_cast<long long>(all.size());
      ++n;
    }
    out.detail << n << " instances, " << total << " elements, all feasible and within bound";
  });

  failures += run(10, "determinism & round-trips", 0, [&](Outcome& out) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      RandomConfig c = lprc::testing::micro_config(static_cast<CostRegime>(seed % 3), 1 + seed % 2);
      Instance raw = gen_random_instance(c, 8000 + seed);
      std::string text = save_instance(raw);
      Instance back = load_instance(text);
      if (!(back == raw) || save_instance(back) != text) out.fail("round trip differs, seed " + std::to_string(seed));
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      IndexedInstance in(gen_random_instance(lprc::testing::micro_config(CostRegime::kSmall, 2), 8500 + seed));
      auto plan_text = [&] { return dump(fractional_plan_json(in, solve_relaxation(in, Restriction::full()))); };
      if (plan_text() != plan_text()) out.fail("fractional plan not reproducible");
      AlgorithmSpec spec;
      spec.kind = AlgorithmSpec::Kind::kLC;
      TrialOptions opt;
      opt.trials = 200;
      opt.base_seed = seed;
      std::string a = dump(trial_report_json(in, run_trials(in, spec, opt)));
      opt.jobs = 4;
      std::string b = dump(trial_report_json(in, run_trials(in, spec, opt)));
      if (a != b) out.fail("trial report depends on run or thread count");
      FractionalPlan p = solve_relaxation(in, Restriction::full());
      if (dump(integral_plan_json(in, round_lc(in, p, RoundingParams(Rational(1, 5), 2), nullptr, 42))) !=
          dump(integral_plan_json(in, round_lc(in, p, RoundingParams(Rational(1, 5), 2), nullptr, 42))))
        out.fail("integral plan not reproducible");
    }
    std::string cli_note = "CLI check skipped (no path given)";
    if (!cli.empty()) {
      std::string path = "lprc_acceptance_instance.json";
      FILE* f = std::fopen(path.c_str(), "w");
      std::string text = save_instance(gen_random_instance(RandomConfig{}, 31));
      std::fwrite(text.data(), 1, text.size(), f);
      std::fclose(f);
      std::string cmd = "\"" + cli + "\" round " + path + " --algorithm NC --trials 1 --seed 7";
      int s1 = 0, s2 = 0;
      std::string o1 = capture(cmd, &s1), o2 = capture(cmd, &s2);
      if (s1 != 0 || s2 != 0 || o1.empty() || o1 != o2) out.fail("CLI round output not byte-identical");
      std::remove(path.c_str());
      cli_note = "CLI round output byte-identical";
    }
    out.detail << "100 round trips identical; plans and reports reproducible; " << cli_note;
  });

  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}

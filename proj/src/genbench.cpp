#include "lprc/genbench.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "lprc/errors.hpp"

namespace lprc {

std::vector<std::string> validate_kcover(const KCoverSpec& spec) {
  std::vector<std::string> out;
  if (spec.n < 1) out.push_back("n must be positive");
  if (spec.sets.empty()) out.push_back("the family must contain at least one set");
  for (size_t j = 0; j < spec.sets.size(); ++j) {
    const auto& g = spec.sets[j];
    if (g.empty()) out.push_back("set " + std::to_string(j + 1) + " is empty");
    std::set<int> seen;
    for (int e : g) {
      if (e < 0 || e >= spec.n) out.push_back("set " + std::to_string(j + 1) + " has an element outside [n]");
      if (!seen.insert(e).second) out.push_back("set " + std::to_string(j + 1) + " repeats an element");
    }
  }
  if (spec.k < 1 || spec.k > static_cast<int>(spec.sets.size())) out.push_back("k must lie in [1, L]");
  return out;
}

Instance gen_kcover_instance(const KCoverSpec& spec) {
  if (auto errs = validate_kcover(spec); !errs.empty()) throw PreconditionError("invalid k-cover spec: " + errs[0]);
  Instance in;
  in.K = 1;
  for (int i = 1; i <= spec.n; ++i) {
    in.network.nodes.push_back("o" + std::to_string(i) + "_1");
    in.network.nodes.push_back("o" + std::to_string(i) + "_2");
  }
  auto first = [](int e) { return 2 * e; };
  auto second = [](int e) { return 2 * e + 1; };
  std::map<std::pair<int, int>, int> arc_index;
  auto arc = [&](int tail, int head, const std::string& id) {
    auto [it, fresh] = arc_index.try_emplace({tail, head}, static_cast<int>(in.network.arcs.size()));
    if (fresh) in.network.arcs.push_back({id, tail, head});
    return it->second;
  };
  const int L = static_cast<int>(spec.sets.size());
  for (int j = 0; j < L; ++j) {
    std::vector<int> elems = spec.sets[j];
    std::sort(elems.begin(), elems.end());
    Line line;
    line.id = "G" + std::to_string(j + 1);
    for (size_t t = 0; t < elems.size(); ++t) {
      int e = elems[t];
      if (t > 0)
        line.arcs.push_back(arc(second(elems[t - 1]), first(e),
                                "c" + std::to_string(elems[t - 1] + 1) + "_" + std::to_string(e + 1)));
      line.arcs.push_back(arc(first(e), second(e), "e" + std::to_string(e + 1)));
    }
    line.nodes = in.walk_nodes(line.arcs);
    in.lines.push_back(std::move(line));
  }
  in.lines.push_back({"dummy", {}, {}});
  for (int i = 0; i < spec.n; ++i) in.od_pairs.push_back({first(i), second(i), 1});
  for (int b = 0; b < spec.k; ++b) {
    Bus bus{"bus" + std::to_string(b + 1), 1, {}};
    for (int l = 0; l <= L; ++l) bus.candidate_lines.push_back(l);
    in.buses.push_back(std::move(bus));
    for (int j = 0; j < L; ++j)
      for (int e : spec.sets[j]) in.set_reward(b, j, e, Rational(1));
  }
  return in;
}

const char* to_string(CostRegime regime) {
  switch (regime) {
    case CostRegime::kZero: return "zero";
    case CostRegime::kSmall: return "small";
    case CostRegime::kGeneral: return "general";
  }
  return "?";
}

Rational distance_reward(int shortest, int on_line, int capacity) {
  if (3 * shortest <= 2 * on_line) return Rational(0);
  double v = (1.5 * shortest - on_line) / std::sqrt(static_cast<double>(capacity));
  return round_to_denominator(v, 10000);
}

namespace {

// Portable bounded draw; std distributions differ across standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : gen_(seed) {}
  int below(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }
  double unit() { return unit_uniform(gen_()); }

 private:
  std::mt19937_64 gen_;
};

void check_config(const RandomConfig& c) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw PreconditionError(std::string("random config: ") + what);
  };
  need(c.buses >= 1, "buses must be positive");
  need(c.grid_width >= 1 && c.grid_height >= 1 && c.grid_width * c.grid_height >= 2, "grid needs two nodes");
  need(c.lines >= 1, "lines must be positive");
  need(c.min_line_arcs >= 1 && c.max_line_arcs >= c.min_line_arcs, "bad line length range");
  need(c.od_pairs >= 1, "od_pairs must be positive");
  need(c.min_demand >= 1 && c.max_demand >= c.min_demand, "bad demand range");
  need(!c.capacities.empty(), "capacities must be nonempty");
  for (int cap : c.capacities) need(cap >= 1, "capacities must be positive");
  need(c.K >= 1, "K must be positive");
  need(c.lines_per_bus >= 0, "lines_per_bus must be nonnegative");
  need(c.eta > 0 && c.eta < Rational(1, 2), "eta must lie in (0, 1/2)");
  need(c.free_line_probability >= 0 && c.free_line_probability <= 1, "free_line_probability must lie in [0,1]");
  need(c.max_attempts >= 1, "max_attempts must be positive");
}

std::optional<Instance> attempt(const RandomConfig& c, Draw& draw) {
  const int W = c.grid_width, H = c.grid_height, V = W * H;
  Instance in;
  in.K = c.K;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) in.network.nodes.push_back("n" + std::to_string(x) + "_" + std::to_string(y));
  auto neighbours = [&](int v) {
    std::vector<int> out;
    int x = v % W, y = v / W;
    if (x + 1 < W) out.push_back(v + 1);
    if (x > 0) out.push_back(v - 1);
    if (y + 1 < H) out.push_back(v + W);
    if (y > 0) out.push_back(v - W);
    return out;
  };

  std::map<std::pair<int, int>, int> arc_index;
  for (int l = 0; l < c.lines; ++l) {
    std::vector<int> walk;
    for (int tries = 0; tries < 100 && static_cast<int>(walk.size()) <= c.min_line_arcs; ++tries) {
      int target = c.min_line_arcs + draw.below(c.max_line_arcs - c.min_line_arcs + 1);
      walk = {draw.below(V)};
      std::set<int> visited{walk[0]};
      while (static_cast<int>(walk.size()) <= target) {
        std::vector<int> open;
        for (int n : neighbours(walk.back()))
          if (!visited.count(n)) open.push_back(n);
        if (open.empty()) break;
        int next = open[draw.below(static_cast<int>(open.size()))];
        visited.insert(next);
        walk.push_back(next);
      }
    }
    if (static_cast<int>(walk.size()) <= c.min_line_arcs) return std::nullopt;
    Line line;
    line.id = "L" + std::to_string(l + 1);
    for (size_t t = 0; t + 1 < walk.size(); ++t) {
      auto [it, fresh] = arc_index.try_emplace({walk[t], walk[t + 1]}, static_cast<int>(in.network.arcs.size()));
      if (fresh)
        in.network.arcs.push_back({"a" + std::to_string(in.network.arcs.size() + 1), walk[t], walk[t + 1]});
      line.arcs.push_back(it->second);
    }
    line.nodes = walk;
    in.lines.push_back(std::move(line));
  }
  const int L = c.lines;
  in.lines.push_back({"dummy", {}, {}});

  // Shortest directed distances in arc counts.
  std::vector<std::vector<int>> dist(V, std::vector<int>(V, -1));
  std::vector<std::vector<int>> out(V);
  for (const Arc& a : in.network.arcs) out[a.tail].push_back(a.head);
  for (int s = 0; s < V; ++s) {
    std::queue<int> q;
    dist[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : out[u])
        if (dist[s][v] < 0) {
          dist[s][v] = dist[s][u] + 1;
          q.push(v);
        }
    }
  }

  std::set<std::pair<int, int>> servable_set;
  for (int l = 0; l < L; ++l) {
    const auto& nodes = in.lines[l].nodes;
    for (size_t p = 0; p < nodes.size(); ++p)
      for (size_t r = p + 1; r < nodes.size(); ++r) servable_set.insert({nodes[p], nodes[r]});
  }
  std::vector<std::pair<int, int>> servable(servable_set.begin(), servable_set.end());
  if (servable.empty()) return std::nullopt;
  int count = std::min<int>(c.od_pairs, static_cast<int>(servable.size()));
  for (int i = 0; i < count; ++i) {
    int j = i + draw.below(static_cast<int>(servable.size()) - i);
    std::swap(servable[i], servable[j]);
    in.od_pairs.push_back(
        {servable[i].first, servable[i].second, c.min_demand + draw.below(c.max_demand - c.min_demand + 1)});
  }

  const int caps = static_cast<int>(c.capacities.size());
  for (int b = 0; b < c.buses; ++b) {
    Bus bus{"bus" + std::to_string(b + 1), c.capacities[static_cast<size_t>(b) * caps / c.buses], {}};
    std::vector<int> pool(L);
    for (int l = 0; l < L; ++l) pool[l] = l;
    int take = (c.lines_per_bus == 0 || c.lines_per_bus >= L) ? L : c.lines_per_bus;
    for (int i = 0; i < take; ++i) std::swap(pool[i], pool[i + draw.below(L - i)]);
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
    pool.push_back(L);
    bus.candidate_lines = pool;
    in.buses.push_back(std::move(bus));
  }

  for (int b = 0; b < c.buses; ++b)
    for (int l : in.buses[b].candidate_lines) {
      if (l == L) continue;
      for (int o = 0; o < in.num_ods(); ++o) {
        const OdPair& od = in.od_pairs[o];
        auto range = find_subpath(in.lines[l].nodes, od.origin, od.destination);
        if (!range) continue;
        in.set_reward(b, l, o,
                      distance_reward(dist[od.origin][od.destination], range->last - range->first + 1,
                                      in.buses[b].capacity));
      }
    }

  const Rational small_cap = c.eta * c.eta * c.eta / (256 * Rational(c.K) * c.K * c.K);
  for (int b = 0; b < c.buses; ++b)
    for (int l : in.buses[b].candidate_lines) {
      if (l == L) continue;
      switch (c.regime) {
        case CostRegime::kZero:
          break;
        case CostRegime::kSmall:
          for (int k = 0; k < c.K; ++k) in.set_cost(b, l, k, small_cap * draw.below(101) / 100);
          break;
        case CostRegime::kGeneral:
          if (draw.unit() < c.free_line_probability) break;
          for (int k = 0; k < c.K; ++k) in.set_cost(b, l, k, make_rational(10 + draw.below(61), 100));
          break;
      }
    }
  return in;
}

}  // namespace

Instance gen_random_instance(const RandomConfig& config, std::uint64_t seed) {
  check_config(config);
  Draw draw(seed);
  for (int a = 0; a < config.max_attempts; ++a) {
    if (auto in = attempt(config, draw)) {
      auto violations = validate(*in);
      if (!violations.empty()) throw Error("generator produced an invalid instance: " + violations[0].message);
      return *in;
    }
  }
  throw Error("random config is unsatisfiable: no usable lines or servable OD pairs after " +
              std::to_string(config.max_attempts) + " attempts");
}

const char* to_string(AlgorithmSpec::Kind kind) {
  switch (kind) {
    case AlgorithmSpec::Kind::kNC: return "NC";
    case AlgorithmSpec::Kind::kLC: return "LC";
    case AlgorithmSpec::Kind::kC: return "C";
    case AlgorithmSpec::Kind::kCTol: return "C-Tol";
  }
  return "?";
}

AlgorithmSpec::Kind parse_algorithm(const std::string& name) {
  std::string s;
  for (char ch : name) s += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (s == "NC") return AlgorithmSpec::Kind::kNC;
  if (s == "LC") return AlgorithmSpec::Kind::kLC;
  if (s == "C") return AlgorithmSpec::Kind::kC;
  if (s == "C-TOL" || s == "CTOL") return AlgorithmSpec::Kind::kCTol;
  throw PreconditionError("unknown algorithm '" + name + "' (expected NC, LC, C or C-Tol)");
}

void compute_stats(TrialStats& s) {
  s.trials = static_cast<int>(s.rewards.size());
  s.mean = s.stderr_ = s.best = 0.0;
  if (s.rewards.empty()) return;
  double sum = 0.0;
  for (double r : s.rewards) sum += r;
  s.mean = sum / s.trials;
  s.best = *std::max_element(s.rewards.begin(), s.rewards.end());
  if (s.trials > 1) {
    double sq = 0.0;
    for (double r : s.rewards) sq += (r - s.mean) * (r - s.mean);
    s.stderr_ = std::sqrt(sq / (s.trials - 1) / s.trials);
  }
}

TrialReport run_trials(const IndexedInstance& in, const AlgorithmSpec& algo, const TrialOptions& opt) {
  if (opt.trials < 1) throw PreconditionError("trials must be at least 1");
  if (opt.jobs < 1) throw PreconditionError("jobs must be at least 1");
  using Kind = AlgorithmSpec::Kind;
  TrialReport report;
  report.algorithm = algo;
  report.base_seed = opt.base_seed;
  report.opt = opt.opt;
  report.audit_budget = Rational(1);
  const double e_inv = std::exp(-1.0);
  const double eta = to_double(algo.eta);

  FractionalPlan plan;
  std::optional<RoundingParams> params;
  switch (algo.kind) {
    case Kind::kNC:
      if (!in.instance().costs.empty()) throw PreconditionError("NC requires an instance with all costs zero");
      plan = solve_relaxation(in, Restriction::full(), algo.options.relaxation);
      report.gamma = plan.gamma_value();
      report.bound = (1 - e_inv) * to_double(report.gamma);
      report.bound_label = "(1-1/e)*Gamma";
      break;
    case Kind::kLC:
      params.emplace(algo.eta, in.K());
      plan = solve_relaxation(in, Restriction::full(), algo.options.relaxation);
      report.gamma = plan.gamma_value();
      report.bound = (1 - e_inv - eta) * to_double(report.gamma);
      report.bound_label = "(1-1/e-eta)*Gamma";
      break;
    case Kind::kC:
      report.composite = prepare_algorithm_c(in, algo.eta, algo.options);
      report.gamma = report.composite->plan.gamma_value();
      report.bound_label = "(1/2-1/(2e)-eta)*OPT";
      if (opt.opt) report.bound = (0.5 - e_inv / 2 - eta) * to_double(*opt.opt);
      break;
    case Kind::kCTol:
      report.composite = prepare_algorithm_c_tol(in, algo.eta, algo.tau, algo.options);
      report.gamma = report.composite->plan.gamma_value();
      report.audit_budget = 1 + algo.tau;
      report.bound_label = "(1-1/e-eta)*OPT";
      if (opt.opt) report.bound = (1 - e_inv - eta) * to_double(*opt.opt);
      break;
  }

  auto run_one = [&](std::uint64_t seed) {
    switch (algo.kind) {
      case Kind::kNC: return round_nc(in, plan, seed);
      case Kind::kLC: return round_lc(in, plan, *params, nullptr, seed);
      default: return round_composite(in, *report.composite, seed);
    }
  };

  std::vector<Trial> trials(opt.trials);
  auto work = [&](int start, int stride) {
    for (int i = start; i < opt.trials; i += stride) {
      std::uint64_t seed = opt.base_seed + static_cast<std::uint64_t>(i);
      IntegralPlan p = run_one(seed);
      FeasibilityReport audit = check_feasibility(p, in.instance(), report.audit_budget);
      if (!audit.feasible())
        throw AuditFailure(std::string(to_string(algo.kind)) + " trial with seed " + std::to_string(seed) +
                           " produced an infeasible plan: " + audit.violations[0]);
      trials[i] = {seed, p.reward, p.discarded, p.usage};
    }
  };
  int jobs = std::min(opt.jobs, opt.trials);
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, jobs);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  TrialStats& s = report.stats;
  for (const Trial& t : trials) {
    s.rewards.push_back(to_double(t.reward));
    if (t.discarded) ++s.discards;
  }
  s.per_trial = std::move(trials);
  compute_stats(s);
  return report;
}

std::string trials_csv(const TrialReport& report, int K) {
  std::ostringstream out;
  out << "seed,reward,discarded";
  for (int k = 1; k <= K; ++k) out << ",usage_" << k;
  out << "\n";
  for (const Trial& t : report.stats.per_trial) {
    out << t.seed << "," << format_rational(t.reward) << "," << (t.discarded ? 1 : 0);
    for (const Rational& u : t.usage) out << "," << format_rational(u);
    out << "\n";
  }
  return out.str();
}

}  // namespace lprc

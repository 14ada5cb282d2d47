#include "lprc/oracle.hpp"

#include <algorithm>
#include <limits>

#include "lprc/errors.hpp"

namespace lprc {

namespace {

// Rewards scaled by the lcm of their denominators so the search runs on
// 64-bit integers.
struct Scale {
  Integer lcm = 1;
  std::int64_t scaled(const Rational& r) const {
    Integer n = numerator(r) * (lcm / denominator(r));
    return n.convert_to<std::int64_t>();
  }
  Rational unscale(std::int64_t v) const { return Rational(Integer(v), lcm); }
};

Scale make_scale(const IndexedInstance& in) {
  Scale s;
  long long demand = 0;
  for (const OdPair& od : in.instance().od_pairs) demand += od.demand;
  Rational max_reward = 0;
  for (const auto& [key, value] : in.instance().rewards) {
    s.lcm = boost::multiprecision::lcm(s.lcm, denominator(value));
    max_reward = std::max(max_reward, value);
  }
  Rational total = max_reward * Rational(s.lcm) * (demand + 1);
  if (total > Rational(std::numeric_limits<std::int64_t>::max() / 4))
    throw LimitExceeded("reward values too large for the exact search");
  return s;
}

struct Var {
  int bus;
  int od;
  ArcRange range;
  std::int64_t value;
};

class AllocationSearch {
 public:
  AllocationSearch(const IndexedInstance& in, const std::vector<int>& assignment, const Scale& scale,
                   const OracleLimits& limits)
      : in_(in), limits_(limits) {
    const int M = in.num_buses(), N = in.num_ods();
    residual_.resize(M);
    for (int b = 0; b < M; ++b) {
      const Candidate& c = in.candidate(b, assignment[b]);
      residual_[b].assign(in.instance().lines[c.line].arcs.size(), in.instance().buses[b].capacity);
    }
    std::vector<std::vector<Var>> by_od(N);
    for (int b = 0; b < M; ++b)
      for (const ServedOd& s : in.candidate(b, assignment[b]).served)
        if (s.reward > 0) by_od[s.od].push_back({b, s.od, s.range, scale.scaled(s.reward)});
    std::vector<int> order;
    for (int o = 0; o < N; ++o) {
      if (by_od[o].empty()) continue;
      std::stable_sort(by_od[o].begin(), by_od[o].end(),
                       [](const Var& a, const Var& b) { return a.value > b.value; });
      order.push_back(o);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return by_od[a][0].value > by_od[b][0].value; });
    for (int o : order) {
      group_start_.push_back(static_cast<int>(vars_.size()));
      for (const Var& v : by_od[o]) {
        vars_.push_back(v);
        group_.push_back(static_cast<int>(group_start_.size()) - 1);
      }
    }
    suffix_.assign(order.size() + 1, 0);
    for (int g = static_cast<int>(order.size()) - 1; g >= 0; --g)
      suffix_[g] = suffix_[g + 1] + in.instance().od_pairs[order[g]].demand * by_od[order[g]][0].value;
    remaining_.resize(N);
    for (int o = 0; o < N; ++o) remaining_[o] = in.instance().od_pairs[o].demand;
    amount_.assign(vars_.size(), 0);
  }

  /// Optimistic value: every servable OD at full demand and its best reward.
  std::int64_t upper_bound() const { return suffix_.empty() ? 0 : suffix_[0]; }

  /// Searches for a value strictly above `floor`; returns whether found.
  bool run(std::int64_t floor) {
    best_ = floor;
    found_ = false;
    dfs(0, 0);
    return found_;
  }

  std::int64_t best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

  std::vector<Allocation> best_xi() const {
    std::vector<Allocation> xi;
    for (size_t i = 0; i < vars_.size(); ++i)
      if (best_amount_[i] > 0) xi.push_back({vars_[i].bus, vars_[i].od, best_amount_[i]});
    std::sort(xi.begin(), xi.end(),
              [](const Allocation& a, const Allocation& b) { return std::tie(a.bus, a.od) < std::tie(b.bus, b.od); });
    return xi;
  }

 private:
  void dfs(size_t i, std::int64_t current) {
    if (++nodes_ > limits_.max_allocation_nodes)
      throw LimitExceeded("allocation search exceeded " + std::to_string(limits_.max_allocation_nodes) + " nodes");
    if (i == vars_.size()) {
      if (current > best_) {
        best_ = current;
        best_amount_ = amount_;
        found_ = true;
      }
      return;
    }
    const Var& v = vars_[i];
    const int g = group_[i];
    if (limits_.prune && current + remaining_[v.od] * v.value + suffix_[g + 1] <= best_) return;
    auto& res = residual_[v.bus];
    int most = remaining_[v.od];
    for (int e = v.range.first; e <= v.range.last; ++e) most = std::min(most, res[e]);
    for (int a = most; a >= 0; --a) {
      for (int e = v.range.first; e <= v.range.last; ++e) res[e] -= a;
      remaining_[v.od] -= a;
      amount_[i] = a;
      dfs(i + 1, current + a * v.value);
      amount_[i] = 0;
      remaining_[v.od] += a;
      for (int e = v.range.first; e <= v.range.last; ++e) res[e] += a;
    }
  }

  const IndexedInstance& in_;
  OracleLimits limits_;
  std::vector<Var> vars_;
  std::vector<int> group_, group_start_;
  std::vector<std::int64_t> suffix_;
  std::vector<std::vector<int>> residual_;
  std::vector<int> remaining_;
  std::vector<int> amount_, best_amount_;
  std::int64_t best_ = -1;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

std::vector<Rational> usage_of(const IndexedInstance& in, const std::vector<int>& assignment) {
  std::vector<Rational> usage(in.K());
  for (int b = 0; b < in.num_buses(); ++b) {
    const Candidate& c = in.candidate(b, assignment[b]);
    for (int k = 0; k < in.K(); ++k) usage[k] += c.cost[k];
  }
  return usage;
}

}  // namespace

AllocationResult solve_allocation_exact(const IndexedInstance& in, const std::vector<int>& assignment,
                                        const OracleLimits& limits) {
  if (static_cast<int>(assignment.size()) != in.num_buses())
    throw PreconditionError("assignment must list one line per bus");
  for (int b = 0; b < in.num_buses(); ++b)
    if (!in.find(b, assignment[b])) throw PreconditionError("assignment uses a line outside a candidate set");
  for (const Rational& u : usage_of(in, assignment))
    if (u > 1) throw PreconditionError("assignment exceeds a resource budget");
  Scale scale = make_scale(in);
  AllocationSearch search(in, assignment, scale, limits);
  search.run(-1);
  return {scale.unscale(search.best()), search.best_xi(), search.nodes()};
}

OracleResult solve_exact(const IndexedInstance& in, const OracleLimits& limits) {
  const int M = in.num_buses(), K = in.K();
  std::uint64_t product = 1;
  for (int b = 0; b < M; ++b) {
    std::uint64_t n = in.candidates(b).size();
    if (n != 0 && product > limits.max_line_assignments / n)
      throw LimitExceeded("more than " + std::to_string(limits.max_line_assignments) + " line assignments");
    product *= n;
  }
  Scale scale = make_scale(in);

  OracleResult result;
  std::int64_t best = -1;
  std::vector<int> assignment(M);
  std::vector<Rational> consumption(K);

  auto leaf = [&] {
    ++result.stats.assignments;
    AllocationSearch search(in, assignment, scale, limits);
    if (limits.prune && search.upper_bound() <= best) return;
    bool improved = search.run(limits.prune ? best : -1);
    result.stats.nodes += search.nodes();
    if (improved && search.best() > best) {
      best = search.best();
      result.plan.assignment = assignment;
      result.plan.xi = search.best_xi();
    }
  };
  auto dfs = [&](auto&& self, int b) -> void {
    if (b == M) {
      leaf();
      return;
    }
    for (const Candidate& c : in.candidates(b)) {
      bool fits = true;
      for (int k = 0; k < K && fits; ++k) fits = consumption[k] + c.cost[k] <= 1;
      if (!fits) continue;
      for (int k = 0; k < K; ++k) consumption[k] += c.cost[k];
      assignment[b] = c.line;
      self(self, b + 1);
      for (int k = 0; k < K; ++k) consumption[k] -= c.cost[k];
    }
  };
  dfs(dfs, 0);
  if (best < 0) throw PreconditionError("no resource-feasible line assignment exists");

  result.opt_value = scale.unscale(best);
  result.plan.reward = result.opt_value;
  result.plan.usage = usage_of(in, result.plan.assignment);
  return result;
}

}  // namespace lprc

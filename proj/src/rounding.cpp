#include "lprc/rounding.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "lprc/errors.hpp"

namespace lprc {

RoundingParams::RoundingParams(Rational eta, int K) : eta_(std::move(eta)), K_(K) {
  if (eta_ <= 0 || eta_ >= Rational(1, 2)) throw PreconditionError("eta must lie in (0, 1/2)");
  if (K_ < 1) throw PreconditionError("K must be at least 1");
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

IntegralPlan empty_plan(const IndexedInstance& in) {
  IntegralPlan plan;
  for (int b = 0; b < in.num_buses(); ++b) plan.assignment.push_back(in.dummy_line(b));
  plan.usage.assign(in.K(), Rational(0));
  return plan;
}

namespace {

struct Sampled {
  const Column* column = nullptr;  // nullptr: dummy line
};

std::vector<std::vector<const PlanColumn*>> group_by_bus(const IndexedInstance& in, const FractionalPlan& plan) {
  std::vector<std::vector<const PlanColumn*>> by_bus(in.num_buses());
  for (const PlanColumn& pc : plan.columns) by_bus.at(pc.column.bus).push_back(&pc);
  return by_bus;
}

// One 64-bit draw per bus, in bus order. `scale` thins every probability.
std::vector<Sampled> sample(const IndexedInstance& in, const FractionalPlan& plan, double scale,
                            bool always_pick, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto by_bus = group_by_bus(in, plan);
  std::vector<Sampled> out(in.num_buses());
  for (int b = 0; b < in.num_buses(); ++b) {
    double u = unit_uniform(gen());
    const auto& cols = by_bus[b];
    double cum = 0.0;
    for (const PlanColumn* pc : cols) {
      cum += scale * pc->weight;
      if (u < cum) {
        out[b].column = &pc->column;
        break;
      }
    }
    if (!out[b].column && always_pick && !cols.empty()) out[b].column = &cols.back()->column;
  }
  return out;
}

IntegralPlan allocate(const IndexedInstance& in, const std::vector<Sampled>& picks, std::uint64_t seed) {
  IntegralPlan plan;
  plan.seed = seed;
  plan.assignment.resize(in.num_buses());
  plan.usage.assign(in.K(), Rational(0));
  struct Claim {
    const Rational* reward;
    int bus;
    int amount;
  };
  std::vector<std::vector<Claim>> claims(in.num_ods());
  for (int b = 0; b < in.num_buses(); ++b) {
    const Column* c = picks[b].column;
    int line = c ? c->line : in.dummy_line(b);
    plan.assignment[b] = line;
    const Candidate& cand = in.candidate(b, line);
    for (int k = 0; k < in.K(); ++k) plan.usage[k] += cand.cost[k];
    if (!c) continue;
    for (const auto& [od, amount] : c->theta) claims[od].push_back({&cand.find_served(od)->reward, b, amount});
  }
  for (int od = 0; od < in.num_ods(); ++od) {
    auto& list = claims[od];
    std::sort(list.begin(), list.end(), [](const Claim& a, const Claim& b) {
      if (*a.reward != *b.reward) return *a.reward > *b.reward;
      return a.bus < b.bus;
    });
    int remaining = in.instance().od_pairs[od].demand;
    for (const Claim& cl : list) {
      if (remaining == 0) break;
      int take = std::min(cl.amount, remaining);
      remaining -= take;
      plan.xi.push_back({cl.bus, od, take});
      plan.reward += *cl.reward * take;
    }
  }
  std::sort(plan.xi.begin(), plan.xi.end(),
            [](const Allocation& a, const Allocation& b) { return std::tie(a.bus, a.od) < std::tie(b.bus, b.od); });
  return plan;
}

}  // namespace

IntegralPlan round_nc(const IndexedInstance& in, const FractionalPlan& plan, std::uint64_t seed) {
  return allocate(in, sample(in, plan, 1.0, /*always_pick=*/true, seed), seed);
}

IntegralPlan round_lc(const IndexedInstance& in, const FractionalPlan& plan, const RoundingParams& params,
                      const CostOverlay* overlay, std::uint64_t seed) {
  if (params.K() != in.K()) throw PreconditionError("rounding parameters were built for a different K");
  const Rational ceiling = params.delta();
  auto cost_of = [&](const Column& c) -> const std::vector<Rational>& {
    return overlay ? overlay->at(c.bus, c.line) : c.cost;
  };
  for (const PlanColumn& pc : plan.columns) {
    if (pc.weight <= 0) continue;
    for (const Rational& c : cost_of(pc.column))
      if (c > ceiling)
        throw PreconditionError("line '" + in.instance().lines[pc.column.line].id + "' of bus '" +
                                in.instance().buses[pc.column.bus].id +
                                "' has a cost above eta^3/(256K^3); LC does not apply");
  }
  const double thin = 1.0 - to_double(params.epsilon());
  std::vector<Sampled> picks = sample(in, plan, thin, /*always_pick=*/false, seed);
  IntegralPlan result = allocate(in, picks, seed);

  std::vector<Rational> effective(in.K());
  for (const Sampled& s : picks)
    if (s.column)
      for (int k = 0; k < in.K(); ++k) effective[k] += cost_of(*s.column)[k];
  for (const Rational& e : effective)
    if (e > 1) {
      IntegralPlan discarded = empty_plan(in);
      discarded.discarded = true;
      discarded.seed = seed;
      return discarded;
    }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

// Arc positions [first, last] of the first origin visit and the first later
// destination visit; kept separate from the index used by the solvers.
std::optional<std::pair<int, int>> served_span(const Instance& in, const Line& line, const OdPair& od) {
  if (line.arcs.empty()) return std::nullopt;
  std::vector<int> seq{in.network.arcs[line.arcs[0]].tail};
  for (int a : line.arcs) seq.push_back(in.network.arcs[a].head);
  for (size_t p = 0; p < seq.size(); ++p) {
    if (seq[p] != od.origin) continue;
    for (size_t r = p + 1; r < seq.size(); ++r)
      if (seq[r] == od.destination) return std::pair{static_cast<int>(p), static_cast<int>(r) - 1};
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

FeasibilityReport check_feasibility(const IntegralPlan& plan, const Instance& in,
                                    const std::optional<Rational>& budget, const CostOverlay* overlay) {
  FeasibilityReport rep;
  auto bad = [&](std::string s) { rep.violations.push_back(std::move(s)); };
  const int M = in.num_buses();
  rep.usage.assign(in.K, Rational(0));
  if (static_cast<int>(plan.assignment.size()) != M) {
    bad("assignment must list exactly one line per bus");
    return rep;
  }
  std::vector<Rational> effective(in.K);
  for (int b = 0; b < M; ++b) {
    int l = plan.assignment[b];
    const auto& cands = in.buses[b].candidate_lines;
    if (std::find(cands.begin(), cands.end(), l) == cands.end()) {
      bad("bus '" + in.buses[b].id + "' is assigned a line outside its candidate set");
      continue;
    }
    for (int k = 0; k < in.K; ++k) {
      rep.usage[k] += in.cost(b, l, k);
      effective[k] += overlay ? overlay->at(b, l)[k] : in.cost(b, l, k);
    }
  }
  if (!rep.violations.empty()) return rep;

  std::vector<long long> od_total(in.num_ods(), 0);
  std::map<int, std::vector<long long>> arc_load;
  std::set<std::pair<int, int>> seen;
  for (const Allocation& a : plan.xi) {
    if (a.bus < 0 || a.bus >= M || a.od < 0 || a.od >= in.num_ods()) {
      bad("allocation references an unknown bus or OD pair");
      continue;
    }
    std::string od = od_key(in, a.od);
    if (!seen.insert({a.bus, a.od}).second) bad("bus '" + in.buses[a.bus].id + "' lists OD " + od + " twice");
    if (a.amount < 0) bad("negative amount for OD " + od);
    const Line& line = in.lines[plan.assignment[a.bus]];
    auto span = served_span(in, line, in.od_pairs[a.od]);
    if (!span) {
      if (a.amount != 0) bad("bus '" + in.buses[a.bus].id + "' serves OD " + od + " which its line cannot carry");
      continue;
    }
    auto& load = arc_load[a.bus];
    load.resize(line.arcs.size(), 0);
    for (int e = span->first; e <= span->second; ++e) load[e] += a.amount;
    od_total[a.od] += a.amount;
    rep.reward += in.reward(a.bus, plan.assignment[a.bus], a.od) * a.amount;
  }
  for (const auto& [bus, load] : arc_load)
    for (size_t e = 0; e < load.size(); ++e)
      if (load[e] > in.buses[bus].capacity)
        bad("bus '" + in.buses[bus].id + "' exceeds its capacity on arc position " + std::to_string(e));
  for (int o = 0; o < in.num_ods(); ++o)
    if (od_total[o] > in.od_pairs[o].demand) bad("OD " + od_key(in, o) + " is served beyond its demand");
  if (rep.reward != plan.reward) bad("reported reward does not match the allocation");
  if (rep.usage != plan.usage) bad("reported resource usage does not match the assignment");
  if (budget)
    for (int k = 0; k < in.K; ++k)
      if (effective[k] > *budget)
        bad("resource " + std::to_string(k + 1) + " usage " + format_rational(effective[k]) + " exceeds budget " +
            format_rational(*budget));
  if (plan.discarded && (plan.reward != 0 || !plan.xi.empty())) bad("discarded plan must be empty");
  return rep;
}

}  // namespace lprc

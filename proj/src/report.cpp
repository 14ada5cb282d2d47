#include "lprc/report.hpp"

namespace lprc {

Json rational_json(const Rational& r) { return format_rational(r); }

namespace {

Json rationals(const std::vector<Rational>& values) {
  Json out = Json::array();
  for (const Rational& v : values) out.push_back(rational_json(v));
  return out;
}

// Exact strings for exact-mode LP values, plain numbers otherwise.
Json lp_value_json(const Rational& r, LpMode mode) {
  return mode == LpMode::kExact ? rational_json(r) : Json(to_double(r));
}

Json omega_json(const IndexedInstance& in, const PartialAssignment& omega) {
  Json out = Json::array();
  for (const auto& [b, l] : omega)
    out.push_back({{"bus", in.instance().buses[b].id}, {"line", in.instance().lines[l].id}});
  return out;
}

Json od_json(const IndexedInstance& in, int od) {
  const Instance& raw = in.instance();
  const OdPair& p = raw.od_pairs[od];
  return {{"origin", raw.network.nodes[p.origin]}, {"destination", raw.network.nodes[p.destination]}};
}

}  // namespace

Json restriction_json(const IndexedInstance& in, const Restriction& r) {
  Json out;
  out["kind"] = to_string(r.kind);
  if (r.kind == Restriction::Kind::kFixed || r.kind == Restriction::Kind::kModified)
    out["omega"] = omega_json(in, r.omega);
  if (r.kind == Restriction::Kind::kLowCost || r.kind == Restriction::Kind::kModified)
    out["delta"] = rational_json(r.delta);
  if (r.kind == Restriction::Kind::kModified) out["tau"] = rational_json(r.tau);
  return out;
}

Json fractional_plan_json(const IndexedInstance& in, const FractionalPlan& plan) {
  const Instance& raw = in.instance();
  Json out;
  out["restriction"] = restriction_json(in, plan.restriction);
  out["lp_mode"] = to_string(plan.mode);
  out["gamma"] = plan.gamma;
  if (plan.exact_gamma) out["gamma_exact"] = rational_json(*plan.exact_gamma);
  Json cols = Json::array();
  for (const PlanColumn& pc : plan.columns) {
    Json c;
    c["bus"] = raw.buses[pc.column.bus].id;
    c["line"] = raw.lines[pc.column.line].id;
    c["weight"] = pc.weight;
    if (plan.mode == LpMode::kExact) c["weight_exact"] = rational_json(pc.exact_weight);
    c["reward"] = rational_json(pc.column.reward);
    c["cost"] = rationals(pc.column.cost);
    Json theta = Json::object();
    for (const auto& [od, amount] : pc.column.theta) theta[od_key(raw, od)] = amount;
    c["theta"] = theta;
    cols.push_back(c);
  }
  out["columns"] = cols;
  Json q = Json::object(), w = Json::object();
  for (size_t b = 0; b < plan.duals.q.size(); ++b) q[raw.buses[b].id] = plan.duals.q[b];
  for (size_t o = 0; o < plan.duals.w.size(); ++o) w[od_key(raw, static_cast<int>(o))] = plan.duals.w[o];
  out["duals"] = {{"q", q}, {"w", w}, {"u", plan.duals.u}};
  out["rounds"] = plan.rounds;
  out["columns_generated"] = plan.columns_generated;
  out["max_reduced_cost"] = plan.max_reduced_cost;
  return out;
}

Json integral_plan_json(const IndexedInstance& in, const IntegralPlan& plan) {
  const Instance& raw = in.instance();
  Json assignment = Json::object();
  for (size_t b = 0; b < plan.assignment.size(); ++b) assignment[raw.buses[b].id] = raw.lines[plan.assignment[b]].id;
  Json xi = Json::array();
  for (const Allocation& a : plan.xi) {
    Json e;
    e["bus"] = raw.buses[a.bus].id;
    e.update(od_json(in, a.od));
    e["amount"] = a.amount;
    xi.push_back(e);
  }
  Json out;
  out["assignment"] = assignment;
  out["xi"] = xi;
  out["reward"] = rational_json(plan.reward);
  out["usage"] = rationals(plan.usage);
  out["discarded"] = plan.discarded;
  out["seed"] = plan.seed;
  return out;
}

Json oracle_result_json(const IndexedInstance& in, const OracleResult& r) {
  Json out;
  out["opt_value"] = rational_json(r.opt_value);
  out["plan"] = integral_plan_json(in, r.plan);
  out["stats"] = {{"nodes", r.stats.nodes}, {"assignments", r.stats.assignments}};
  return out;
}

Json composite_setup_json(const IndexedInstance& in, const CompositeSetup& s) {
  Json out;
  out["branch"] = to_string(s.branch);
  out["eta"] = rational_json(s.eta);
  if (s.tau) out["tau"] = rational_json(*s.tau);
  out["delta"] = rational_json(s.delta);
  out["omega_star"] = omega_json(in, s.omega_star);
  const LpMode mode = s.plan.mode;
  if (s.gamma_delta) out["gamma_delta"] = lp_value_json(*s.gamma_delta, mode);
  out["best_value"] = lp_value_json(s.best_value, mode);
  out["enumerated"] = s.enumerated;
  out["plan_gamma"] = s.plan.gamma;
  return out;
}

Json trial_report_json(const IndexedInstance& in, const TrialReport& r) {
  Json out;
  Json algo;
  algo["name"] = to_string(r.algorithm.kind);
  if (r.algorithm.kind != AlgorithmSpec::Kind::kNC) algo["eta"] = rational_json(r.algorithm.eta);
  if (r.algorithm.kind == AlgorithmSpec::Kind::kCTol) algo["tau"] = rational_json(r.algorithm.tau);
  algo["lp_mode"] = to_string(r.algorithm.options.relaxation.mode);
  out["algorithm"] = algo;
  out["base_seed"] = r.base_seed;
  out["gamma"] = lp_value_json(r.gamma, r.algorithm.options.relaxation.mode);
  if (r.opt) out["opt"] = rational_json(*r.opt);
  out["bound_label"] = r.bound_label;
  out["bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
  out["audit_budget"] = rational_json(r.audit_budget);
  if (r.composite) out["composite"] = composite_setup_json(in, *r.composite);
  const TrialStats& s = r.stats;
  Json stats;
  stats["trials"] = s.trials;
  stats["mean"] = s.mean;
  stats["stderr"] = s.stderr_;
  stats["best"] = s.best;
  stats["discards"] = s.discards;
  stats["discard_rate"] = s.trials ? static_cast<double>(s.discards) / s.trials : 0.0;
  stats["violations"] = s.violations;
  stats["rewards"] = s.rewards;
  out["stats"] = stats;
  return out;
}

Json violations_json(const std::vector<Violation>& violations) {
  Json list = Json::array();
  for (const Violation& v : violations) list.push_back({{"code", v.code}, {"message", v.message}});
  return {{"valid", violations.empty()}, {"violations", list}};
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace lprc

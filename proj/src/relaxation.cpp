#include "lprc/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lprc/errors.hpp"

namespace lprc {

const char* to_string(LpMode mode) { return mode == LpMode::kExact ? "exact" : "float"; }

const char* to_string(Restriction::Kind kind) {
  switch (kind) {
    case Restriction::Kind::kFull: return "FULL";
    case Restriction::Kind::kFixed: return "FIXED";
    case Restriction::Kind::kLowCost: return "LOW_COST";
    case Restriction::Kind::kModified: return "MODIFIED";
  }
  return "?";
}

int Column::amount(int od) const {
  auto it = std::lower_bound(theta.begin(), theta.end(), od,
                             [](const auto& e, int o) { return e.first < o; });
  return it != theta.end() && it->first == od ? it->second : 0;
}

namespace {

template <class T>
T convert(const Rational& r) {
  if constexpr (std::is_same_v<T, double>)
    return to_double(r);
  else
    return r;
}

Rational exact(double x) { return from_double(x); }
const Rational& exact(const Rational& x) { return x; }

std::optional<int> omega_line(const PartialAssignment& omega, int bus) {
  for (const auto& [b, l] : omega)
    if (b == bus) return l;
  return std::nullopt;
}

template <class T>
PricingResult price(const IndexedInstance& in, int bus, int line, std::span<const T> w) {
  const Candidate& cand = in.candidate(bus, line);
  if (static_cast<int>(w.size()) != in.num_ods())
    throw PreconditionError("pricing needs one dual price per OD pair");
  const int capacity = in.instance().buses[bus].capacity;

  lp::Problem<T> problem;
  std::vector<const ServedOd*> vars;
  for (const ServedOd& s : cand.served) {
    if (w[s.od] < T(0)) throw PreconditionError("OD dual prices must be nonnegative");
    T profit = convert<T>(s.reward) - w[s.od];
    if (!(profit > T(0))) continue;
    problem.add_variable(profit, T(in.instance().od_pairs[s.od].demand));
    vars.push_back(&s);
  }
  PricingResult out;
  if (vars.empty()) return out;

  const int num_arcs = static_cast<int>(in.instance().lines[line].arcs.size());
  for (int e = 0; e < num_arcs; ++e) {
    std::vector<std::pair<int, T>> entries;
    for (int j = 0; j < static_cast<int>(vars.size()); ++j)
      if (vars[j]->range.contains(e)) entries.emplace_back(j, T(1));
    if (!entries.empty()) problem.add_row(lp::RowSense::kLessEqual, T(capacity), std::move(entries));
  }
  lp::Solution<T> sol = lp::solve(problem);
  if (sol.status != lp::Status::kOptimal)
    throw NumericalError(std::string("pricing LP returned ") + lp::to_string(sol.status) + " " + sol.diagnostic);

  for (int j = 0; j < static_cast<int>(vars.size()); ++j) {
    const T& x = sol.primal[j];
    int amount;
    if constexpr (std::is_same_v<T, double>) {
      double r = std::round(x);
      if (std::fabs(x - r) > 1e-7)
        throw NumericalError("pricing vertex is fractional (" + std::to_string(x) + ")");
      amount = static_cast<int>(r);
    } else {
      if (boost::multiprecision::denominator(x) != 1)
        throw NumericalError("pricing vertex is fractional (" + format_rational(x) + ")");
      amount = boost::multiprecision::numerator(x).template convert_to<int>();
    }
    if (amount > 0) {
      out.theta.emplace_back(vars[j]->od, amount);
      out.value += (vars[j]->reward - exact(w[vars[j]->od])) * amount;
    }
  }
  return out;
}

}  // namespace

PricingResult solve_pricing(const IndexedInstance& in, int bus, int line, std::span<const double> w) {
  return price<double>(in, bus, line, w);
}

PricingResult solve_pricing(const IndexedInstance& in, int bus, int line, std::span<const Rational> w) {
  return price<Rational>(in, bus, line, w);
}

std::vector<Rational> assignment_consumption(const IndexedInstance& in, const PartialAssignment& omega) {
  std::vector<Rational> used(in.K());
  for (const auto& [b, l] : omega) {
    const Candidate& c = in.candidate(b, l);
    for (int k = 0; k < in.K(); ++k) used[k] += c.cost[k];
  }
  return used;
}

CostOverlay restrict_modified_costs(const IndexedInstance& in, const PartialAssignment& omega,
                                    const Rational& delta, const Rational& tau) {
  if (tau <= 0) throw PreconditionError("tau must be positive");
  std::vector<Rational> used = assignment_consumption(in, omega);
  std::vector<Rational> scale(in.K());
  for (int k = 0; k < in.K(); ++k) {
    scale[k] = Rational(1) - used[k] + tau;
    if (scale[k] <= 0) throw PreconditionError("assignment exceeds the resource budget");
  }
  CostOverlay overlay;
  for (int b = 0; b < in.num_buses(); ++b)
    for (const Candidate& c : in.candidates(b)) {
      std::vector<Rational> cost(in.K());
      if (c.max_cost <= delta)
        for (int k = 0; k < in.K(); ++k) cost[k] = c.cost[k] / scale[k];
      overlay.set(b, c.line, std::move(cost));
    }
  return overlay;
}

bool admissible(const IndexedInstance& in, const Restriction& r, int bus, int line) {
  const Candidate* c = in.find(bus, line);
  if (!c) return false;
  switch (r.kind) {
    case Restriction::Kind::kFull:
      return true;
    case Restriction::Kind::kFixed: {
      auto fixed = omega_line(r.omega, bus);
      return fixed ? *fixed == line : c->dummy;
    }
    case Restriction::Kind::kLowCost:
      return c->max_cost <= r.delta;
    case Restriction::Kind::kModified: {
      auto fixed = omega_line(r.omega, bus);
      return fixed ? *fixed == line : c->max_cost <= r.delta;
    }
  }
  return false;
}

std::vector<Rational> effective_cost(const IndexedInstance& in, const Restriction& r,
                                     const CostOverlay* overlay, int bus, int line) {
  if (r.kind == Restriction::Kind::kModified) {
    if (!overlay) throw PreconditionError("MODIFIED restriction needs a cost overlay");
    return overlay->at(bus, line);
  }
  return in.candidate(bus, line).cost;
}

namespace {

void check_restriction(const IndexedInstance& in, const Restriction& r) {
  using Kind = Restriction::Kind;
  if (r.kind == Kind::kFixed || r.kind == Kind::kModified) {
    std::set<int> seen;
    for (const auto& [b, l] : r.omega) {
      if (b < 0 || b >= in.num_buses()) throw PreconditionError("assignment names an unknown bus");
      if (!seen.insert(b).second) throw PreconditionError("assignment lists a bus twice");
      if (l < 0 || l >= static_cast<int>(in.instance().lines.size()) || !in.find(b, l))
        throw PreconditionError("assignment puts bus '" + in.instance().buses[b].id +
                                "' on a line outside its candidate set");
      if (r.kind == Kind::kModified && in.candidate(b, l).max_cost <= r.delta)
        throw PreconditionError("MODIFIED assignment may only use high-cost lines");
    }
    auto used = assignment_consumption(in, r.omega);
    for (const auto& u : used)
      if (u > 1) throw PreconditionError("assignment exceeds the resource budget");
  }
  if ((r.kind == Kind::kLowCost || r.kind == Kind::kModified) && (r.delta <= 0 || r.delta >= 1))
    throw PreconditionError("delta must lie in (0,1)");
  if (r.kind == Kind::kModified && r.tau <= 0) throw PreconditionError("tau must be positive");
}

struct ColumnKey {
  int bus, line;
  std::vector<std::pair<int, int>> theta;
  auto operator<=>(const ColumnKey&) const = default;
};

template <class T>
class ColumnGeneration {
 public:
  ColumnGeneration(const IndexedInstance& in, const Restriction& r, const CostOverlay* overlay,
                   const RelaxationOptions& o)
      : in_(in), restriction_(r), overlay_(overlay), options_(o) {}

  FractionalPlan run() {
    const int M = in_.num_buses();
    for (int b = 0; b < M; ++b) {
      // Start from the empty allocation on the dummy line when allowed,
      // otherwise on the single line the restriction fixes.
      const Candidate* start = nullptr;
      for (const Candidate& c : in_.candidates(b)) {
        if (!admissible(in_, restriction_, b, c.line)) continue;
        admissible_[b].push_back(c.line);
        if (!start || (c.dummy && !start->dummy)) start = &c;
      }
      if (!start) throw PreconditionError("restriction leaves bus '" + in_.instance().buses[b].id + "' no line");
      add_column(b, start->line, {});
    }

    FractionalPlan plan;
    plan.restriction = restriction_;
    plan.mode = std::is_same_v<T, double> ? LpMode::kFloat : LpMode::kExact;
    lp::Solution<T> sol;
    const T tol = std::is_same_v<T, double> ? T(options_.reduced_cost_tolerance) : T(0);
    for (;;) {
      if (plan.rounds >= options_.max_rounds) throw LimitExceeded("column generation round limit reached");
      ++plan.rounds;
      sol = solve_master();
      std::vector<T> w(sol.duals.begin() + M + in_.K(), sol.duals.end());
      for (auto& v : w)
        if (v < T(0)) v = T(0);  // within tolerance of zero when certified
      int added = 0;
      T max_rc{};
      bool first = true;
      for (int b = 0; b < M; ++b) {
        const T& q = sol.duals[b];
        for (int l : admissible_[b]) {
          PricingResult pr = solve_pricing(in_, b, l, std::span<const T>(w));
          std::vector<Rational> cost = effective_cost(in_, restriction_, overlay_, b, l);
          T rc = convert<T>(pr.value) - q;
          for (int k = 0; k < in_.K(); ++k) rc -= convert<T>(cost[k]) * sol.duals[M + k];
          if (first || rc > max_rc) max_rc = rc, first = false;
          if (rc > tol && add_column(b, l, std::move(pr.theta))) ++added;
        }
      }
      plan.max_reduced_cost = first ? 0.0 : static_cast<double>(convert_back(max_rc));
      if (added == 0) break;
    }

    const T zero_cut = std::is_same_v<T, double> ? T(1e-12) : T(0);
    Rational exact_gamma;
    for (size_t j = 0; j < columns_.size(); ++j) {
      const T& x = sol.primal[j];
      if (!(x > zero_cut)) continue;
      PlanColumn pc{columns_[j], static_cast<double>(convert_back(x)), exact(x)};
      exact_gamma += pc.exact_weight * pc.column.reward;
      plan.columns.push_back(std::move(pc));
    }
    std::stable_sort(plan.columns.begin(), plan.columns.end(), [](const PlanColumn& a, const PlanColumn& b) {
      return std::tie(a.column.bus, a.column.line) < std::tie(b.column.bus, b.column.line);
    });
    plan.gamma = static_cast<double>(convert_back(sol.objective));
    if constexpr (!std::is_same_v<T, double>) plan.exact_gamma = sol.objective;
    for (int b = 0; b < M; ++b) plan.duals.q.push_back(convert_back(sol.duals[b]));
    for (int k = 0; k < in_.K(); ++k) plan.duals.u.push_back(convert_back(sol.duals[M + k]));
    for (int o = 0; o < in_.num_ods(); ++o)
      plan.duals.w.push_back(std::max(0.0, convert_back(sol.duals[M + in_.K() + o])));
    plan.columns_generated = static_cast<int>(columns_.size());
    if (overlay_) plan.overlay = *overlay_;
    return plan;
  }

  /// Thrown when the floating master cannot be certified.
  struct Uncertified {};

 private:
  static double convert_back(const T& x) {
    if constexpr (std::is_same_v<T, double>)
      return x;
    else
      return to_double(x);
  }

  bool add_column(int bus, int line, std::vector<std::pair<int, int>> theta) {
    ColumnKey key{bus, line, theta};
    if (!seen_.insert(key).second) return false;
    Column c;
    c.bus = bus;
    c.line = line;
    c.theta = std::move(theta);
    const Candidate& cand = in_.candidate(bus, line);
    for (const auto& [od, amount] : c.theta) c.reward += cand.find_served(od)->reward * amount;
    c.cost = effective_cost(in_, restriction_, overlay_, bus, line);
    columns_.push_back(std::move(c));
    return true;
  }

  lp::Solution<T> solve_master() const {
    const int M = in_.num_buses(), K = in_.K();
    lp::Problem<T> p;
    for (int b = 0; b < M; ++b) p.add_row(lp::RowSense::kEqual, T(1));
    for (int k = 0; k < K; ++k) p.add_row(lp::RowSense::kLessEqual, T(1));
    for (const OdPair& od : in_.instance().od_pairs) p.add_row(lp::RowSense::kLessEqual, T(od.demand));
    for (const Column& c : columns_) {
      int j = p.add_variable(convert<T>(c.reward));
      p.set_coefficient(c.bus, j, T(1));
      for (int k = 0; k < K; ++k)
        if (c.cost[k] != 0) p.set_coefficient(M + k, j, convert<T>(c.cost[k]));
      for (const auto& [od, amount] : c.theta) p.set_coefficient(M + K + od, j, T(amount));
    }
    lp::Solution<T> sol = lp::solve(p, options_.lp);
    if (sol.status == lp::Status::kInfeasible)
      throw PreconditionError("restricted master LP is infeasible");
    if (sol.status != lp::Status::kOptimal) {
      if constexpr (std::is_same_v<T, double>) throw Uncertified{};
      throw NumericalError(std::string("master LP returned ") + lp::to_string(sol.status) + " " + sol.diagnostic);
    }
    return sol;
  }

  const IndexedInstance& in_;
  const Restriction& restriction_;
  const CostOverlay* overlay_;
  RelaxationOptions options_;
  std::vector<Column> columns_;
  std::set<ColumnKey> seen_;
  std::map<int, std::vector<int>> admissible_;
};

}  // namespace

FractionalPlan solve_relaxation(const IndexedInstance& in, const Restriction& r, const RelaxationOptions& o) {
  check_restriction(in, r);
  std::optional<CostOverlay> overlay;
  if (r.kind == Restriction::Kind::kModified) overlay = restrict_modified_costs(in, r.omega, r.delta, r.tau);
  const CostOverlay* ov = overlay ? &*overlay : nullptr;
  if (o.mode == LpMode::kExact) return ColumnGeneration<Rational>(in, r, ov, o).run();
  try {
    return ColumnGeneration<double>(in, r, ov, o).run();
  } catch (const ColumnGeneration<double>::Uncertified&) {
    if (!o.exact_fallback) throw NumericalError("floating master LP could not be certified");
    return ColumnGeneration<Rational>(in, r, ov, o).run();
  }
}

}  // namespace lprc

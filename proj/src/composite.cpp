#include "lprc/composite.hpp"

#include <cmath>

#include "lprc/errors.hpp"

namespace lprc {

const char* to_string(CompositeSetup::Branch branch) {
  switch (branch) {
    case CompositeSetup::Branch::kLowCost: return "LOW_COST";
    case CompositeSetup::Branch::kFixed: return "FIXED";
    case CompositeSetup::Branch::kModified: return "MODIFIED";
  }
  return "?";
}

void enumerate_a_delta(const IndexedInstance& in, const Rational& delta,
                       const std::function<void(const HighCostAssignment&)>& visit, std::size_t cap) {
  if (delta <= 0 || delta >= 1) throw PreconditionError("delta must lie in (0,1)");
  const int M = in.num_buses(), K = in.K();
  std::vector<std::vector<const Candidate*>> high(M);
  for (int b = 0; b < M; ++b)
    for (const Candidate& c : in.candidates(b))
      if (c.max_cost > delta) high[b].push_back(&c);

  HighCostAssignment current;
  current.consumption.assign(K, Rational(0));
  std::size_t count = 0;
  std::function<void(int)> dfs = [&](int b) {
    if (b == M) {
      if (++count > cap)
        throw LimitExceeded("high-cost assignment enumeration exceeded its cap of " + std::to_string(cap));
      visit(current);
      return;
    }
    dfs(b + 1);
    for (const Candidate* c : high[b]) {
      bool fits = true;
      for (int k = 0; k < K && fits; ++k) fits = current.consumption[k] + c->cost[k] <= 1;
      if (!fits) continue;
      for (int k = 0; k < K; ++k) current.consumption[k] += c->cost[k];
      current.omega.emplace_back(b, c->line);
      dfs(b + 1);
      current.omega.pop_back();
      for (int k = 0; k < K; ++k) current.consumption[k] -= c->cost[k];
    }
  };
  dfs(0);
}

std::vector<HighCostAssignment> enumerate_a_delta(const IndexedInstance& in, const Rational& delta, std::size_t cap) {
  std::vector<HighCostAssignment> out;
  enumerate_a_delta(in, delta, [&](const HighCostAssignment& a) { out.push_back(a); }, cap);
  return out;
}

long double a_delta_size_bound(const IndexedInstance& in, const Rational& delta) {
  std::size_t L = 0;
  for (int b = 0; b < in.num_buses(); ++b) L = std::max(L, in.candidates(b).size());
  long double ratio = static_cast<long double>(in.K()) / static_cast<long double>(to_double(delta));
  long double base = static_cast<long double>(in.num_buses()) * static_cast<long double>(L);
  return ratio * std::pow(base, ratio);
}

namespace {

// Float-mode values carry solver noise; treat them as equal within a
// relative 1e-9 so ties follow the documented rules.
bool greater(const Rational& a, const Rational& b, LpMode mode) {
  if (mode == LpMode::kExact) return a > b;
  double x = to_double(a), y = to_double(b);
  return x > y + 1e-9 * (1.0 + std::fabs(y));
}

Rational cube(const Rational& x) { return x * x * x; }

}  // namespace

CompositeSetup prepare_algorithm_c(const IndexedInstance& in, const Rational& eta, const CompositeOptions& options) {
  if (eta <= 0 || eta >= Rational(1, 4)) throw PreconditionError("Algorithm C needs eta in (0, 1/4)");
  CompositeSetup setup;
  setup.eta = eta;
  setup.delta = cube(eta) / (256 * cube(Rational(in.K())));
  const LpMode mode = options.relaxation.mode;

  FractionalPlan low = solve_relaxation(in, Restriction::low_cost(setup.delta), options.relaxation);
  setup.gamma_delta = low.gamma_value();

  std::optional<FractionalPlan> best_fixed;
  enumerate_a_delta(
      in, setup.delta,
      [&](const HighCostAssignment& a) {
        ++setup.enumerated;
        FractionalPlan p = solve_relaxation(in, Restriction::fixed(a.omega), options.relaxation);
        if (!best_fixed || greater(p.gamma_value(), best_fixed->gamma_value(), mode)) {
          setup.omega_star = a.omega;
          best_fixed = std::move(p);
        }
      },
      options.enumeration_cap);
  setup.best_value = best_fixed->gamma_value();

  if (!greater(setup.best_value, *setup.gamma_delta, mode)) {
    setup.branch = CompositeSetup::Branch::kLowCost;
    setup.plan = std::move(low);
  } else {
    setup.branch = CompositeSetup::Branch::kFixed;
    setup.plan = std::move(*best_fixed);
  }
  return setup;
}

CompositeSetup prepare_algorithm_c_tol(const IndexedInstance& in, const Rational& eta, const Rational& tau,
                                       const CompositeOptions& options) {
  if (eta <= 0 || eta >= Rational(1, 2)) throw PreconditionError("Algorithm C-Tol needs eta in (0, 1/2)");
  if (tau <= 0 || tau >= Rational(1, 2)) throw PreconditionError("Algorithm C-Tol needs tau in (0, 1/2)");
  CompositeSetup setup;
  setup.branch = CompositeSetup::Branch::kModified;
  setup.eta = eta;
  setup.tau = tau;
  setup.delta = tau * cube(eta) / (256 * cube(Rational(in.K())));
  const LpMode mode = options.relaxation.mode;

  std::optional<FractionalPlan> best;
  enumerate_a_delta(
      in, setup.delta,
      [&](const HighCostAssignment& a) {
        ++setup.enumerated;
        FractionalPlan p =
            solve_relaxation(in, Restriction::modified(setup.delta, tau, a.omega), options.relaxation);
        if (!best || greater(p.gamma_value(), best->gamma_value(), mode)) {
          setup.omega_star = a.omega;
          best = std::move(p);
        }
      },
      options.enumeration_cap);
  setup.best_value = best->gamma_value();
  setup.plan = std::move(*best);
  return setup;
}

IntegralPlan round_composite(const IndexedInstance& in, const CompositeSetup& setup, std::uint64_t seed) {
  switch (setup.branch) {
    case CompositeSetup::Branch::kFixed:
      return round_nc(in, setup.plan, seed);
    case CompositeSetup::Branch::kLowCost:
      return round_lc(in, setup.plan, RoundingParams(setup.eta, in.K()), nullptr, seed);
    case CompositeSetup::Branch::kModified:
      return round_lc(in, setup.plan, RoundingParams(setup.eta, in.K()),
                      setup.plan.overlay ? &*setup.plan.overlay : nullptr, seed);
  }
  throw PreconditionError("unknown composite branch");
}

CompositeResult algorithm_c(const IndexedInstance& in, const Rational& eta, std::uint64_t seed,
                            const CompositeOptions& options) {
  CompositeResult r{prepare_algorithm_c(in, eta, options), {}};
  r.plan = round_composite(in, r.setup, seed);
  return r;
}

CompositeResult algorithm_c_tol(const IndexedInstance& in, const Rational& eta, const Rational& tau,
                                std::uint64_t seed, const CompositeOptions& options) {
  CompositeResult r{prepare_algorithm_c_tol(in, eta, tau, options), {}};
  r.plan = round_composite(in, r.setup, seed);
  return r;
}

}  // namespace lprc

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lprc/instance.hpp"
#include "lprc/lp.hpp"
#include "lprc/rational.hpp"

namespace lprc {

enum class LpMode { kFloat, kExact };

const char* to_string(LpMode mode);

/// Partial map bus -> line, ascending by bus.
using PartialAssignment = std::vector<std::pair<int, int>>;

/// Which columns the master LP may use, and at which costs.
struct Restriction {
  enum class Kind { kFull, kFixed, kLowCost, kModified };

  Kind kind = Kind::kFull;
  PartialAssignment omega;
  Rational delta;
  Rational tau;

  static Restriction full() { return {}; }
  static Restriction fixed(PartialAssignment omega) { return {Kind::kFixed, std::move(omega), {}, {}}; }
  static Restriction low_cost(Rational delta) { return {Kind::kLowCost, {}, std::move(delta), {}}; }
  static Restriction modified(Rational delta, Rational tau, PartialAssignment omega) {
    return {Kind::kModified, std::move(omega), std::move(delta), std::move(tau)};
  }
};

const char* to_string(Restriction::Kind kind);

/// Replacement resource costs, one K-vector per (bus, candidate line).
class CostOverlay {
 public:
  const std::vector<Rational>& at(int bus, int line) const { return costs_.at({bus, line}); }
  void set(int bus, int line, std::vector<Rational> cost) { costs_[{bus, line}] = std::move(cost); }
  const auto& entries() const { return costs_; }

 private:
  std::map<std::pair<int, int>, std::vector<Rational>> costs_;
};

/// An integer point of P(b,l). `theta` is sparse, ascending by OD index.
struct Column {
  int bus = 0;
  int line = 0;
  std::vector<std::pair<int, int>> theta;
  Rational reward;
  /// Effective resource costs under the restriction that produced it.
  std::vector<Rational> cost;

  int amount(int od) const;
};

struct PlanColumn {
  Column column;
  double weight = 0.0;
  Rational exact_weight;
};

struct DualPrices {
  std::vector<double> q;  // per bus, free
  std::vector<double> w;  // per OD, >= 0
  std::vector<double> u;  // per resource, >= 0
};

struct FractionalPlan {
  Restriction restriction;
  LpMode mode = LpMode::kFloat;
  std::vector<PlanColumn> columns;
  double gamma = 0.0;
  /// Set in exact mode.
  std::optional<Rational> exact_gamma;
  DualPrices duals;
  /// Effective costs for MODIFIED restrictions.
  std::optional<CostOverlay> overlay;
  int rounds = 0;
  int columns_generated = 0;
  /// Largest reduced cost seen in the final pricing round.
  double max_reduced_cost = 0.0;

  Rational gamma_value() const { return exact_gamma ? *exact_gamma : from_double(gamma); }
};

struct PricingResult {
  std::vector<std::pair<int, int>> theta;
  /// sum over ODs of (v - w) * theta, exact.
  Rational value;
};

/// Best integer point of P(b,l) for per-unit profits v - w. Solved as an LP
/// whose basic optimum must come back integral; a fractional vertex raises
/// NumericalError.
PricingResult solve_pricing(const IndexedInstance& instance, int bus, int line,
                            std::span<const double> w);
PricingResult solve_pricing(const IndexedInstance& instance, int bus, int line,
                            std::span<const Rational> w);

struct RelaxationOptions {
  LpMode mode = LpMode::kFloat;
  /// Columns enter when their reduced cost exceeds this (floating mode).
  double reduced_cost_tolerance = 1e-7;
  lp::Options lp;
  int max_rounds = 10000;
  /// Re-run in exact mode when the floating LP cannot certify its result.
  bool exact_fallback = true;
};

CostOverlay restrict_modified_costs(const IndexedInstance& instance, const PartialAssignment& omega,
                                    const Rational& delta, const Rational& tau);

/// Effective costs that the restriction applies to (bus, line).
std::vector<Rational> effective_cost(const IndexedInstance& instance, const Restriction& restriction,
                                     const CostOverlay* overlay, int bus, int line);

/// True when the restriction lets `bus` use `line`.
bool admissible(const IndexedInstance& instance, const Restriction& restriction, int bus, int line);

/// Sum over the assignment of each resource's cost.
std::vector<Rational> assignment_consumption(const IndexedInstance& instance,
                                             const PartialAssignment& omega);

/// Column generation for the LP relaxation under `restriction`.
FractionalPlan solve_relaxation(const IndexedInstance& instance, const Restriction& restriction,
                                const RelaxationOptions& options = {});

}  // namespace lprc

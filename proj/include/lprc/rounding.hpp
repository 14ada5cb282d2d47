#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lprc/instance.hpp"
#include "lprc/rational.hpp"
#include "lprc/relaxation.hpp"

namespace lprc {

struct Allocation {
  int bus = 0;
  int od = 0;
  int amount = 0;
  bool operator==(const Allocation&) const = default;
};

/// A solution of the integer program: one line per bus (possibly the dummy)
/// and integer demand served per (bus, OD).
struct IntegralPlan {
  std::vector<int> assignment;
  std::vector<Allocation> xi;  // ascending (bus, od), amounts > 0
  Rational reward;
  /// True resource usage, per resource.
  std::vector<Rational> usage;
  /// Set when LC's budget check rejected the sampled solution.
  bool discarded = false;
  std::uint64_t seed = 0;

  bool operator==(const IntegralPlan&) const = default;
};

/// All buses on their dummy line, nothing served.
IntegralPlan empty_plan(const IndexedInstance& instance);

class RoundingParams {
 public:
  RoundingParams(Rational eta, int K);

  const Rational& eta() const { return eta_; }
  int K() const { return K_; }
  Rational q() const { return Rational(4) / eta_; }
  /// 1 / (qK)
  Rational epsilon() const { return Rational(1) / (q() * K_); }
  /// eta^3 / (256 K^3), the per-line cost ceiling LC requires.
  Rational delta() const { return eta_ * eta_ * eta_ / (256 * Rational(K_) * K_ * K_); }

 private:
  Rational eta_;
  int K_;
};

/// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
double unit_uniform(std::uint64_t bits);

/// Samples one column per bus with probability equal to its weight, then
/// fills each OD pair greedily in descending per-unit reward (ties by bus
/// index), truncating the allocation that overflows demand.
IntegralPlan round_nc(const IndexedInstance& instance, const FractionalPlan& plan, std::uint64_t seed);

/// NC with every selection probability thinned by (1 - epsilon); returns the
/// discarded empty plan when the sampled lines break a resource budget under
/// the effective costs (the overlay if given, else the plan's column costs).
IntegralPlan round_lc(const IndexedInstance& instance, const FractionalPlan& plan,
                      const RoundingParams& params, const CostOverlay* overlay, std::uint64_t seed);

struct FeasibilityReport {
  std::vector<std::string> violations;
  Rational reward;
  std::vector<Rational> usage;
  bool feasible() const { return violations.empty(); }
};

/// Re-derives every constraint of the integer program from raw instance
/// data. `budget` of nullopt means resources are not checked. With an
/// overlay, the budget applies to overlay costs instead of true costs.
FeasibilityReport check_feasibility(const IntegralPlan& plan, const Instance& instance,
                                    const std::optional<Rational>& budget = Rational(1),
                                    const CostOverlay* overlay = nullptr);

}  // namespace lprc

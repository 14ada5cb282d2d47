#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lprc/instance.hpp"
#include "lprc/rational.hpp"
#include "lprc/relaxation.hpp"
#include "lprc/rounding.hpp"

namespace lprc {

/// A resource-feasible partial assignment of high-cost lines (some cost
/// above delta) to buses.
struct HighCostAssignment {
  PartialAssignment omega;
  std::vector<Rational> consumption;
};

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Visits every element in depth-first order: buses ascending, "unassigned"
/// before the bus's high-cost lines, lines ascending. The empty assignment
/// comes first. Throws LimitExceeded past `cap` elements.
void enumerate_a_delta(const IndexedInstance& instance, const Rational& delta,
                       const std::function<void(const HighCostAssignment&)>& visit,
                       std::size_t cap = kDefaultEnumerationCap);

std::vector<HighCostAssignment> enumerate_a_delta(const IndexedInstance& instance, const Rational& delta,
                                                  std::size_t cap = kDefaultEnumerationCap);

/// (K/delta) * (M L)^(K/delta) with L the largest candidate set, as a
/// long double (may be +inf).
long double a_delta_size_bound(const IndexedInstance& instance, const Rational& delta);

struct CompositeOptions {
  RelaxationOptions relaxation;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

/// The deterministic part of Algorithms C and C-Tol: every LP solved and
/// the plan that will be rounded.
struct CompositeSetup {
  enum class Branch { kLowCost, kFixed, kModified };

  Branch branch = Branch::kLowCost;
  Rational eta;
  std::optional<Rational> tau;
  Rational delta;
  PartialAssignment omega_star;
  /// Gamma of LOW_COST(delta); Algorithm C only.
  std::optional<Rational> gamma_delta;
  /// f_L(omega*) for C, f_L^{delta,tau}(omega*) for C-Tol.
  Rational best_value;
  std::size_t enumerated = 0;
  FractionalPlan plan;
};

const char* to_string(CompositeSetup::Branch branch);

CompositeSetup prepare_algorithm_c(const IndexedInstance& instance, const Rational& eta,
                                   const CompositeOptions& options = {});
CompositeSetup prepare_algorithm_c_tol(const IndexedInstance& instance, const Rational& eta, const Rational& tau,
                                       const CompositeOptions& options = {});

/// Rounds a prepared setup: LC on the LOW_COST and MODIFIED branches, NC on
/// the FIXED branch.
IntegralPlan round_composite(const IndexedInstance& instance, const CompositeSetup& setup, std::uint64_t seed);

struct CompositeResult {
  CompositeSetup setup;
  IntegralPlan plan;
};

CompositeResult algorithm_c(const IndexedInstance& instance, const Rational& eta, std::uint64_t seed,
                            const CompositeOptions& options = {});
CompositeResult algorithm_c_tol(const IndexedInstance& instance, const Rational& eta, const Rational& tau,
                                std::uint64_t seed, const CompositeOptions& options = {});

}  // namespace lprc

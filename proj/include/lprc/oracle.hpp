#pragma once

#include <cstdint>
#include <vector>

#include "lprc/instance.hpp"
#include "lprc/rational.hpp"
#include "lprc/rounding.hpp"

namespace lprc {

struct OracleLimits {
  /// Upper bound on the product of candidate-set sizes.
  std::uint64_t max_line_assignments = 100'000;
  /// Search nodes allowed per line assignment.
  std::uint64_t max_allocation_nodes = 10'000'000;
  /// Upper-bound pruning; turning it off must not change the optimum.
  bool prune = true;

  static OracleLimits unlimited() {
    return {UINT64_MAX, UINT64_MAX, true};
  }
};

struct OracleStats {
  std::uint64_t nodes = 0;
  std::uint64_t assignments = 0;  // resource-feasible assignments searched
};

struct OracleResult {
  Rational opt_value;
  IntegralPlan plan;
  OracleStats stats;
};

/// Exact optimum of the integer program by enumeration of resource-feasible
/// line assignments and depth-first allocation search.
OracleResult solve_exact(const IndexedInstance& instance, const OracleLimits& limits = {});

struct AllocationResult {
  Rational value;
  std::vector<Allocation> xi;  // ascending (bus, od), amounts > 0
  std::uint64_t nodes = 0;
};

/// Exact optimum of the allocation subproblem with every bus's line fixed.
/// `assignment` holds one candidate line per bus.
AllocationResult solve_allocation_exact(const IndexedInstance& instance, const std::vector<int>& assignment,
                                        const OracleLimits& limits = {});

}  // namespace lprc

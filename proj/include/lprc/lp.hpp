#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lprc/rational.hpp"

namespace lprc::lp {

enum class RowSense { kEqual, kLessEqual };

/// maximize c'x  s.t.  rows (EQ or LE),  0 <= x <= upper.
template <class T>
struct Problem {
  struct Row {
    RowSense sense = RowSense::kLessEqual;
    T rhs{};
    std::vector<std::pair<int, T>> entries;
  };

  std::vector<T> objective;
  std::vector<std::optional<T>> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_variable(T cost, std::optional<T> upper_bound = std::nullopt) {
    objective.push_back(std::move(cost));
    upper.push_back(std::move(upper_bound));
    return num_vars() - 1;
  }
  int add_row(RowSense sense, T rhs, std::vector<std::pair<int, T>> entries = {}) {
    rows.push_back({sense, std::move(rhs), std::move(entries)});
    return num_rows() - 1;
  }
  void set_coefficient(int row, int var, T value) {
    rows[row].entries.emplace_back(var, std::move(value));
  }
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* to_string(Status s);

template <class T>
struct Solution {
  Status status = Status::kNumericalFailure;
  std::vector<T> primal;
  /// One per row. EQ rows are free; LE rows are >= 0 (maximization).
  std::vector<T> duals;
  T objective{};
  /// Structural variables in the final basis, ascending.
  std::vector<int> basic_variables;
  int iterations = 0;
  std::string diagnostic;
};

struct Options {
  /// Relative feasibility/optimality tolerance. Ignored in exact mode.
  double tolerance = 1e-9;
  int max_iterations = 100000;
  /// Consecutive degenerate pivots before switching to Bland's rule for
  /// the rest of the solve.
  int degenerate_streak_limit = 50;
  /// Refactorize the basis inverse every this many pivots (floating mode).
  int refactor_every = 64;
};

/// Revised primal simplex, two phases. Dantzig pricing with lowest-index
/// ties; falls back to Bland's rule on long degenerate streaks. The result
/// is certified (primal/dual feasibility, strong duality) before being
/// reported optimal.
template <class T>
Solution<T> solve(const Problem<T>& problem, const Options& options = {});

extern template Solution<double> solve(const Problem<double>&, const Options&);
extern template Solution<Rational> solve(const Problem<Rational>&, const Options&);

/// CPLEX-LP text for cross-checking against external solvers.
template <class T>
void write_lp_format(const Problem<T>& problem, std::ostream& out);

extern template void write_lp_format(const Problem<double>&, std::ostream&);
extern template void write_lp_format(const Problem<Rational>&, std::ostream&);

}  // namespace lprc::lp

#include "lprc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lprc::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "OPTIMAL";
    case Status::kInfeasible: return "INFEASIBLE";
    case Status::kUnbounded: return "UNBOUNDED";
    case Status::kNumericalFailure: return "NUMERICAL_FAILURE";
  }
  return "?";
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static constexpr bool kExact = false;
  static double abs(double x) { return std::fabs(x); }
};

template <>
struct Arith<Rational> {
  static constexpr bool kExact = true;
  static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
};

// Column-oriented standard form: every row normalized to a nonnegative
// right-hand side, slack for each LE row, artificial where no slack can
// start basic. Upper bounds become extra LE rows.
template <class T>
class Simplex {
  using A = Arith<T>;
  using Entries = std::vector<std::pair<int, T>>;

 public:
  Simplex(const Problem<T>& p, const Options& o) : problem_(p), options_(o) {
    if constexpr (!A::kExact) tol_ = o.tolerance;
    build();
  }

  Solution<T> run() {
    Solution<T> out;
    bool any_artificial = first_artificial_ < num_cols_;
    if (any_artificial) {
      set_phase_costs(/*phase_one=*/true);
      Status s = iterate(/*phase_one=*/true, out);
      if (s == Status::kNumericalFailure) return out;
      T infeasibility{};
      for (int i = 0; i < m_; ++i)
        if (is_artificial(basis_[i])) infeasibility += x_[i];
      if (infeasibility > tol_ * (T(1) + max_rhs_)) {
        out.status = Status::kInfeasible;
        return out;
      }
      drive_out_artificials();
    }
    set_phase_costs(/*phase_one=*/false);
    Status s = iterate(/*phase_one=*/false, out);
    if (s != Status::kOptimal) {
      out.status = s;
      return out;
    }
    if constexpr (!A::kExact) {
      if (!refactor()) {
        out.status = Status::kNumericalFailure;
        out.diagnostic = "singular basis at final refactorization";
        return out;
      }
    }
    extract(out);
    certify(out);
    return out;
  }

 private:
  void build() {
    const int n = problem_.num_vars();
    n_ = n;
    // Rows: original, then one per finite upper bound.
    for (int i = 0; i < problem_.num_rows(); ++i) {
      const auto& r = problem_.rows[i];
      rows_.push_back({r.sense, r.rhs});
    }
    bound_row_.assign(n, -1);
    for (int j = 0; j < n; ++j)
      if (problem_.upper[j]) {
        bound_row_[j] = static_cast<int>(rows_.size());
        rows_.push_back({RowSense::kLessEqual, *problem_.upper[j]});
      }
    m_ = static_cast<int>(rows_.size());
    sign_.assign(m_, 1);
    for (int i = 0; i < m_; ++i) {
      if (rows_[i].rhs < T(0)) sign_[i] = -1;
      T b = sign_[i] > 0 ? rows_[i].rhs : T(-rows_[i].rhs);
      rhs_.push_back(b);
      if (b > max_rhs_) max_rhs_ = b;
    }
    cols_.assign(n, {});
    for (int i = 0; i < problem_.num_rows(); ++i)
      for (const auto& [j, a] : problem_.rows[i].entries) {
        if (a == T(0)) continue;
        cols_[j].emplace_back(i, sign_[i] > 0 ? a : T(-a));
      }
    for (int j = 0; j < n; ++j) {
      // Merge duplicate entries for the same row.
      auto& c = cols_[j];
      std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      Entries merged;
      for (auto& e : c) {
        if (!merged.empty() && merged.back().first == e.first)
          merged.back().second += e.second;
        else
          merged.push_back(e);
      }
      std::erase_if(merged, [](const auto& e) { return e.second == T(0); });
      c = std::move(merged);
      if (bound_row_[j] >= 0) c.emplace_back(bound_row_[j], sign_[bound_row_[j]] > 0 ? T(1) : T(-1));
    }
    basis_.assign(m_, -1);
    slack_of_row_.assign(m_, -1);
    for (int i = 0; i < m_; ++i)
      if (rows_[i].sense == RowSense::kLessEqual) {
        slack_of_row_[i] = static_cast<int>(cols_.size());
        cols_.push_back({{i, sign_[i] > 0 ? T(1) : T(-1)}});
        if (sign_[i] > 0) basis_[i] = slack_of_row_[i];
      }
    first_artificial_ = static_cast<int>(cols_.size());
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < 0) {
        basis_[i] = static_cast<int>(cols_.size());
        cols_.push_back({{i, T(1)}});
      }
    num_cols_ = static_cast<int>(cols_.size());
    position_.assign(num_cols_, -1);
    for (int i = 0; i < m_; ++i) position_[basis_[i]] = i;
    binv_.assign(static_cast<size_t>(m_) * m_, T(0));
    for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = T(1);
    x_ = rhs_;
    cost_.assign(num_cols_, T(0));
  }

  size_t idx(int r, int c) const { return static_cast<size_t>(r) * m_ + c; }
  bool is_artificial(int col) const { return col >= first_artificial_; }

  void set_phase_costs(bool phase_one) {
    std::fill(cost_.begin(), cost_.end(), T(0));
    if (phase_one) {
      for (int j = first_artificial_; j < num_cols_; ++j) cost_[j] = T(-1);
    } else {
      for (int j = 0; j < n_; ++j) cost_[j] = problem_.objective[j];
    }
  }

  std::vector<T> compute_duals() const {
    std::vector<T> y(m_, T(0));
    for (int i = 0; i < m_; ++i) {
      const T& cb = cost_[basis_[i]];
      if (cb == T(0)) continue;
      for (int k = 0; k < m_; ++k) {
        const T& b = binv_[idx(i, k)];
        if (b != T(0)) y[k] += cb * b;
      }
    }
    return y;
  }

  T reduced_cost(int j, const std::vector<T>& y) const {
    T d = cost_[j];
    for (const auto& [i, a] : cols_[j]) d -= y[i] * a;
    return d;
  }

  std::vector<T> ftran(int j) const {
    std::vector<T> alpha(m_, T(0));
    for (const auto& [k, a] : cols_[j])
      for (int i = 0; i < m_; ++i) {
        const T& b = binv_[idx(i, k)];
        if (b != T(0)) alpha[i] += b * a;
      }
    return alpha;
  }

  void pivot(int r, int entering, const std::vector<T>& alpha) {
    const T pivot_value = alpha[r];
    for (int k = 0; k < m_; ++k) binv_[idx(r, k)] /= pivot_value;
    x_[r] /= pivot_value;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == T(0)) continue;
      const T f = alpha[i];
      for (int k = 0; k < m_; ++k) {
        const T& b = binv_[idx(r, k)];
        if (b != T(0)) binv_[idx(i, k)] -= f * b;
      }
      x_[i] -= f * x_[r];
    }
    position_[basis_[r]] = -1;
    basis_[r] = entering;
    position_[entering] = r;
    if constexpr (!A::kExact) {
      for (auto& v : x_)
        if (v < 0 && v > -tol_) v = 0;
    }
  }

  Status iterate(bool phase_one, Solution<T>& out) {
    int degenerate_streak = 0;
    bool bland = false;
    int since_refactor = 0;
    for (;;) {
      if (out.iterations >= options_.max_iterations) {
        out.status = Status::kNumericalFailure;
        out.diagnostic = "iteration limit reached";
        return out.status;
      }
      std::vector<T> y = compute_duals();
      int entering = -1;
      T best{};
      for (int j = 0; j < num_cols_; ++j) {
        if (position_[j] >= 0 || is_artificial(j)) continue;
        T d = reduced_cost(j, y);
        if (d > tol_ * (T(1) + A::abs(cost_[j]))) {
          if (bland) {
            entering = j;
            break;
          }
          if (entering < 0 || d > best) {
            entering = j;
            best = d;
          }
        }
      }
      if (entering < 0) return Status::kOptimal;

      std::vector<T> alpha = ftran(entering);
      int leave = -1;
      T best_ratio{};
      for (int i = 0; i < m_; ++i) {
        if (!(alpha[i] > tol_)) continue;
        T ratio = x_[i] / alpha[i];
        if (leave < 0) {
          leave = i;
          best_ratio = ratio;
          continue;
        }
        T diff = ratio - best_ratio;
        if (diff < -tol_) {
          leave = i;
          best_ratio = ratio;
        } else if (A::abs(diff) <= tol_) {
          bool take;
          if (bland)
            take = basis_[i] < basis_[leave];
          else
            take = alpha[i] > alpha[leave] || (alpha[i] == alpha[leave] && basis_[i] < basis_[leave]);
          if (take) {
            leave = i;
            best_ratio = std::min(ratio, best_ratio);
          }
        }
      }
      if (leave < 0) {
        if (phase_one) {
          out.diagnostic = "unbounded phase-one direction";
          out.status = Status::kNumericalFailure;
          return out.status;
        }
        return Status::kUnbounded;
      }
      if (best_ratio <= tol_) {
        if (++degenerate_streak >= options_.degenerate_streak_limit) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(leave, entering, alpha);
      ++out.iterations;
      if constexpr (!A::kExact) {
        if (++since_refactor >= options_.refactor_every) {
          since_refactor = 0;
          if (!refactor()) {
            out.status = Status::kNumericalFailure;
            out.diagnostic = "singular basis during refactorization";
            return out.status;
          }
        }
      }
    }
  }

  // Pivot zero-valued artificials out of the basis where a structural or
  // slack column can replace them; otherwise the row is redundant and the
  // artificial stays basic at zero.
  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      int best_col = -1;
      T best_abs{};
      for (int j = 0; j < first_artificial_; ++j) {
        if (position_[j] >= 0) continue;
        T v{};
        for (const auto& [k, a] : cols_[j]) v += binv_[idx(r, k)] * a;
        T av = A::abs(v);
        if (av > tol_ && (best_col < 0 || av > best_abs)) {
          best_col = j;
          best_abs = av;
          if constexpr (A::kExact) break;
        }
      }
      if (best_col >= 0) pivot(r, best_col, ftran(best_col));
    }
  }

  bool refactor() {
    if constexpr (A::kExact) {
      return true;
    } else {
      // Gauss-Jordan with partial pivoting on the dense basis matrix.
      std::vector<double> b(static_cast<size_t>(m_) * m_, 0.0), inv(static_cast<size_t>(m_) * m_, 0.0);
      for (int i = 0; i < m_; ++i) {
        for (const auto& [k, a] : cols_[basis_[i]]) b[idx(k, i)] = a;
        inv[idx(i, i)] = 1.0;
      }
      for (int c = 0; c < m_; ++c) {
        int piv = c;
        for (int r = c + 1; r < m_; ++r)
          if (std::fabs(b[idx(r, c)]) > std::fabs(b[idx(piv, c)])) piv = r;
        if (std::fabs(b[idx(piv, c)]) < 1e-14) return false;
        if (piv != c)
          for (int k = 0; k < m_; ++k) {
            std::swap(b[idx(piv, k)], b[idx(c, k)]);
            std::swap(inv[idx(piv, k)], inv[idx(c, k)]);
          }
        double p = b[idx(c, c)];
        for (int k = 0; k < m_; ++k) {
          b[idx(c, k)] /= p;
          inv[idx(c, k)] /= p;
        }
        for (int r = 0; r < m_; ++r) {
          if (r == c) continue;
          double f = b[idx(r, c)];
          if (f == 0.0) continue;
          for (int k = 0; k < m_; ++k) {
            b[idx(r, k)] -= f * b[idx(c, k)];
            inv[idx(r, k)] -= f * inv[idx(c, k)];
          }
        }
      }
      binv_ = std::move(inv);
      for (int i = 0; i < m_; ++i) {
        double v = 0;
        for (int k = 0; k < m_; ++k) v += binv_[idx(i, k)] * rhs_[k];
        x_[i] = (v < 0 && v > -tol_) ? 0.0 : v;
      }
      return true;
    }
  }

  void extract(Solution<T>& out) {
    out.primal.assign(n_, T(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) {
        T v = x_[i];
        if constexpr (!A::kExact) {
          if (std::fabs(v) <= tol_) v = 0;
        }
        out.primal[basis_[i]] = v;
        out.basic_variables.push_back(basis_[i]);
      }
    std::sort(out.basic_variables.begin(), out.basic_variables.end());
    y_ = compute_duals();
    out.duals.resize(problem_.num_rows());
    for (int i = 0; i < problem_.num_rows(); ++i) out.duals[i] = sign_[i] > 0 ? y_[i] : T(-y_[i]);
    out.objective = T(0);
    for (int j = 0; j < n_; ++j) out.objective += problem_.objective[j] * out.primal[j];
    out.status = Status::kOptimal;
  }

  void certify(Solution<T>& out) {
    auto fail = [&](std::string why) {
      out.status = Status::kNumericalFailure;
      out.diagnostic = std::move(why);
    };
    auto slack = [&](const T& scale) { return tol_ * (T(1) + A::abs(scale)); };
    // Primal feasibility.
    for (int j = 0; j < n_; ++j) {
      if (out.primal[j] < -tol_) return fail("negative primal value");
      if (problem_.upper[j] && out.primal[j] > *problem_.upper[j] + slack(*problem_.upper[j]))
        return fail("primal value above its upper bound");
    }
    for (int i = 0; i < problem_.num_rows(); ++i) {
      const auto& row = problem_.rows[i];
      T act{};
      for (const auto& [j, a] : row.entries) act += a * out.primal[j];
      T diff = act - row.rhs;
      if (row.sense == RowSense::kEqual ? A::abs(diff) > slack(row.rhs) : diff > slack(row.rhs))
        return fail("row " + std::to_string(i) + " violated");
    }
    // Dual feasibility. Bound rows carry the duals of the upper bounds.
    T dual_objective{};
    for (int i = 0; i < problem_.num_rows(); ++i) {
      if (problem_.rows[i].sense == RowSense::kLessEqual && out.duals[i] < -tol_)
        return fail("negative dual on an inequality row");
      dual_objective += out.duals[i] * problem_.rows[i].rhs;
    }
    for (int j = 0; j < n_; ++j) {
      T z{};
      if (bound_row_[j] >= 0) {
        int r = bound_row_[j];
        z = sign_[r] > 0 ? y_[r] : T(-y_[r]);
        if (z < -tol_) return fail("negative dual on an upper bound");
        dual_objective += z * *problem_.upper[j];
      }
      T d = problem_.objective[j] - z;
      for (const auto& [i, a] : cols_[j])
        if (i < problem_.num_rows()) d -= (sign_[i] > 0 ? a : T(-a)) * out.duals[i];
      if (d > slack(problem_.objective[j])) return fail("positive reduced cost at optimum");
    }
    if (A::abs(out.objective - dual_objective) > slack(out.objective))
      return fail("duality gap exceeds tolerance");
  }

  struct RowInfo {
    RowSense sense;
    T rhs;
  };

  const Problem<T>& problem_;
  Options options_;
  T tol_{};
  int n_ = 0, m_ = 0, num_cols_ = 0, first_artificial_ = 0;
  std::vector<RowInfo> rows_;
  std::vector<int> sign_, bound_row_, slack_of_row_;
  std::vector<T> rhs_;
  T max_rhs_{};
  std::vector<Entries> cols_;
  std::vector<int> basis_, position_;
  std::vector<T> binv_, x_, cost_, y_;
};

}  // namespace

template <class T>
Solution<T> solve(const Problem<T>& problem, const Options& options) {
  for (const auto& row : problem.rows)
    for (const auto& [j, a] : row.entries)
      if (j < 0 || j >= problem.num_vars())
        return {Status::kNumericalFailure, {}, {}, {}, {}, 0, "coefficient references an undeclared variable"};
  return Simplex<T>(problem, options).run();
}

template Solution<double> solve(const Problem<double>&, const Options&);
template Solution<Rational> solve(const Problem<Rational>&, const Options&);

namespace {
std::string lp_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}
std::string lp_number(const Rational& v) { return lp_number(to_double(v)); }
}  // namespace

template <class T>
void write_lp_format(const Problem<T>& p, std::ostream& out) {
  auto term = [&](bool first, const T& a, int j) {
    std::string coef = lp_number(a);
    if (!first && coef[0] != '-') out << " + ";
    else if (!first) out << " - ", coef.erase(0, 1);
    out << coef << " x" << j;
  };
  out << "Maximize\n obj:";
  bool first = true;
  for (int j = 0; j < p.num_vars(); ++j)
    if (p.objective[j] != T(0)) term(first, p.objective[j], j), first = false;
  if (first) out << " 0 x0";
  out << "\nSubject To\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    out << " r" << i << ":";
    first = true;
    for (const auto& [j, a] : p.rows[i].entries) term(first, a, j), first = false;
    if (first) out << " 0 x0";
    out << (p.rows[i].sense == RowSense::kEqual ? " = " : " <= ") << lp_number(p.rows[i].rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < p.num_vars(); ++j) {
    if (p.upper[j])
      out << " 0 <= x" << j << " <= " << lp_number(*p.upper[j]) << "\n";
    else
      out << " x" << j << " >= 0\n";
  }
  out << "End\n";
}

template void write_lp_format(const Problem<double>&, std::ostream&);
template void write_lp_format(const Problem<Rational>&, std::ostream&);

}  // namespace lprc::lp

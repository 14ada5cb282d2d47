#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lprc/composite.hpp"
#include "lprc/instance.hpp"
#include "lprc/rational.hpp"
#include "lprc/relaxation.hpp"
#include "lprc/rounding.hpp"

namespace lprc {

/// A max k-cover instance: subsets of {0, ..., n-1} and a budget k.
struct KCoverSpec {
  int n = 0;
  std::vector<std::vector<int>> sets;
  int k = 1;
};

/// Empty when the spec is usable.
std::vector<std::string> validate_kcover(const KCoverSpec& spec);

/// The hardness-reduction instance: nodes "o<i>_1", "o<i>_2" (1-based i),
/// one unit-demand OD per element, k unit-capacity buses sharing lines
/// "G1".."GL" plus "dummy", unit rewards, zero costs, K = 1.
Instance gen_kcover_instance(const KCoverSpec& spec);

enum class CostRegime { kZero, kSmall, kGeneral };

const char* to_string(CostRegime regime);

struct RandomConfig {
  int buses = 3;
  int grid_width = 4;
  int grid_height = 3;
  int lines = 3;
  int min_line_arcs = 2;
  int max_line_arcs = 5;
  int od_pairs = 5;
  int min_demand = 1;
  int max_demand = 3;
  /// Split evenly across buses in order.
  std::vector<int> capacities = {2, 3};
  int K = 1;
  /// Candidate lines per bus (0: all lines). The dummy is always added.
  int lines_per_bus = 0;
  CostRegime regime = CostRegime::kZero;
  /// SMALL regime: every cost is at most eta^3 / (256 K^3).
  Rational eta = Rational(1, 5);
  /// GENERAL regime: probability that a (bus, line) costs nothing.
  double free_line_probability = 0.3;
  int max_attempts = 50;
};

/// Random grid network with self-avoiding walk lines. Reward per unit is
/// max{0, (1.5 D_s - D_l) / sqrt(C_b)} rounded to a multiple of 1/10000,
/// with unit arc lengths. Throws PreconditionError on a bad config and
/// Error when no servable OD pair is found within `max_attempts`.
Instance gen_random_instance(const RandomConfig& config, std::uint64_t seed);

/// Per-unit reward rule with D_s, D_l in arc counts.
Rational distance_reward(int shortest, int on_line, int capacity);

struct AlgorithmSpec {
  enum class Kind { kNC, kLC, kC, kCTol };
  Kind kind = Kind::kNC;
  Rational eta = Rational(1, 5);
  Rational tau = Rational(1, 10);
  CompositeOptions options;
};

const char* to_string(AlgorithmSpec::Kind kind);
AlgorithmSpec::Kind parse_algorithm(const std::string& name);

struct Trial {
  std::uint64_t seed = 0;
  Rational reward;
  bool discarded = false;
  std::vector<Rational> usage;
};

struct TrialStats {
  int trials = 0;
  std::vector<Trial> per_trial;
  std::vector<double> rewards;
  double mean = 0.0;
  double stderr_ = 0.0;
  double best = 0.0;
  int discards = 0;
  int violations = 0;
};

/// Mean, standard error (sample deviation / sqrt(T)) and max of `rewards`,
/// summed in index order.
void compute_stats(TrialStats& stats);

struct TrialReport {
  AlgorithmSpec algorithm;
  std::uint64_t base_seed = 0;
  /// Gamma of the plan being rounded.
  Rational gamma;
  std::optional<CompositeSetup> composite;
  std::optional<Rational> opt;
  /// The guarantee for this algorithm, when its reference value is known.
  std::optional<double> bound;
  std::string bound_label;
  Rational audit_budget;
  TrialStats stats;
};

struct TrialOptions {
  int trials = 1000;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  /// OPT_IP, needed for the C and C-Tol bound lines.
  std::optional<Rational> opt;
};

/// Runs seeded trials (seed_i = base_seed + i), auditing each plan against
/// the raw instance. A failed audit throws AuditFailure.
TrialReport run_trials(const IndexedInstance& instance, const AlgorithmSpec& algorithm, const TrialOptions& options);

/// One row per trial: seed,reward,discarded,usage_1..usage_K.
std::string trials_csv(const TrialReport& report, int K);

}  // namespace lprc

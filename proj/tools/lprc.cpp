// lprc: command-line front end for the LPRC solver library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include "lprc/composite.hpp"
#include "lprc/errors.hpp"
#include "lprc/genbench.hpp"
#include "lprc/instance.hpp"
#include "lprc/oracle.hpp"
#include "lprc/relaxation.hpp"
#include "lprc/report.hpp"

namespace {

using namespace lprc;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitLimit = 2;

/// Exit code carrier for failures already reported.
struct Exit {
  int code;
};

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, "cannot write file");
  out << text;
}

void diagnostic(const std::string& kind, const std::string& message, const std::string& location = {}) {
  Json d;
  d["error"] = kind;
  d["message"] = message;
  if (!location.empty()) d["location"] = location;
  std::cerr << d.dump() << "\n";
}

Instance load_valid(const std::string& path) {
  Instance in = load_instance(read_text(path));
  auto violations = validate(in);
  if (!violations.empty()) {
    std::cerr << violations_json(violations).dump() << "\n";
    throw Exit{kExitInput};
  }
  return in;
}

Json envelope(const std::string& command, Json config, Json result) {
  Json out;
  out["tool"] = "lprc";
  out["version"] = version();
  out["command"] = command;
  out["config"] = std::move(config);
  out["result"] = std::move(result);
  return out;
}

LpMode parse_mode(const std::string& s) {
  if (s == "float") return LpMode::kFloat;
  if (s == "exact") return LpMode::kExact;
  throw PreconditionError("--lp-mode must be float or exact");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

PartialAssignment parse_omega(const IndexedInstance& in, const std::string& text) {
  PartialAssignment omega;
  for (const std::string& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("--omega", "expected bus=line, got '" + item + "'");
    int b = in.bus_index(item.substr(0, eq)), l = in.line_index(item.substr(eq + 1));
    if (b < 0) throw ParseError("--omega", "unknown bus '" + item.substr(0, eq) + "'");
    if (l < 0) throw ParseError("--omega", "unknown line '" + item.substr(eq + 1) + "'");
    omega.emplace_back(b, l);
  }
  std::sort(omega.begin(), omega.end());
  return omega;
}

struct Common {
  std::string out = "-";
  std::string lp_mode = "float";
  std::size_t enum_cap = kDefaultEnumerationCap;
  int jobs = 1;

  CompositeOptions options() const {
    CompositeOptions o;
    o.relaxation.mode = parse_mode(lp_mode);
    o.enumeration_cap = enum_cap;
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output path, '-' for stdout")->capture_default_str();
  cmd->add_option("--lp-mode", c.lp_mode, "float or exact")->capture_default_str();
  cmd->add_option("--enum-cap", c.enum_cap, "Cap on high-cost assignments enumerated")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Concurrent trial workers")->capture_default_str()->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string path;
  std::string od_csv;
  Common common;
};

int cmd_validate(const ValidateArgs& a) {
  Instance in = load_instance(read_text(a.path));
  if (!a.od_csv.empty()) in.od_pairs = load_od_csv(read_text(a.od_csv), in.network);
  auto violations = validate(in);
  Json config{{"instance", a.path}};
  if (!a.od_csv.empty()) config["od_csv"] = a.od_csv;
  Json result = violations_json(violations);
  result["buses"] = in.num_buses();
  result["lines"] = in.lines.size();
  result["od_pairs"] = in.num_ods();
  write_text(a.common.out, dump(envelope("validate", config, result)));
  return violations.empty() ? kExitOk : kExitInput;
}

struct RelaxArgs {
  std::string path;
  std::string restriction = "full";
  std::string delta;
  std::string tau;
  std::string omega;
  Common common;
};

int cmd_relax(const RelaxArgs& a) {
  IndexedInstance in(load_valid(a.path));
  Restriction r;
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw PreconditionError(std::string(flag) + " is required for this restriction");
    return parse_rational(v);
  };
  if (a.restriction == "full") {
    r = Restriction::full();
  } else if (a.restriction == "fixed") {
    r = Restriction::fixed(parse_omega(in, a.omega));
  } else if (a.restriction == "low-cost") {
    r = Restriction::low_cost(need(a.delta, "--delta"));
  } else if (a.restriction == "modified") {
    r = Restriction::modified(need(a.delta, "--delta"), need(a.tau, "--tau"), parse_omega(in, a.omega));
  } else {
    throw PreconditionError("--restriction must be full, fixed, low-cost or modified");
  }
  RelaxationOptions opt = a.common.options().relaxation;
  FractionalPlan plan = solve_relaxation(in, r, opt);
  Json config{{"instance", a.path}, {"restriction", restriction_json(in, r)}, {"lp_mode", a.common.lp_mode}};
  write_text(a.common.out, dump(envelope("relax", config, fractional_plan_json(in, plan))));
  return kExitOk;
}

struct RoundArgs {
  std::string path;
  std::string algorithm = "NC";
  std::string eta = "0.2";
  std::string tau = "0.1";
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string csv;
  bool with_oracle = false;
  bool budget_audit = false;
  Common common;
};

int cmd_round(const RoundArgs& a) {
  IndexedInstance in(load_valid(a.path));
  AlgorithmSpec spec;
  spec.kind = parse_algorithm(a.algorithm);
  spec.eta = parse_rational(a.eta);
  spec.tau = parse_rational(a.tau);
  spec.options = a.common.options();
  TrialOptions opt;
  opt.trials = a.trials;
  opt.base_seed = a.seed;
  opt.jobs = a.common.jobs;
  if (a.with_oracle) opt.opt = solve_exact(in).opt_value;
  TrialReport report = run_trials(in, spec, opt);

  Json config{{"instance", a.path},
              {"algorithm", to_string(spec.kind)},
              {"eta", rational_json(spec.eta)},
              {"tau", rational_json(spec.tau)},
              {"trials", a.trials},
              {"seed", a.seed},
              {"jobs", a.common.jobs},
              {"lp_mode", a.common.lp_mode},
              {"enum_cap", a.common.enum_cap},
              {"with_oracle", a.with_oracle}};
  Json result = trial_report_json(in, report);
  if (a.budget_audit) {
    Json audit = Json::array();
    for (int k = 0; k < in.K(); ++k) {
      Rational worst = 0;
      for (const Trial& t : report.stats.per_trial) worst = std::max(worst, t.usage[k]);
      audit.push_back({{"k", k + 1}, {"max_usage", rational_json(worst)}, {"budget", rational_json(report.audit_budget)}});
    }
    result["budget_audit"] = audit;
  }
  write_text(a.common.out, dump(envelope("round", config, result)));
  if (!a.csv.empty()) write_text(a.csv, trials_csv(report, in.K()));
  return kExitOk;
}

struct OracleArgs {
  std::string path;
  std::uint64_t max_assignments = OracleLimits{}.max_line_assignments;
  std::uint64_t max_nodes = OracleLimits{}.max_allocation_nodes;
  bool no_prune = false;
  Common common;
};

int cmd_oracle(const OracleArgs& a) {
  IndexedInstance in(load_valid(a.path));
  OracleLimits limits{a.max_assignments, a.max_nodes, !a.no_prune};
  OracleResult r = solve_exact(in, limits);
  Json config{{"instance", a.path},
              {"max_assignments", a.max_assignments},
              {"max_nodes", a.max_nodes},
              {"prune", !a.no_prune}};
  write_text(a.common.out, dump(envelope("oracle", config, oracle_result_json(in, r))));
  return kExitOk;
}

struct GenArgs {
  std::string kind = "random";
  std::uint64_t seed = 0;
  RandomConfig random;
  std::string regime = "zero";
  std::string eta = "0.2";
  std::string capacities = "2,3";
  std::string demand = "1:3";
  std::string grid = "4x3";
  std::string line_arcs = "2:5";
  int n = 0;
  std::string sets;
  int k = 1;
  Common common;
};

std::pair<int, int> parse_range(const std::string& text, char sep, const char* flag) {
  auto pos = text.find(sep);
  try {
    if (pos == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 1))};
  } catch (const std::exception&) {
    throw ParseError(flag, "malformed range '" + text + "'");
  }
}

KCoverSpec parse_kcover(int n, const std::string& sets, int k) {
  KCoverSpec spec;
  spec.n = n;
  spec.k = k;
  for (const std::string& group : split(sets, ';')) {
    std::vector<int> g;
    for (const std::string& e : split(group, ',')) {
      try {
        g.push_back(std::stoi(e) - 1);
      } catch (const std::exception&) {
        throw ParseError("--sets", "malformed element '" + e + "'");
      }
    }
    spec.sets.push_back(g);
  }
  return spec;
}

int cmd_gen(GenArgs a) {
  Json config{{"kind", a.kind}, {"seed", a.seed}};
  Instance in;
  if (a.kind == "kcover") {
    KCoverSpec spec = parse_kcover(a.n, a.sets, a.k);
    config["n"] = a.n;
    config["sets"] = a.sets;
    config["k"] = a.k;
    in = gen_kcover_instance(spec);
  } else if (a.kind == "random") {
    RandomConfig& c = a.random;
    std::tie(c.grid_width, c.grid_height) = parse_range(a.grid, 'x', "--grid");
    std::tie(c.min_demand, c.max_demand) = parse_range(a.demand, ':', "--demand");
    std::tie(c.min_line_arcs, c.max_line_arcs) = parse_range(a.line_arcs, ':', "--line-arcs");
    c.capacities.clear();
    for (const std::string& s : split(a.capacities, ',')) c.capacities.push_back(parse_range(s, ':', "--capacities").first);
    if (a.regime == "zero") c.regime = CostRegime::kZero;
    else if (a.regime == "small") c.regime = CostRegime::kSmall;
    else if (a.regime == "general") c.regime = CostRegime::kGeneral;
    else throw PreconditionError("--regime must be zero, small or general");
    c.eta = parse_rational(a.eta);
    config["buses"] = c.buses;
    config["grid"] = a.grid;
    config["lines"] = c.lines;
    config["line_arcs"] = a.line_arcs;
    config["od_pairs"] = c.od_pairs;
    config["demand"] = a.demand;
    config["capacities"] = c.capacities;
    config["K"] = c.K;
    config["lines_per_bus"] = c.lines_per_bus;
    config["regime"] = a.regime;
    config["eta"] = rational_json(c.eta);
    in = gen_random_instance(c, a.seed);
  } else {
    throw PreconditionError("gen kind must be random or kcover");
  }
  write_text(a.common.out, save_instance(in));
  std::cerr << envelope("gen", config, Json{{"buses", in.num_buses()}, {"od_pairs", in.num_ods()}}).dump() << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::string suite = "kcover";
  int count = 5;
  int trials = 1000;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string eta = "0.2";
  std::string tau = "0.1";
  Common common;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<std::pair<std::string, Instance>> suite;
  std::mt19937_64 gen(a.seed);
  std::string algo_name = a.algorithm;
  if (a.suite == "kcover") {
    for (int i = 0; i < a.count; ++i) {
      KCoverSpec spec;
      spec.n = 4 + static_cast<int>(gen() % 6);
      int L = 2 + static_cast<int>(gen() % 4);
      for (int j = 0; j < L; ++j) {
        std::vector<int> g;
        for (int e = 0; e < spec.n; ++e)
          if (gen() % 3 == 0) g.push_back(e);
        if (g.empty()) g.push_back(static_cast<int>(gen() % spec.n));
        spec.sets.push_back(g);
      }
      spec.k = 1 + static_cast<int>(gen() % std::min(3, L));
      suite.emplace_back("kcover-" + std::to_string(i), gen_kcover_instance(spec));
    }
    if (algo_name.empty()) algo_name = "NC";
  } else {
    RandomConfig c;
    if (a.suite == "zero") c.regime = CostRegime::kZero;
    else if (a.suite == "small") c.regime = CostRegime::kSmall;
    else if (a.suite == "general") c.regime = CostRegime::kGeneral;
    else throw PreconditionError("--suite must be kcover, zero, small or general");
    c.eta = parse_rational(a.eta);
    for (int i = 0; i < a.count; ++i)
      suite.emplace_back(a.suite + "-" + std::to_string(i), gen_random_instance(c, a.seed + i));
    if (algo_name.empty()) algo_name = c.regime == CostRegime::kZero ? "NC" : c.regime == CostRegime::kSmall ? "LC" : "C";
  }

  AlgorithmSpec spec;
  spec.kind = parse_algorithm(algo_name);
  spec.eta = parse_rational(a.eta);
  spec.tau = parse_rational(a.tau);
  spec.options = a.common.options();
  Json rows = Json::array();
  for (size_t i = 0; i < suite.size(); ++i) {
    IndexedInstance in(suite[i].second);
    Rational opt = solve_exact(in).opt_value;
    Rational gamma = solve_relaxation(in, Restriction::full(), spec.options.relaxation).gamma_value();
    TrialOptions topt;
    topt.trials = a.trials;
    topt.base_seed = a.seed;
    topt.jobs = a.common.jobs;
    topt.opt = opt;
    TrialReport r = run_trials(in, spec, topt);
    Json row;
    row["instance"] = suite[i].first;
    row["gamma"] = to_double(gamma);
    row["opt"] = rational_json(opt);
    row["mean"] = r.stats.mean;
    row["stderr"] = r.stats.stderr_;
    row["best"] = r.stats.best;
    row["best_over_opt"] = opt > 0 ? r.stats.best / to_double(opt) : 1.0;
    row["bound_label"] = r.bound_label;
    row["bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
    row["discards"] = r.stats.discards;
    rows.push_back(row);
  }
  Json config{{"suite", a.suite},     {"count", a.count}, {"trials", a.trials},
              {"seed", a.seed},       {"algorithm", to_string(spec.kind)},
              {"eta", rational_json(spec.eta)}, {"tau", rational_json(spec.tau)},
              {"lp_mode", a.common.lp_mode}};
  write_text(a.common.out, dump(envelope("bench", config, Json{{"rows", rows}})));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line planning with resource constraints: LP relaxation, randomized rounding, exact oracle"};
  app.set_version_flag("--version", std::string("lprc ") + lprc::version());
  app.require_subcommand(1);

  ValidateArgs va;
  auto* v = app.add_subcommand("validate", "Check an instance file");
  v->add_option("instance", va.path, "Instance JSON, '-' for stdin")->required();
  v->add_option("--od-csv", va.od_csv, "Replace OD pairs with this CSV");
  v->add_option("--out", va.common.out, "Output path")->capture_default_str();

  RelaxArgs ra;
  auto* r = app.add_subcommand("relax", "Solve the LP relaxation by column generation");
  r->add_option("instance", ra.path)->required();
  r->add_option("--restriction", ra.restriction, "full, fixed, low-cost or modified")->capture_default_str();
  r->add_option("--delta", ra.delta, "Low-cost threshold");
  r->add_option("--tau", ra.tau, "Budget tolerance for the modified LP");
  r->add_option("--omega", ra.omega, "Fixed assignment bus=line,...");
  add_common(r, ra.common);

  RoundArgs rd;
  auto* rn = app.add_subcommand("round", "Run seeded rounding trials");
  rn->add_option("instance", rd.path)->required();
  rn->add_option("--algorithm", rd.algorithm, "NC, LC, C or C-Tol")->capture_default_str();
  rn->add_option("--eta", rd.eta)->capture_default_str();
  rn->add_option("--tau", rd.tau)->capture_default_str();
  rn->add_option("--trials", rd.trials)->capture_default_str()->check(CLI::PositiveNumber);
  rn->add_option("--seed", rd.seed, "Base seed; trial i uses seed + i")->capture_default_str();
  rn->add_option("--csv", rd.csv, "Per-trial CSV output path");
  rn->add_flag("--with-oracle", rd.with_oracle, "Solve the instance exactly to report OPT-based bounds");
  rn->add_flag("--budget-audit", rd.budget_audit, "Report the worst per-resource usage seen");
  add_common(rn, rd.common);

  OracleArgs oa;
  auto* o = app.add_subcommand("oracle", "Solve the integer program exactly");
  o->add_option("instance", oa.path)->required();
  o->add_option("--max-assignments", oa.max_assignments)->capture_default_str();
  o->add_option("--max-nodes", oa.max_nodes)->capture_default_str();
  o->add_flag("--no-prune", oa.no_prune, "Disable upper-bound pruning");
  o->add_option("--out", oa.common.out)->capture_default_str();

  GenArgs ga;
  auto* g = app.add_subcommand("gen", "Generate an instance");
  g->add_option("kind", ga.kind, "random or kcover")->capture_default_str();
  g->add_option("--seed", ga.seed)->capture_default_str();
  g->add_option("--buses", ga.random.buses)->capture_default_str();
  g->add_option("--grid", ga.grid, "WxH")->capture_default_str();
  g->add_option("--lines", ga.random.lines)->capture_default_str();
  g->add_option("--line-arcs", ga.line_arcs, "min:max arcs per line")->capture_default_str();
  g->add_option("--od-pairs", ga.random.od_pairs)->capture_default_str();
  g->add_option("--demand", ga.demand, "min:max")->capture_default_str();
  g->add_option("--capacities", ga.capacities, "Comma-separated capacity multiset")->capture_default_str();
  g->add_option("--K", ga.random.K)->capture_default_str();
  g->add_option("--lines-per-bus", ga.random.lines_per_bus, "0 for all")->capture_default_str();
  g->add_option("--regime", ga.regime, "zero, small or general")->capture_default_str();
  g->add_option("--eta", ga.eta, "Cost scale for the small regime")->capture_default_str();
  g->add_option("--n", ga.n, "k-cover element count");
  g->add_option("--sets", ga.sets, "k-cover sets, 1-based, e.g. '1,3,9;2,4'");
  g->add_option("--k", ga.k, "k-cover budget")->capture_default_str();
  g->add_option("--out", ga.common.out)->capture_default_str();

  BenchArgs ba;
  auto* b = app.add_subcommand("bench", "Compare rounding against Gamma, OPT and the guarantees on a suite");
  b->add_option("--suite", ba.suite, "kcover, zero, small or general")->capture_default_str();
  b->add_option("--count", ba.count)->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--trials", ba.trials)->capture_default_str()->check(CLI::PositiveNumber);
  b->add_option("--seed", ba.seed)->capture_default_str();
  b->add_option("--algorithm", ba.algorithm, "Defaults by suite");
  b->add_option("--eta", ba.eta)->capture_default_str();
  b->add_option("--tau", ba.tau)->capture_default_str();
  add_common(b, ba.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*v) return cmd_validate(va);
    if (*r) return cmd_relax(ra);
    if (*rn) return cmd_round(rd);
    if (*o) return cmd_oracle(oa);
    if (*g) return cmd_gen(ga);
    if (*b) return cmd_bench(ba);
  } catch (const Exit& e) {
    return e.code;
  } catch (const ParseError& e) {
    diagnostic("parse", e.what(), e.location());
    return kExitInput;
  } catch (const PreconditionError& e) {
    diagnostic("precondition", e.what());
    return kExitInput;
  } catch (const LimitExceeded& e) {
    diagnostic("limit", e.what());
    return kExitLimit;
  } catch (const NumericalError& e) {
    diagnostic("numerical", e.what());
    return kExitInput;
  } catch (const AuditFailure& e) {
    diagnostic("audit", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    diagnostic("error", e.what());
    return kExitInput;
  }
  return kExitInput;
}

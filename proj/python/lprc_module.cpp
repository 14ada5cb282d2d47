// Python bindings. Every call takes and returns JSON text; the Python
// package converts to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>
#include <optional>
#include <string>

#include "lprc/errors.hpp"
#include "lprc/genbench.hpp"
#include "lprc/oracle.hpp"
#include "lprc/report.hpp"

namespace py = pybind11;
using namespace lprc;

namespace {

IndexedInstance load_checked(const std::string& text) {
  Instance in = load_instance(text);
  auto violations = validate(in);
  if (!violations.empty()) throw PreconditionError("invalid instance: " + violations_json(violations).dump());
  return IndexedInstance(std::move(in));
}

LpMode parse_mode(const std::string& s) {
  if (s == "float") return LpMode::kFloat;
  if (s == "exact") return LpMode::kExact;
  throw PreconditionError("lp_mode must be float or exact");
}

PartialAssignment to_omega(const IndexedInstance& in, const std::map<std::string, std::string>& omega) {
  PartialAssignment out;
  for (const auto& [bus, line] : omega) {
    int b = in.bus_index(bus), l = in.line_index(line);
    if (b < 0) throw PreconditionError("unknown bus '" + bus + "'");
    if (l < 0) throw PreconditionError("unknown line '" + line + "'");
    out.emplace_back(b, l);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string validate_text(const std::string& text) { return dump(violations_json(validate(load_instance(text)))); }

std::string relax(const std::string& text, const std::string& restriction, const std::optional<std::string>& delta,
                  const std::optional<std::string>& tau, const std::map<std::string, std::string>& omega,
                  const std::string& lp_mode) {
  IndexedInstance in = load_checked(text);
  auto need = [](const std::optional<std::string>& v, const char* name) {
    if (!v) throw PreconditionError(std::string(name) + " is required for this restriction");
    return parse_rational(*v);
  };
  Restriction r;
  if (restriction == "full") {
    r = Restriction::full();
  } else if (restriction == "fixed") {
    r = Restriction::fixed(to_omega(in, omega));
  } else if (restriction == "low-cost") {
    r = Restriction::low_cost(need(delta, "delta"));
  } else if (restriction == "modified") {
    r = Restriction::modified(need(delta, "delta"), need(tau, "tau"), to_omega(in, omega));
  } else {
    throw PreconditionError("restriction must be full, fixed, low-cost or modified");
  }
  RelaxationOptions opt;
  opt.mode = parse_mode(lp_mode);
  FractionalPlan plan;
  {
    py::gil_scoped_release release;
    plan = solve_relaxation(in, r, opt);
  }
  return dump(fractional_plan_json(in, plan));
}

std::string round_trials(const std::string& text, const std::string& algorithm, const std::string& eta,
                         const std::string& tau, int trials, std::uint64_t seed, int jobs, const std::string& lp_mode,
                         bool with_oracle, std::size_t enum_cap) {
  IndexedInstance in = load_checked(text);
  AlgorithmSpec spec;
  spec.kind = parse_algorithm(algorithm);
  spec.eta = parse_rational(eta);
  spec.tau = parse_rational(tau);
  spec.options.relaxation.mode = parse_mode(lp_mode);
  spec.options.enumeration_cap = enum_cap;
  TrialOptions opt;
  opt.trials = trials;
  opt.base_seed = seed;
  opt.jobs = jobs;
  TrialReport report;
  {
    py::gil_scoped_release release;
    if (with_oracle) opt.opt = solve_exact(in).opt_value;
    report = run_trials(in, spec, opt);
  }
  return dump(trial_report_json(in, report));
}

std::string trials_csv_text(const std::string& text, const std::string& algorithm, const std::string& eta,
                            const std::string& tau, int trials, std::uint64_t seed) {
  IndexedInstance in = load_checked(text);
  AlgorithmSpec spec;
  spec.kind = parse_algorithm(algorithm);
  spec.eta = parse_rational(eta);
  spec.tau = parse_rational(tau);
  TrialOptions opt;
  opt.trials = trials;
  opt.base_seed = seed;
  return trials_csv(run_trials(in, spec, opt), in.K());
}

std::string oracle(const std::string& text, std::uint64_t max_assignments, std::uint64_t max_nodes, bool prune) {
  IndexedInstance in = load_checked(text);
  OracleResult r;
  {
    py::gil_scoped_release release;
    r = solve_exact(in, OracleLimits{max_assignments, max_nodes, prune});
  }
  return dump(oracle_result_json(in, r));
}

CostRegime parse_regime(const std::string& s) {
  if (s == "zero") return CostRegime::kZero;
  if (s == "small") return CostRegime::kSmall;
  if (s == "general") return CostRegime::kGeneral;
  throw PreconditionError("regime must be zero, small or general");
}

std::string gen_random(std::uint64_t seed, const std::string& config_json) {
  Json j = Json::parse(config_json);
  RandomConfig c;
  c.buses = j.value("buses", c.buses);
  c.grid_width = j.value("grid_width", c.grid_width);
  c.grid_height = j.value("grid_height", c.grid_height);
  c.lines = j.value("lines", c.lines);
  c.min_line_arcs = j.value("min_line_arcs", c.min_line_arcs);
  c.max_line_arcs = j.value("max_line_arcs", c.max_line_arcs);
  c.od_pairs = j.value("od_pairs", c.od_pairs);
  c.min_demand = j.value("min_demand", c.min_demand);
  c.max_demand = j.value("max_demand", c.max_demand);
  c.capacities = j.value("capacities", c.capacities);
  c.K = j.value("K", c.K);
  c.lines_per_bus = j.value("lines_per_bus", c.lines_per_bus);
  c.regime = parse_regime(j.value("regime", std::string("zero")));
  if (j.contains("eta")) c.eta = parse_rational(j["eta"].get<std::string>());
  c.free_line_probability = j.value("free_line_probability", c.free_line_probability);
  c.max_attempts = j.value("max_attempts", c.max_attempts);
  return save_instance(gen_random_instance(c, seed));
}

std::string gen_kcover(int n, const std::vector<std::vector<int>>& sets, int k) {
  KCoverSpec spec{n, sets, k};
  return save_instance(gen_kcover_instance(spec));
}

}  // namespace

PYBIND11_MODULE(_lprc, m) {
  m.doc() = "Line planning with resource constraints (JSON-text interface)";

  static py::exception<LimitExceeded> limit_exc(m, "LimitExceeded", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const LimitExceeded& e) {
      py::set_error(limit_exc, e.what());
    } catch (const PreconditionError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const ParseError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const nlohmann::json::exception& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def("version", [] { return std::string(version()); });
  m.def("validate", &validate_text, py::arg("instance"));
  m.def("relax", &relax, py::arg("instance"), py::arg("restriction") = "full", py::arg("delta") = py::none(),
        py::arg("tau") = py::none(), py::arg("omega") = std::map<std::string, std::string>{},
        py::arg("lp_mode") = "float");
  m.def("round", &round_trials, py::arg("instance"), py::arg("algorithm") = "NC", py::arg("eta") = "0.2",
        py::arg("tau") = "0.1", py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("jobs") = 1,
        py::arg("lp_mode") = "float", py::arg("with_oracle") = false, py::arg("enum_cap") = kDefaultEnumerationCap);
  m.def("trials_csv", &trials_csv_text, py::arg("instance"), py::arg("algorithm") = "NC", py::arg("eta") = "0.2",
        py::arg("tau") = "0.1", py::arg("trials") = 1000, py::arg("seed") = 0);
  m.def("oracle", &oracle, py::arg("instance"), py::arg("max_assignments") = OracleLimits{}.max_line_assignments,
        py::arg("max_nodes") = OracleLimits{}.max_allocation_nodes, py::arg("prune") = true);
  m.def("gen_random", &gen_random, py::arg("seed") = 0, py::arg("config") = "{}");
  m.def("gen_kcover", &gen_kcover, py::arg("n"), py::arg("sets"), py::arg("k"));
}

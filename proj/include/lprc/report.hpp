#pragma once

#include <nlohmann/json.hpp>

#include "lprc/composite.hpp"
#include "lprc/genbench.hpp"
#include "lprc/instance.hpp"
#include "lprc/oracle.hpp"
#include "lprc/relaxation.hpp"
#include "lprc/rounding.hpp"

namespace lprc {

using Json = nlohmann::ordered_json;

inline const char* version() { return LPRC_VERSION; }

/// Exact values are written as strings ("0.25", "1/3").
Json rational_json(const Rational& r);

Json restriction_json(const IndexedInstance& instance, const Restriction& restriction);
Json fractional_plan_json(const IndexedInstance& instance, const FractionalPlan& plan);
Json integral_plan_json(const IndexedInstance& instance, const IntegralPlan& plan);
Json oracle_result_json(const IndexedInstance& instance, const OracleResult& result);
Json composite_setup_json(const IndexedInstance& instance, const CompositeSetup& setup);
Json trial_report_json(const IndexedInstance& instance, const TrialReport& report);
Json violations_json(const std::vector<Violation>& violations);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& json);

}  // namespace lprc

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "libdex/scoring.hpp"

namespace libdex {

/// Two decimals, half away from zero. The only place index values are rounded.
std::string display(const Rational& value);

/// Table-style rendering: explicit '+' on positive values, trailing zeros trimmed ("+0.5", "-0.67", "0").
std::string display_signed(const Rational& value);

nlohmann::json weights_to_json_map(const WeightVector& weights);

/// Full IndexReport; every rational appears as a float, an exact "p/q" string and a 2-decimal display string.
nlohmann::json report_to_json(const IndexReport& report);

/// One row per attribute (id, name, m_i, mean, weight, contribution) and a footer with total and bounds.
std::string report_to_csv(const IndexReport& report);

/// Side-by-side table of attribute means and criterion ratings, one column per report.
std::string comparison_markdown(const Catalog& catalog, const std::vector<IndexReport>& reports);

nlohmann::json sensitivity_to_json(const SensitivityResult& result);

}  // namespace libdex

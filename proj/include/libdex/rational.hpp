#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"

namespace libdex {

/// Exact rational number used for ratings, ranks, weights and index totals.
/// Rounding happens only when a value is rendered for display.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-1.25", "1e-3" or "47/6" exactly.
Rational parse_rational(std::string_view text);

/// "85/12", "-2", "3/4".
std::string to_exact_string(const Rational& value);

/// Decimal rendering rounded half away from zero, e.g. to_fixed(85/12, 2) == "7.08".
std::string to_fixed(const Rational& value, int decimals);

double to_double(const Rational& value);

/// True when the value has a finite decimal expansion of at most 15 significant digits.
bool is_short_decimal(const Rational& value);

/// Integers become JSON integers, short decimals JSON numbers, anything else a "p/q" string.
nlohmann::json rational_to_json(const Rational& value);

/// Accepts JSON numbers (read back through their shortest decimal form) and strings.
Rational rational_from_json(const nlohmann::json& value);

Rational abs(const Rational& value);

}  // namespace libdex

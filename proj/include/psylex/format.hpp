#pragma once

#include <optional>
#include <string>

namespace psylex {

// Fixed report formatting: 6 significant digits, '.' decimal separator,
// independent of the global locale.
std::string format_number(double value);
std::string format_number(const std::optional<double>& value);

// Rounds to the value that format_number would print.
double round_significant(double value);

}  // namespace psylex

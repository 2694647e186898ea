#include "psylex/format.hpp"

#include <charconv>
#include <cmath>

namespace psylex {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 6);
  return std::string(buf, ptr);
}

std::string format_number(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

double round_significant(double value) {
  if (!std::isfinite(value)) return value;
  const std::string text = format_number(value);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

}  // namespace psylex

#include <algorithm>
#include <cmath>

#include "psylex/error.hpp"
#include "psylex/stats.hpp"

namespace psylex::stats {

std::string_view to_string(Correction correction) {
  return correction == Correction::bonferroni ? "bonferroni"
                                              : "benjamini_hochberg";
}

Correction parse_correction(std::string_view s) {
  if (s == "bonferroni") return Correction::bonferroni;
  if (s == "benjamini_hochberg") return Correction::benjamini_hochberg;
  throw ConfigError("unknown correction '" + std::string(s) + "'");
}

double bonferroni(double p, std::size_t m) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DataError("p-value must lie in [0, 1]");
  if (m < 1) throw DataError("comparison count must be at least 1");
  return std::min(1.0, p * static_cast<double>(m));
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.empty()) throw DataError("cannot normalize an empty list");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double max = *hi;
  std::vector<double> out(values.size());
  if (max == min) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = std::clamp((values[i] - min) / (max - min), 0.0, 1.0);
  return out;
}

}  // namespace psylex::stats

#include "psylex/style.hpp"

#include <cmath>

#include "psylex/error.hpp"

namespace psylex {

std::optional<double> language_style_matching(const CategoryScores& agent,
                                              const CategoryScores& partner) {
  if (agent.values.size() != partner.values.size())
    throw ConfigError("style matching needs the same categories on both sides");
  if (agent.values.empty())
    throw ConfigError("style matching needs at least one category");
  if (agent.degenerate || partner.degenerate) return std::nullopt;

  double sum = 0.0;
  auto p = partner.values.begin();
  for (const auto& [category, a] : agent.values) {
    if (p->first != category)
      throw ConfigError("style matching category '" + category +
                        "' is missing on the partner side");
    const double b = p->second;
    sum += 1.0 - std::abs(a - b) / (a + b + kStyleMatchingEpsilon);
    ++p;
  }
  return sum / static_cast<double>(agent.values.size());
}

}  // namespace psylex

#pragma once

#include <optional>

#include "psylex/features.hpp"

namespace psylex {

inline constexpr double kStyleMatchingEpsilon = 0.0001;

// Per category: 1 - |a - p| / (a + p + epsilon), averaged without weights.
// nullopt when either side comes from empty text. Throws ConfigError when the
// two sides have different category sets or no categories.
std::optional<double> language_style_matching(const CategoryScores& agent,
                                              const CategoryScores& partner);

}  // namespace psylex

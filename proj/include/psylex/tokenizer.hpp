#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace psylex {

using TokenSequence = std::vector<std::string>;

// Splits UTF-8 text into lowercase tokens. A token is a maximal run of
// letters, digits and apostrophes (U+0027, or U+2019 which is folded to
// U+0027); every other character separates tokens. Invalid UTF-8 bytes are
// separators.
TokenSequence tokenize(std::string_view text);

// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters.
std::string to_lower(std::string_view text);

}  // namespace psylex

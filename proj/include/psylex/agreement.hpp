#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psylex/corpus.hpp"

namespace psylex {

enum class Difference { linear, interval, nominal };

std::string_view to_string(Difference difference);
Difference parse_difference(std::string_view s);

// Rows are annotators, columns are units; nullopt marks a missing rating.
// Rows may be ragged; absent trailing cells count as missing.
using ReliabilityMatrix = std::vector<std::vector<std::optional<double>>>;

// Krippendorff's alpha from the coincidence matrix:
//   alpha = 1 - (n - 1) * sum_ck o_ck d(c,k) / sum_ck n_c n_k d(c,k)
// where o_ck counts ordered value pairs within units, each unit weighted by
// 1 / (m_u - 1), and n is the number of pairable values. Units with fewer
// than two ratings do not contribute.
//
// Throws DataError when fewer than two units carry two or more ratings.
// Returns 1.0 when expected disagreement is zero.
double krippendorff_alpha(const ReliabilityMatrix& reliability,
                          Difference difference);

struct AgreementReport {
  Level level = Level::turn;
  Difference difference = Difference::linear;
  // nullopt for dimensions without enough paired ratings.
  std::map<std::string, std::optional<double>> alpha;
  // Unweighted mean over the dimensions that have a value.
  std::optional<double> mean;
};

// Builds the annotator-by-unit matrix for one dimension at one level.
ReliabilityMatrix reliability_matrix(const Corpus& corpus, Level level,
                                     std::string_view dimension);

// Throws DataError when the corpus carries no ratings at this level.
AgreementReport agreement_report(const Corpus& corpus, Level level,
                                 Difference difference = Difference::linear);

}  // namespace psylex

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "psylex/lexicon.hpp"
#include "psylex/tokenizer.hpp"

namespace psylex {

enum class FeatureSpace { ngram, topic, combined };

std::string_view to_string(FeatureSpace space);
FeatureSpace parse_feature_space(std::string_view s);

struct FeatureVector {
  FeatureSpace space = FeatureSpace::ngram;
  std::map<std::string, double, std::less<>> values;
  // Set when the source text had no tokens.
  bool degenerate = false;
};

// Category proportions or sums keyed by category name, plus a flag for
// empty input.
struct CategoryScores {
  std::map<std::string, double, std::less<>> values;
  bool degenerate = false;
};

// score(c) = sum over tokens of weight(token, c). Every lexicon category is
// present in the result.
std::map<std::string, double, std::less<>> weighted_scores(
    const TokenSequence& tokens, const WeightedLexicon& lexicon);

// Fraction of tokens that match each category. Empty input gives all zeros
// and sets the degenerate flag.
CategoryScores category_proportions(const TokenSequence& tokens,
                                    const CategoryDictionary& dictionary);

// Relative frequencies of 1..n_max grams, normalized per order. N-grams never
// span units; feature names are the tokens joined with a single space.
FeatureVector extract_ngrams(const std::vector<TokenSequence>& units,
                             int n_max);

// loading(t) = sum_w relfreq(w) * weight(w, t). Every topic is present.
FeatureVector topic_loadings(const TokenSequence& tokens,
                             const WeightedLexicon& topics);

// Union of an n-gram and a topic vector. Throws ConfigError if a feature name
// occurs in both.
FeatureVector combine_features(const FeatureVector& ngrams,
                               const FeatureVector& topics);

}  // namespace psylex

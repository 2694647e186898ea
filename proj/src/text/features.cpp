#include "psylex/features.hpp"

#include <unordered_map>

#include "psylex/error.hpp"

namespace psylex {

std::string_view to_string(FeatureSpace space) {
  switch (space) {
    case FeatureSpace::ngram: return "ngram";
    case FeatureSpace::topic: return "topic";
    case FeatureSpace::combined: return "combined";
  }
  return "";
}

FeatureSpace parse_feature_space(std::string_view s) {
  if (s == "ngram") return FeatureSpace::ngram;
  if (s == "topic") return FeatureSpace::topic;
  if (s == "combined") return FeatureSpace::combined;
  throw ConfigError("unknown feature space '" + std::string(s) +
                    "' (expected ngram, topic or combined)");
}

std::map<std::string, double, std::less<>> weighted_scores(
    const TokenSequence& tokens, const WeightedLexicon& lexicon) {
  const auto& categories = lexicon.categories();
  std::vector<double> sums(categories.size(), 0.0);
  for (const auto& token : tokens)
    for (const auto& e : lexicon.lookup(token)) sums[e.category] += e.weight;

  std::map<std::string, double, std::less<>> out;
  for (std::size_t c = 0; c < categories.size(); ++c)
    out.emplace(categories[c], sums[c]);
  return out;
}

CategoryScores category_proportions(const TokenSequence& tokens,
                                    const CategoryDictionary& dictionary) {
  const auto& categories = dictionary.categories();
  std::vector<std::size_t> hits(categories.size(), 0);
  for (const auto& token : tokens)
    for (std::size_t c : dictionary.match(token)) ++hits[c];

  CategoryScores out;
  out.degenerate = tokens.empty();
  const double total = static_cast<double>(tokens.size());
  for (std::size_t c = 0; c < categories.size(); ++c)
    out.values.emplace(categories[c],
                       tokens.empty() ? 0.0 : static_cast<double>(hits[c]) / total);
  return out;
}

FeatureVector extract_ngrams(const std::vector<TokenSequence>& units,
                             int n_max) {
  if (n_max < 1) throw ConfigError("n-gram order must be at least 1");
  FeatureVector out;
  out.space = FeatureSpace::ngram;
  std::size_t token_count = 0;
  for (const auto& unit : units) token_count += unit.size();
  out.degenerate = token_count == 0;

  for (int n = 1; n <= n_max; ++n) {
    const auto order = static_cast<std::size_t>(n);
    std::map<std::string, std::size_t, std::less<>> counts;
    std::size_t total = 0;
    for (const auto& unit : units) {
      if (unit.size() < order) continue;
      for (std::size_t i = 0; i + order <= unit.size(); ++i) {
        std::string gram = unit[i];
        for (std::size_t k = 1; k < order; ++k) {
          gram += ' ';
          gram += unit[i + k];
        }
        ++counts[gram];
        ++total;
      }
    }
    for (const auto& [gram, count] : counts)
      out.values[gram] =
          static_cast<double>(count) / static_cast<double>(total);
  }
  return out;
}

FeatureVector topic_loadings(const TokenSequence& tokens,
                             const WeightedLexicon& topics) {
  FeatureVector out;
  out.space = FeatureSpace::topic;
  const auto& categories = topics.categories();
  std::vector<double> loadings(categories.size(), 0.0);
  if (!tokens.empty()) {
    std::unordered_map<std::string_view, std::size_t> counts;
    for (const auto& token : tokens) ++counts[token];
    const double total = static_cast<double>(tokens.size());
    // Sum in token order so results do not depend on hash iteration order.
    for (const auto& token : tokens) {
      auto it = counts.find(token);
      if (it == counts.end()) continue;
      const double relfreq = static_cast<double>(it->second) / total;
      for (const auto& e : topics.lookup(token))
        loadings[e.category] += relfreq * e.weight;
      counts.erase(it);
    }
  }
  bool any = false;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    out.values.emplace(categories[c], loadings[c]);
    any = any || loadings[c] != 0.0;
  }
  out.degenerate = tokens.empty() || !any;
  return out;
}

FeatureVector combine_features(const FeatureVector& ngrams,
                               const FeatureVector& topics) {
  FeatureVector out;
  out.space = FeatureSpace::combined;
  out.values = ngrams.values;
  for (const auto& [name, value] : topics.values) {
    if (!out.values.emplace(name, value).second)
      throw ConfigError("feature '" + name +
                        "' appears in both the n-gram and topic spaces");
  }
  out.degenerate = ngrams.degenerate && topics.degenerate;
  return out;
}

}  // namespace psylex

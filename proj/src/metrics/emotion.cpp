#include "psylex/emotion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psylex/error.hpp"
#include "psylex/stats.hpp"

namespace psylex {

EmotionVector EmotionVector::from_raw(const EmotionArray& raw) {
  EmotionVector v;
  v.raw = raw;
  double total = 0.0;
  for (double x : raw) total += x;
  if (total > 0.0) {
    EmotionArray normalized{};
    for (std::size_t i = 0; i < kEmotionCount; ++i)
      normalized[i] = raw[i] / total;
    v.normalized = normalized;
  }
  return v;
}

EmotionLexicon::EmotionLexicon(WeightedLexicon lexicon)
    : lexicon_(std::move(lexicon)) {
  const auto& categories = lexicon_.categories();
  if (categories.empty()) throw ConfigError("emotion lexicon is empty");
  slot_of_category_.fill(kEmotionCount);
  if (categories.size() > kEmotionCount)
    throw ConfigError("emotion lexicon has more than eight categories");
  for (std::size_t c = 0; c < categories.size(); ++c) {
    auto it = std::find(kEmotionNames.begin(), kEmotionNames.end(),
                        categories[c]);
    if (it == kEmotionNames.end())
      throw ConfigError("emotion lexicon category '" + categories[c] +
                        "' is not one of the eight Plutchik emotions");
    slot_of_category_[c] =
        static_cast<std::size_t>(std::distance(kEmotionNames.begin(), it));
  }
  if (lexicon_.min_weight() < 0.0)
    throw ConfigError("emotion lexicon has negative weights");
}

EmotionArray EmotionLexicon::raw_scores(const TokenSequence& tokens) const {
  EmotionArray raw{};
  for (const auto& token : tokens)
    for (const auto& e : lexicon_.lookup(token))
      raw[slot_of_category_[e.category]] += e.weight;
  return raw;
}

EmotionVector emotion_vector(const TokenSequence& tokens,
                             const EmotionLexicon& lexicon) {
  return EmotionVector::from_raw(lexicon.raw_scores(tokens));
}

std::string_view to_string(LogBase base) {
  return base == LogBase::e ? "e" : "2";
}

LogBase parse_log_base(std::string_view s) {
  if (s == "e" || s == "nats") return LogBase::e;
  if (s == "2" || s == "bits") return LogBase::two;
  throw ConfigError("unknown entropy log base '" + std::string(s) +
                    "' (expected e or 2)");
}

double max_emotional_entropy(LogBase base) {
  return base == LogBase::e ? std::log(8.0) : 3.0;
}

std::optional<double> emotional_entropy(const EmotionVector& v,
                                        LogBase base) {
  if (!v.normalized) return std::nullopt;
  double h = 0.0;
  for (double p : *v.normalized)
    if (p > 0.0) h -= p * std::log(p);
  if (base == LogBase::two) h /= std::numbers::ln2;
  return std::clamp(h, 0.0, max_emotional_entropy(base));
}

std::optional<double> emotion_matching(const EmotionVector& agent,
                                       const EmotionVector& partner) {
  return stats::spearman(agent.raw, partner.raw);
}

}  // namespace psylex

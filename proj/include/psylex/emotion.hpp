#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "psylex/lexicon.hpp"
#include "psylex/tokenizer.hpp"

namespace psylex {

inline constexpr std::size_t kEmotionCount = 8;

// Plutchik's basic emotions, in the order used by EmotionVector.
inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames{
    "anger", "anticipation", "disgust", "fear",
    "joy",   "sadness",      "surprise", "trust"};

using EmotionArray = std::array<double, kEmotionCount>;

struct EmotionVector {
  EmotionArray raw{};
  // raw / sum(raw); absent iff sum(raw) == 0.
  std::optional<EmotionArray> normalized;

  static EmotionVector from_raw(const EmotionArray& raw);
};

// A weighted lexicon whose categories are all Plutchik emotion names. Emotions
// the lexicon never mentions score zero.
class EmotionLexicon {
 public:
  // Throws ConfigError if any category is not an emotion name, or if the
  // lexicon has negative weights.
  explicit EmotionLexicon(WeightedLexicon lexicon);

  EmotionArray raw_scores(const TokenSequence& tokens) const;

  const WeightedLexicon& lexicon() const noexcept { return lexicon_; }

 private:
  WeightedLexicon lexicon_;
  std::array<std::size_t, kEmotionCount> slot_of_category_{};
};

EmotionVector emotion_vector(const TokenSequence& tokens,
                             const EmotionLexicon& lexicon);

enum class LogBase { e, two };

std::string_view to_string(LogBase base);
LogBase parse_log_base(std::string_view s);

// Upper bound of emotional_entropy: log(8) in the chosen base.
double max_emotional_entropy(LogBase base = LogBase::e);

// Shannon entropy of the normalized vector with 0 log 0 = 0.
std::optional<double> emotional_entropy(const EmotionVector& v,
                                        LogBase base = LogBase::e);

// Spearman correlation over the eight raw components. nullopt when either
// vector is constant (including all zero).
std::optional<double> emotion_matching(const EmotionVector& agent,
                                       const EmotionVector& partner);

}  // namespace psylex

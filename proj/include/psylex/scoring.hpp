#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "psylex/corpus.hpp"
#include "psylex/emotion.hpp"
#include "psylex/lexicon.hpp"
#include "psylex/metric_table.hpp"
#include "psylex/trait_model.hpp"

namespace psylex {

namespace metric {
inline constexpr std::string_view kEmotionalEntropy = "emotional_entropy";
inline constexpr std::string_view kEmotionMatching = "emotion_matching";
inline constexpr std::string_view kLanguageStyleMatching =
    "language_style_matching";
inline constexpr std::string_view kAgreeableness = "agreeableness";
inline constexpr std::string_view kEmpathy = "empathy";
}  // namespace metric

// Metrics computable per turn, and the full dialog-level set.
const std::vector<std::string>& turn_metric_names();
const std::vector<std::string>& dialog_metric_names();

// Loaded, read-only resources. Any may be absent if no configured metric
// needs it.
struct Resources {
  std::optional<EmotionLexicon> emotion_lexicon;
  std::optional<CategoryDictionary> function_words;
  std::optional<WeightedLexicon> topic_model;
  std::optional<LinearTraitModel> agreeableness_model;
  std::optional<LinearTraitModel> empathy_model;
};

enum class DialogAggregation { concatenate, turn_mean };

std::string_view to_string(DialogAggregation aggregation);
DialogAggregation parse_dialog_aggregation(std::string_view s);

struct ScoringConfig {
  std::vector<std::string> turn_metrics = turn_metric_names();
  std::vector<std::string> dialog_metrics = dialog_metric_names();
  // Per-metric override; metrics not listed use concatenation. turn_mean is
  // only valid for turn metrics.
  std::map<std::string, DialogAggregation, std::less<>> dialog_aggregation;
  // Number of turns before an agent turn searched for partner text.
  int matching_window = 1;
  // Restricts the function-word categories used by style matching; empty
  // means every dictionary category.
  std::vector<std::string> lsm_categories;
  int ngram_max = 3;
  LogBase entropy_base = LogBase::e;
  // 0 = hardware concurrency.
  unsigned threads = 1;
};

struct ScoredCorpus {
  MetricTable turn{Level::turn};
  MetricTable dialog{Level::dialog};
};

// Throws ConfigError before scoring when a configured metric lacks its
// resource, a name is unknown, or a parameter is out of range.
void check_config(const ScoringConfig& config, const Resources& resources);

// Turn rows exist for agent turns only. Matching metrics compare an agent turn
// with the partner turns among the preceding `matching_window` turns.
// Dialog metrics use the concatenated agent (and partner) text unless the
// metric is configured for turn_mean. Rows come out in corpus order whatever
// the thread count.
ScoredCorpus score_corpus(const Corpus& corpus, const Resources& resources,
                          const ScoringConfig& config);

}  // namespace psylex

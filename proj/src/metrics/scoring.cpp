#include "psylex/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "psylex/error.hpp"
#include "psylex/features.hpp"
#include "psylex/style.hpp"
#include "psylex/tokenizer.hpp"

namespace psylex {

const std::vector<std::string>& turn_metric_names() {
  static const std::vector<std::string> names{
      std::string(metric::kEmotionalEntropy),
      std::string(metric::kEmotionMatching),
      std::string(metric::kLanguageStyleMatching)};
  return names;
}

const std::vector<std::string>& dialog_metric_names() {
  static const std::vector<std::string> names{
      std::string(metric::kEmotionalEntropy),
      std::string(metric::kEmotionMatching),
      std::string(metric::kLanguageStyleMatching),
      std::string(metric::kAgreeableness), std::string(metric::kEmpathy)};
  return names;
}

std::string_view to_string(DialogAggregation aggregation) {
  return aggregation == DialogAggregation::concatenate ? "concatenate"
                                                       : "turn_mean";
}

DialogAggregation parse_dialog_aggregation(std::string_view s) {
  if (s == "concatenate") return DialogAggregation::concatenate;
  if (s == "turn_mean") return DialogAggregation::turn_mean;
  throw ConfigError("unknown dialog aggregation '" + std::string(s) +
                    "' (expected concatenate or turn_mean)");
}

namespace {

bool is_turn_metric(std::string_view name) {
  const auto& names = turn_metric_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool is_dialog_metric(std::string_view name) {
  const auto& names = dialog_metric_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

void require_trait(const std::optional<LinearTraitModel>& model,
                   const Resources& resources, std::string_view metric) {
  if (!model)
    throw ConfigError("metric '" + std::string(metric) +
                      "' needs a trait model");
  if (model->feature_space != FeatureSpace::ngram && !resources.topic_model)
    throw ConfigError("metric '" + std::string(metric) +
                      "' uses topic features but no topic model is loaded");
}

DialogAggregation aggregation_for(const ScoringConfig& config,
                                  std::string_view metric) {
  auto it = config.dialog_aggregation.find(metric);
  return it == config.dialog_aggregation.end() ? DialogAggregation::concatenate
                                               : it->second;
}

// Metrics that must be evaluated per turn: emitted ones plus any dialog
// metric aggregated as a turn mean.
std::vector<std::string> turn_metrics_needed(const ScoringConfig& config) {
  std::vector<std::string> out = config.turn_metrics;
  for (const auto& m : config.dialog_metrics)
    if (aggregation_for(config, m) == DialogAggregation::turn_mean &&
        std::find(out.begin(), out.end(), m) == out.end())
      out.push_back(m);
  return out;
}

class DialogScorer {
 public:
  DialogScorer(const Resources& resources, const ScoringConfig& config)
      : resources_(resources), config_(config) {}

  std::pair<std::vector<MetricValue>, std::vector<MetricValue>> score(
      const Dialog& dialog) const;

 private:
  CategoryScores style_profile(const TokenSequence& tokens) const;

  MetricValue entropy(UnitRef unit, const TokenSequence& tokens) const;
  MetricValue matching(UnitRef unit, std::string_view metric,
                       const TokenSequence& agent, bool has_partner,
                       const TokenSequence& partner) const;
  MetricValue trait(UnitRef unit, std::string_view metric,
                    const LinearTraitModel& model,
                    const std::vector<TokenSequence>& units,
                    const TokenSequence& tokens) const;

  const Resources& resources_;
  const ScoringConfig& config_;
};

CategoryScores DialogScorer::style_profile(const TokenSequence& tokens) const {
  CategoryScores all = category_proportions(tokens, *resources_.function_words);
  if (config_.lsm_categories.empty()) return all;
  CategoryScores subset;
  subset.degenerate = all.degenerate;
  for (const auto& c : config_.lsm_categories)
    subset.values.emplace(c, all.values.at(c));
  return subset;
}

MetricValue DialogScorer::entropy(UnitRef unit,
                                  const TokenSequence& tokens) const {
  std::string name(metric::kEmotionalEntropy);
  if (tokens.empty())
    return MetricValue::missing(std::move(unit), name,
                                DegenerateReason::empty_text);
  const auto v = emotion_vector(tokens, *resources_.emotion_lexicon);
  if (auto h = emotional_entropy(v, config_.entropy_base))
    return MetricValue::present(std::move(unit), name, *h);
  return MetricValue::missing(std::move(unit), name,
                              DegenerateReason::zero_emotion_vector);
}

MetricValue DialogScorer::matching(UnitRef unit, std::string_view metric,
                                   const TokenSequence& agent,
                                   bool has_partner,
                                   const TokenSequence& partner) const {
  std::string name(metric);
  if (!has_partner)
    return MetricValue::missing(std::move(unit), name,
                                DegenerateReason::no_partner_turn);
  if (agent.empty() || partner.empty())
    return MetricValue::missing(std::move(unit), name,
                                DegenerateReason::empty_text);

  if (metric == metric::kEmotionMatching) {
    const auto a = emotion_vector(agent, *resources_.emotion_lexicon);
    const auto p = emotion_vector(partner, *resources_.emotion_lexicon);
    if (!a.normalized || !p.normalized)
      return MetricValue::missing(std::move(unit), name,
                                  DegenerateReason::zero_emotion_vector);
    if (auto rho = emotion_matching(a, p))
      return MetricValue::present(std::move(unit), name, *rho);
    return MetricValue::missing(std::move(unit), name,
                                DegenerateReason::constant_vector);
  }

  const auto lsm =
      language_style_matching(style_profile(agent), style_profile(partner));
  if (!lsm)
    return MetricValue::missing(std::move(unit), name,
                                DegenerateReason::empty_text);
  return MetricValue::present(std::move(unit), name, *lsm);
}

MetricValue DialogScorer::trait(UnitRef unit, std::string_view metric,
                                const LinearTraitModel& model,
                                const std::vector<TokenSequence>& units,
                                const TokenSequence& tokens) const {
  std::string name(metric);
  if (tokens.empty())
    return MetricValue::missing(std::move(unit), name,
                                DegenerateReason::empty_text);
  FeatureVector features;
  switch (model.feature_space) {
    case FeatureSpace::ngram:
      features = extract_ngrams(units, config_.ngram_max);
      break;
    case FeatureSpace::topic:
      features = topic_loadings(tokens, *resources_.topic_model);
      break;
    case FeatureSpace::combined:
      features = combine_features(extract_ngrams(units, config_.ngram_max),
                                  topic_loadings(tokens, *resources_.topic_model));
      break;
  }
  return MetricValue::present(std::move(unit), name,
                              apply_trait_model(features, model));
}

void append(TokenSequence& into, const TokenSequence& tokens) {
  into.insert(into.end(), tokens.begin(), tokens.end());
}

std::pair<std::vector<MetricValue>, std::vector<MetricValue>>
DialogScorer::score(const Dialog& dialog) const {
  std::vector<TokenSequence> tokens;
  tokens.reserve(dialog.turns.size());
  for (const auto& t : dialog.turns) tokens.push_back(tokenize(t.text));

  const auto needed = turn_metrics_needed(config_);
  const auto window = static_cast<std::size_t>(config_.matching_window);

  // All turn-level values, including those only used for turn means.
  std::vector<MetricValue> turn_values;
  for (std::size_t i = 0; i < dialog.turns.size(); ++i) {
    const Turn& turn = dialog.turns[i];
    if (turn.speaker != Speaker::agent) continue;
    TokenSequence prompt;
    bool has_partner = false;
    for (std::size_t j = i >= window ? i - window : 0; j < i; ++j) {
      if (dialog.turns[j].speaker != Speaker::partner) continue;
      has_partner = true;
      append(prompt, tokens[j]);
    }
    for (const auto& m : needed) {
      UnitRef unit{dialog.dialog_id, turn.turn_id};
      if (m == metric::kEmotionalEntropy) {
        turn_values.push_back(entropy(std::move(unit), tokens[i]));
      } else {
        turn_values.push_back(
            matching(std::move(unit), m, tokens[i], has_partner, prompt));
      }
    }
  }

  std::vector<MetricValue> turn_rows;
  for (const auto& row : turn_values)
    if (std::find(config_.turn_metrics.begin(), config_.turn_metrics.end(),
                  row.metric_name) != config_.turn_metrics.end())
      turn_rows.push_back(row);

  TokenSequence agent, partner;
  std::vector<TokenSequence> agent_units;
  bool has_partner = false;
  for (std::size_t i = 0; i < dialog.turns.size(); ++i) {
    if (dialog.turns[i].speaker == Speaker::agent) {
      append(agent, tokens[i]);
      agent_units.push_back(tokens[i]);
    } else {
      has_partner = true;
      append(partner, tokens[i]);
    }
  }

  std::vector<MetricValue> dialog_rows;
  const UnitRef unit{dialog.dialog_id, std::nullopt};
  for (const auto& m : config_.dialog_metrics) {
    if (agent.empty()) {
      dialog_rows.push_back(
          MetricValue::missing(unit, m, DegenerateReason::empty_text));
      continue;
    }
    if (aggregation_for(config_, m) == DialogAggregation::turn_mean) {
      double sum = 0.0;
      std::size_t count = 0;
      std::optional<DegenerateReason> first_reason;
      for (const auto& row : turn_values) {
        if (row.metric_name != m) continue;
        if (row.value) {
          sum += *row.value;
          ++count;
        } else if (!first_reason) {
          first_reason = row.degenerate_reason;
        }
      }
      dialog_rows.push_back(
          count > 0 ? MetricValue::present(unit, m,
                                           sum / static_cast<double>(count))
                    : MetricValue::missing(
                          unit, m,
                          first_reason.value_or(DegenerateReason::empty_text)));
      continue;
    }
    if (m == metric::kEmotionalEntropy) {
      dialog_rows.push_back(entropy(unit, agent));
    } else if (m == metric::kEmotionMatching ||
               m == metric::kLanguageStyleMatching) {
      dialog_rows.push_back(matching(unit, m, agent, has_partner, partner));
    } else if (m == metric::kAgreeableness) {
      dialog_rows.push_back(
          trait(unit, m, *resources_.agreeableness_model, agent_units, agent));
    } else {
      dialog_rows.push_back(
          trait(unit, m, *resources_.empathy_model, agent_units, agent));
    }
  }
  return {std::move(turn_rows), std::move(dialog_rows)};
}

}  // namespace

void check_config(const ScoringConfig& config, const Resources& resources) {
  if (config.matching_window < 1)
    throw ConfigError("matching window must be at least 1");
  if (config.ngram_max < 1)
    throw ConfigError("n-gram order must be at least 1");

  std::set<std::string> seen;
  for (const auto& m : config.turn_metrics) {
    if (!is_turn_metric(m))
      throw ConfigError("'" + m + "' is not a turn-level metric");
    if (!seen.insert(m).second)
      throw ConfigError("turn metric '" + m + "' listed twice");
  }
  seen.clear();
  for (const auto& m : config.dialog_metrics) {
    if (!is_dialog_metric(m))
      throw ConfigError("'" + m + "' is not a dialog-level metric");
    if (!seen.insert(m).second)
      throw ConfigError("dialog metric '" + m + "' listed twice");
  }
  for (const auto& [m, aggregation] : config.dialog_aggregation) {
    if (!is_dialog_metric(m))
      throw ConfigError("aggregation set for unknown metric '" + m + "'");
    if (aggregation == DialogAggregation::turn_mean && !is_turn_metric(m))
      throw ConfigError("'" + m + "' has no turn-level values to average");
  }

  std::vector<std::string> all = turn_metrics_needed(config);
  all.insert(all.end(), config.dialog_metrics.begin(),
             config.dialog_metrics.end());
  for (const auto& m : all) {
    if (m == metric::kEmotionalEntropy || m == metric::kEmotionMatching) {
      if (!resources.emotion_lexicon)
        throw ConfigError("metric '" + m + "' needs an emotion lexicon");
    } else if (m == metric::kLanguageStyleMatching) {
      if (!resources.function_words)
        throw ConfigError("metric '" + m +
                          "' needs a function-word dictionary");
      for (const auto& c : config.lsm_categories)
        if (resources.function_words->category_index(c) ==
            CategoryDictionary::npos)
          throw ConfigError("style category '" + c +
                            "' is not in the function-word dictionary");
    } else if (m == metric::kAgreeableness) {
      require_trait(resources.agreeableness_model, resources, m);
    } else if (m == metric::kEmpathy) {
      require_trait(resources.empathy_model, resources, m);
    }
  }
}

ScoredCorpus score_corpus(const Corpus& corpus, const Resources& resources,
                          const ScoringConfig& config) {
  check_config(config, resources);
  const DialogScorer scorer(resources, config);

  using Rows = std::pair<std::vector<MetricValue>, std::vector<MetricValue>>;
  std::vector<Rows> results(corpus.dialogs.size());

  unsigned threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, results.size())));

  if (threads <= 1) {
    for (std::size_t i = 0; i < results.size(); ++i)
      results[i] = scorer.score(corpus.dialogs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= results.size() || failed.load()) return;
          try {
            results[i] = scorer.score(corpus.dialogs[i]);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  ScoredCorpus out;
  for (auto& [turn_rows, dialog_rows] : results) {
    for (auto& row : turn_rows) out.turn.add(std::move(row));
    for (auto& row : dialog_rows) out.dialog.add(std::move(row));
  }
  return out;
}

}  // namespace psylex

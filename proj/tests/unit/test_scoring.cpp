#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "psylex/error.hpp"
#include "psylex/scoring.hpp"
#include "psylex/style.hpp"
#include "test_util.hpp"

namespace psylex {
namespace {

using testing::fixture;

Resources fixture_resources() {
  Resources r;
  r.emotion_lexicon.emplace(load_weighted_lexicon(fixture("emotion_lexicon.csv")));
  r.function_words = load_category_dictionary(fixture("function_words.csv"));
  r.topic_model = load_weighted_lexicon(fixture("topics.csv"));
  r.agreeableness_model = load_trait_model(fixture("agreeableness_ngram.json"));
  r.empathy_model = load_trait_model(fixture("empathy_topic.json"));
  return r;
}

Dialog dialog(std::string id, std::vector<std::pair<Speaker, std::string>> turns) {
  Dialog d{std::move(id), "sys", {}, {}};
  int i = 0;
  for (auto& [speaker, text] : turns)
    d.turns.push_back({"t" + std::to_string(++i), speaker, std::move(text), {}});
  return d;
}

constexpr auto A = Speaker::agent;
constexpr auto P = Speaker::partner;

TEST(ScoreCorpus, AgentPartnerAgentStructure) {
  Corpus c;
  c.dialogs.push_back(dialog("d", {{A, "I am happy"}, {P, "I am sad and afraid"},
                                   {A, "I hope you will be glad soon"}}));
  const auto out = score_corpus(c, fixture_resources(), {});
  EXPECT_EQ(out.turn.size(), 6u);
  for (const auto& m : turn_metric_names()) {
    const auto* first = out.turn.find({"d", "t1"}, m);
    const auto* third = out.turn.find({"d", "t3"}, m);
    ASSERT_TRUE(first && third);
    EXPECT_FALSE(out.turn.find({"d", "t2"}, m));
    if (m == metric::kEmotionalEntropy) {
      EXPECT_TRUE(first->value);
    } else {
      EXPECT_FALSE(first->value);
      EXPECT_EQ(first->degenerate_reason, DegenerateReason::no_partner_turn);
      EXPECT_TRUE(third->value) << m;
    }
  }
  EXPECT_EQ(out.dialog.size(), dialog_metric_names().size());
}

TEST(ScoreCorpus, TurnValuesMatchDirectComputation) {
  const auto r = fixture_resources();
  Corpus c;
  c.dialogs.push_back(dialog("d", {{P, "I am sad, my friend is afraid."},
                                   {A, "That is sad. I hope you trust the dog soon."}}));
  const auto out = score_corpus(c, r, {});
  const auto agent = tokenize(c.dialogs[0].turns[1].text);
  const auto partner = tokenize(c.dialogs[0].turns[0].text);
  const auto ea = emotion_vector(agent, *r.emotion_lexicon);
  const auto ep = emotion_vector(partner, *r.emotion_lexicon);
  EXPECT_EQ(*out.turn.find({"d", "t2"}, metric::kEmotionalEntropy)->value,
            *emotional_entropy(ea));
  EXPECT_EQ(*out.turn.find({"d", "t2"}, metric::kEmotionMatching)->value,
            *emotion_matching(ea, ep));
  EXPECT_EQ(*out.turn.find({"d", "t2"}, metric::kLanguageStyleMatching)->value,
            *language_style_matching(category_proportions(agent, *r.function_words),
                                     category_proportions(partner, *r.function_words)));
}

TEST(ScoreCorpus, DialogEmotionIsSumOfAgentTurns) {
  const auto r = fixture_resources();
  const Corpus c = load_corpus(fixture("corpus.jsonl"));
  const auto out = score_corpus(c, r, {});
  for (const auto& d : c.dialogs) {
    EmotionArray sum{};
    for (const auto& t : d.turns) {
      if (t.speaker != A) continue;
      const auto v = emotion_vector(tokenize(t.text), *r.emotion_lexicon);
      for (std::size_t k = 0; k < kEmotionCount; ++k) sum[k] += v.raw[k];
    }
    const auto expected = emotional_entropy(EmotionVector::from_raw(sum));
    const auto* row = out.dialog.find({d.dialog_id, std::nullopt},
                                      metric::kEmotionalEntropy);
    ASSERT_TRUE(row && expected);
    EXPECT_NEAR(*row->value, *expected, 1e-12) << d.dialog_id;
  }
}

TEST(ScoreCorpus, DialogTraitsUseAgentText) {
  const auto r = fixture_resources();
  Corpus c;
  c.dialogs.push_back(dialog("d", {{A, "I love my friend"}, {P, "I hate that"},
                                   {A, "thank you friend"}}));
  const auto out = score_corpus(c, r, {});
  const TokenSequence t1 = tokenize("I love my friend"), t3 = tokenize("thank you friend");
  TokenSequence all = t1;
  all.insert(all.end(), t3.begin(), t3.end());
  EXPECT_NEAR(*out.dialog.find({"d", std::nullopt}, metric::kAgreeableness)->value,
              apply_trait_model(extract_ngrams({t1, t3}, 3), *r.agreeableness_model),
              1e-12);
  EXPECT_NEAR(*out.dialog.find({"d", std::nullopt}, metric::kEmpathy)->value,
              apply_trait_model(topic_loadings(all, *r.topic_model), *r.empathy_model),
              1e-12);
}

TEST(ScoreCorpus, EmptyAgentTextMakesEveryDialogMetricMissing) {
  Corpus c;
  c.dialogs.push_back(dialog("d", {{P, "hello there friend"}, {A, ""}, {A, "  ..."}}));
  const auto out = score_corpus(c, fixture_resources(), {});
  ASSERT_EQ(out.dialog.size(), dialog_metric_names().size());
  for (const auto& row : out.dialog.rows()) {
    EXPECT_FALSE(row.value);
    EXPECT_EQ(row.degenerate_reason, DegenerateReason::empty_text);
  }
  const auto* e = out.turn.find({"d", "t2"}, metric::kEmotionalEntropy);
  EXPECT_EQ(e->degenerate_reason, DegenerateReason::empty_text);
}

TEST(ScoreCorpus, ZeroEmotionAndConstantVectorsAreMissing) {
  Corpus c;
  c.dialogs.push_back(dialog("d", {{P, "happy"}, {A, "the table is brown"}}));
  const auto out = score_corpus(c, fixture_resources(), {});
  EXPECT_EQ(out.turn.find({"d", "t2"}, metric::kEmotionalEntropy)->degenerate_reason,
            DegenerateReason::zero_emotion_vector);
  EXPECT_EQ(out.turn.find({"d", "t2"}, metric::kEmotionMatching)->degenerate_reason,
            DegenerateReason::zero_emotion_vector);

  // "all" carries every emotion equally, so its raw vector is constant.
  WeightedLexicon lex = load_weighted_lexicon(fixture("emotion_lexicon.csv"));
  for (auto name : kEmotionNames) lex.add("all", name, 1.0);
  Resources r = fixture_resources();
  r.emotion_lexicon.emplace(lex);
  Corpus flat;
  flat.dialogs.push_back(dialog("d", {{P, "happy sad"}, {A, "all"}}));
  const auto row = score_corpus(flat, r, {}).turn.find({"d", "t2"}, metric::kEmotionMatching);
  EXPECT_EQ(row->degenerate_reason, DegenerateReason::constant_vector);
}

TEST(ScoreCorpus, MatchingWindowReachesFurtherBack) {
  Corpus c;
  c.dialogs.push_back(dialog("d", {{P, "I am sad"}, {A, "oh"}, {A, "I am happy"}}));
  ScoringConfig narrow;
  narrow.turn_metrics = {std::string(metric::kLanguageStyleMatching)};
  narrow.dialog_metrics = {};
  auto wide = narrow;
  wide.matching_window = 2;
  const auto r = fixture_resources();
  EXPECT_FALSE(score_corpus(c, r, narrow).turn.find({"d", "t3"}, metric::kLanguageStyleMatching)->value);
  EXPECT_TRUE(score_corpus(c, r, wide).turn.find({"d", "t3"}, metric::kLanguageStyleMatching)->value);
}

TEST(ScoreCorpus, TurnMeanAggregation) {
  const auto r = fixture_resources();
  const Corpus c = load_corpus(fixture("corpus.jsonl"));
  ScoringConfig config;
  config.dialog_aggregation[std::string(metric::kEmotionalEntropy)] =
      DialogAggregation::turn_mean;
  const auto out = score_corpus(c, r, config);
  for (const auto& d : c.dialogs) {
    double sum = 0;
    int n = 0;
    for (const auto& row : out.turn.rows())
      if (row.unit.dialog_id == d.dialog_id &&
          row.metric_name == metric::kEmotionalEntropy && row.value) {
        sum += *row.value;
        ++n;
      }
    ASSERT_GT(n, 0);
    EXPECT_NEAR(*out.dialog.find({d.dialog_id, std::nullopt},
                                 metric::kEmotionalEntropy)->value,
                sum / n, 1e-12);
  }
}

TEST(ScoreCorpus, DeterministicAcrossThreadCounts) {
  const auto r = fixture_resources();
  std::mt19937_64 rng(77);
  const std::vector<std::string> words{"happy", "sad", "the", "I", "love", "hate",
                                       "wow", "friend", "cat", "dog", "music", "soon"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  Corpus c;
  for (int d = 0; d < 60; ++d) {
    std::vector<std::pair<Speaker, std::string>> turns;
    for (int t = 0; t < 1 + d % 5; ++t) {
      std::string text;
      for (int w = 0; w < (d + t) % 7; ++w) text += words[pick(rng)] + " ";
      turns.emplace_back((t + d) % 2 ? P : A, text);
    }
    c.dialogs.push_back(dialog("d" + std::to_string(d), turns));
  }
  ScoringConfig one;
  auto many = one;
  many.threads = 7;
  const auto a = score_corpus(c, r, one);
  const auto b = score_corpus(c, r, many);
  EXPECT_EQ(a.turn, b.turn);
  EXPECT_EQ(a.dialog, b.dialog);
  EXPECT_EQ(score_corpus(c, r, many).turn, b.turn);
}

TEST(CheckConfig, RejectsMissingResourcesAndBadParameters) {
  Resources none;
  EXPECT_THROW(check_config({}, none), ConfigError);
  Corpus c;
  c.dialogs.push_back(dialog("d", {{A, "x"}}));
  EXPECT_THROW(score_corpus(c, none, {}), ConfigError);

  const auto r = fixture_resources();
  EXPECT_NO_THROW(check_config({}, r));
  ScoringConfig unknown;
  unknown.turn_metrics = {"humour"};
  EXPECT_THROW(check_config(unknown, r), ConfigError);
  ScoringConfig trait_turn;
  trait_turn.turn_metrics = {"empathy"};
  EXPECT_THROW(check_config(trait_turn, r), ConfigError);
  ScoringConfig window;
  window.matching_window = 0;
  EXPECT_THROW(check_config(window, r), ConfigError);
  ScoringConfig mean_trait;
  mean_trait.dialog_aggregation["empathy"] = DialogAggregation::turn_mean;
  EXPECT_THROW(check_config(mean_trait, r), ConfigError);

  Resources entropy_only;
  entropy_only.emotion_lexicon = r.emotion_lexicon;
  ScoringConfig just_entropy;
  just_entropy.turn_metrics = {std::string(metric::kEmotionalEntropy)};
  just_entropy.dialog_metrics = {std::string(metric::kEmotionalEntropy)};
  EXPECT_NO_THROW(check_config(just_entropy, entropy_only));
}

}  // namespace
}  // namespace psylex

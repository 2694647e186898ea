#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "psylex/error.hpp"
#include "psylex/features.hpp"
#include "psylex/lexicon.hpp"
#include "psylex/tokenizer.hpp"
#include "psylex/trait_model.hpp"
#include "test_util.hpp"

namespace psylex {
namespace {

using testing::TempDir;

TEST(Tokenize, SplitsAndLowercases) {
  EXPECT_EQ(tokenize("Don't worry, be HAPPY!"),
            (TokenSequence{"don't", "worry", "be", "happy"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("  ,.;!? ").empty());
}

TEST(Tokenize, FoldsTypographicApostrophe) {
  EXPECT_EQ(tokenize("Don’t"), (TokenSequence{"don't"}));
}

TEST(Tokenize, HandlesNonAsciiLetters) {
  EXPECT_EQ(tokenize("Ça VA très Bien"),
            (TokenSequence{"ça", "va", "très", "bien"}));
  EXPECT_EQ(tokenize("ΑΒΓ Привет"), (TokenSequence{"αβγ", "привет"}));
  EXPECT_EQ(tokenize("x\xff\xfey"), (TokenSequence{"x", "y"}));
}

TEST(Tokenize, DigitsAreTokenCharacters) {
  EXPECT_EQ(tokenize("room 101b, 3-4"),
            (TokenSequence{"room", "101b", "3", "4"}));
}

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{
      "a", "B", "don't", " ", "  ", ",", ".", "é", "’", "!", "cat", "7",
      "\t", "\n", "Ж", "\xc3", "x"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  std::string s;
  for (int i = len(rng); i > 0; --i) s += pieces[pick(rng)];
  return s;
}

TEST(Tokenize, ConcatenationWithSpaceConcatenatesTokens) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string a = random_text(rng), b = random_text(rng);
    auto expected = tokenize(a);
    const auto tb = tokenize(b);
    expected.insert(expected.end(), tb.begin(), tb.end());
    EXPECT_EQ(tokenize(a + " " + b), expected) << a << "|" << b;
    for (const auto& t : tokenize(a)) {
      EXPECT_FALSE(t.empty());
      EXPECT_EQ(t.find_first_of(" \t\n"), std::string::npos);
      EXPECT_EQ(to_lower(t), t);
    }
  }
}

TEST(WeightedLexicon, LoadsAndSumsDuplicates) {
  TempDir dir("lex");
  const auto lex = load_weighted_lexicon(dir.write(
      "l.csv", "term,category,weight\nhappy,joy,1.0\nhappy,joy,1.0\n"
               "Sad,sadness,1.5\n"));
  EXPECT_EQ(lex.term_count(), 2u);
  EXPECT_DOUBLE_EQ(lex.weight("happy", "joy"), 2.0);
  EXPECT_DOUBLE_EQ(lex.weight("sad", "sadness"), 1.5);
  EXPECT_EQ(lex.weight("sad", "joy"), 0.0);
  EXPECT_EQ(lex.categories(), (std::vector<std::string>{"joy", "sadness"}));
}

TEST(WeightedLexicon, NonNumericWeightReportsLine) {
  TempDir dir("lex");
  const auto p = dir.write("l.csv",
                           "term,category,weight\nhappy,joy,1\nsad,sadness,abc\n");
  try {
    load_weighted_lexicon(p);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(load_weighted_lexicon(dir.write("h.csv", "word,cat,w\n")),
               ParseError);
  EXPECT_THROW(load_weighted_lexicon(dir.path() / "absent.csv"), IoError);
}

TEST(CategoryDictionary, PrefixAndLiteralPatterns) {
  CategoryDictionary d;
  d.add("walk*", "motion");
  d.add("the", "article");
  const auto motion = d.category_index("motion");
  const auto article = d.category_index("article");
  EXPECT_EQ(d.match("walking"), (std::vector<std::size_t>{motion}));
  EXPECT_EQ(d.match("walk"), (std::vector<std::size_t>{motion}));
  EXPECT_TRUE(d.match("wal").empty());
  EXPECT_EQ(d.match("the"), (std::vector<std::size_t>{article}));
  EXPECT_TRUE(d.match("then").empty());
  EXPECT_TRUE(d.match("th").empty());
}

TEST(CategoryDictionary, RejectsMisplacedWildcard) {
  CategoryDictionary d;
  EXPECT_THROW(d.add("w*lk", "x"), DataError);
  EXPECT_THROW(d.add("*", "x"), DataError);
  EXPECT_THROW(d.add("", "x"), DataError);
  TempDir dir("dict");
  try {
    load_category_dictionary(
        dir.write("d.csv", "pattern,category\nthe,article\nw*lk,motion\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(CategoryDictionary, FixtureLoads) {
  const auto d = load_category_dictionary(testing::fixture("function_words.csv"));
  EXPECT_EQ(d.categories().size(), 9u);
  EXPECT_EQ(d.match("don't").size(), 2u);
}

WeightedLexicon happy_sad() {
  WeightedLexicon lex;
  lex.add("happy", "joy", 2.0);
  lex.add("sad", "sadness", 1.5);
  lex.add_category("anger");
  return lex;
}

TEST(WeightedScores, HandSum) {
  const auto s = weighted_scores(tokenize("happy happy sad"), happy_sad());
  EXPECT_DOUBLE_EQ(s.at("joy"), 4.0);
  EXPECT_DOUBLE_EQ(s.at("sadness"), 1.5);
  EXPECT_EQ(s.at("anger"), 0.0);
  for (const auto& [c, v] : weighted_scores({}, happy_sad())) EXPECT_EQ(v, 0.0);
  for (const auto& [c, v] : weighted_scores(tokenize("nothing here"), happy_sad()))
    EXPECT_EQ(v, 0.0);
}

TEST(WeightedScores, AdditiveOverConcatenation) {
  const WeightedLexicon lex = happy_sad();
  std::mt19937_64 rng(21);
  const std::vector<std::string> words{"happy", "sad", "cat", "Happy", "SAD!"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::string a, b;
    for (int i = 0; i < trial % 9; ++i) a += words[pick(rng)] + " ";
    for (int i = 0; i < trial % 7; ++i) b += words[pick(rng)] + ",";
    const auto sa = weighted_scores(tokenize(a), lex);
    const auto sb = weighted_scores(tokenize(b), lex);
    const auto sab = weighted_scores(tokenize(a + " " + b), lex);
    for (const auto& [c, v] : sab)
      EXPECT_NEAR(v, sa.at(c) + sb.at(c), 1e-12);
  }
}

TEST(CategoryProportions, CountsMatchesOverTokens) {
  CategoryDictionary d;
  d.add("the", "article");
  d.add("on", "prep");
  const auto s = category_proportions(tokenize("the cat sat on the mat"), d);
  EXPECT_NEAR(s.values.at("article"), 2.0 / 6.0, 1e-12);
  EXPECT_NEAR(s.values.at("prep"), 1.0 / 6.0, 1e-12);
  EXPECT_FALSE(s.degenerate);

  const auto none = category_proportions(tokenize("dogs bark"), d);
  EXPECT_EQ(none.values.at("article"), 0.0);
  EXPECT_FALSE(none.degenerate);

  const auto empty = category_proportions({}, d);
  EXPECT_TRUE(empty.degenerate);
  EXPECT_EQ(empty.values.at("prep"), 0.0);
}

TEST(CategoryProportions, MultiMembershipIncrementsEach) {
  CategoryDictionary d;
  d.add("don't", "negate");
  d.add("don't", "auxverb");
  d.add("do*", "auxverb");
  const auto s = category_proportions(tokenize("I don't know"), d);
  EXPECT_NEAR(s.values.at("negate"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.values.at("auxverb"), 1.0 / 3.0, 1e-12);
}

TEST(CategoryProportions, ValuesInUnitInterval) {
  const auto d = load_category_dictionary(testing::fixture("function_words.csv"));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto tokens = tokenize(random_text(rng) + " the I don't");
    const auto s = category_proportions(tokens, d);
    double memberships = 0.0;
    for (const auto& t : tokens) memberships += d.match(t).size();
    double sum = 0.0;
    for (const auto& [c, v] : s.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      sum += v;
    }
    EXPECT_NEAR(sum, memberships / tokens.size(), 1e-12);
  }
}

TEST(Ngrams, PerOrderRelativeFrequencies) {
  const auto f = extract_ngrams({{"a", "b", "c"}}, 2);
  ASSERT_EQ(f.values.size(), 5u);
  EXPECT_NEAR(f.values.at("a"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(f.values.at("b"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(f.values.at("c"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(f.values.at("a b"), 0.5, 1e-12);
  EXPECT_NEAR(f.values.at("b c"), 0.5, 1e-12);
  EXPECT_EQ(f.space, FeatureSpace::ngram);
}

TEST(Ngrams, NeverSpanUnits) {
  const auto f = extract_ngrams({{"a"}, {"b"}}, 2);
  EXPECT_FALSE(f.values.contains("a b"));
  EXPECT_NEAR(f.values.at("a"), 0.5, 1e-12);
  EXPECT_TRUE(extract_ngrams({}, 1).values.empty());
  EXPECT_TRUE(extract_ngrams({{}}, 1).values.empty());
}

TEST(Ngrams, EachOrderSumsToOne) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> word(0, 4), len(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TokenSequence> units(1 + trial % 3);
    for (auto& u : units)
      for (int i = len(rng); i > 0; --i)
        u.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    const auto f = extract_ngrams(units, 3);
    std::vector<double> sums(4, 0.0);
    for (const auto& [name, v] : f.values)
      sums[1 + std::count(name.begin(), name.end(), ' ')] += v;
    for (int n = 1; n <= 3; ++n)
      if (sums[n] != 0.0) EXPECT_NEAR(sums[n], 1.0, 1e-12);
  }
}

TEST(TopicLoadings, RelativeFrequencyTimesWeight) {
  WeightedLexicon topics;
  topics.add("cat", "T0", 1.0);
  topics.add_category("T1");
  const auto f = topic_loadings(tokenize("cat cat dog"), topics);
  EXPECT_NEAR(f.values.at("T0"), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(f.values.at("T1"), 0.0);
  EXPECT_FALSE(f.degenerate);
  EXPECT_EQ(f.space, FeatureSpace::topic);

  const auto miss = topic_loadings(tokenize("dog bird"), topics);
  EXPECT_TRUE(miss.degenerate);
  EXPECT_EQ(miss.values.at("T0"), 0.0);
  EXPECT_TRUE(topic_loadings({}, topics).degenerate);
}

TEST(TopicLoadings, InvariantUnderRepetition) {
  const auto topics = load_weighted_lexicon(testing::fixture("topics.csv"));
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const std::string text = random_text(rng) + " cat dog music";
    const auto once = topic_loadings(tokenize(text), topics);
    const auto twice = topic_loadings(tokenize(text + " " + text), topics);
    for (const auto& [t, v] : once.values)
      EXPECT_NEAR(twice.values.at(t), v, 1e-12);
  }
}

TEST(CombineFeatures, UnionAndCollision) {
  FeatureVector n{FeatureSpace::ngram, {{"cat", 0.5}}, false};
  FeatureVector t{FeatureSpace::topic, {{"T0", 0.2}}, false};
  const auto c = combine_features(n, t);
  EXPECT_EQ(c.space, FeatureSpace::combined);
  EXPECT_EQ(c.values.size(), 2u);
  FeatureVector clash{FeatureSpace::topic, {{"cat", 0.1}}, false};
  EXPECT_THROW(combine_features(n, clash), ConfigError);
}

TEST(TraitModel, JsonRoundTrip) {
  LinearTraitModel m{"agreeableness", FeatureSpace::ngram, 0.25,
                     {{"cat", 1.5}, {"the dog", -0.5}}};
  const auto back = parse_trait_model(serialize_trait_model(m));
  EXPECT_EQ(back.trait_name, m.trait_name);
  EXPECT_EQ(back.feature_space, m.feature_space);
  EXPECT_EQ(back.intercept, m.intercept);
  EXPECT_EQ(back.weights, m.weights);
  const auto fixture = load_trait_model(testing::fixture("empathy_topic.json"));
  EXPECT_EQ(fixture.feature_space, FeatureSpace::topic);
}

TEST(TraitModel, RejectsMalformedJson) {
  EXPECT_THROW(parse_trait_model("{"), DataError);
  EXPECT_THROW(parse_trait_model(R"({"trait_name": "x"})"), DataError);
  EXPECT_THROW(
      parse_trait_model(R"({"trait_name": "x", "feature_space": "words",
                            "intercept": 0, "weights": {}})"),
      Error);
  EXPECT_THROW(
      parse_trait_model(R"({"trait_name": "x", "feature_space": "topic",
                            "intercept": 0, "weights": {"T0": "big"}})"),
      DataError);
}

// Random byte mutations of valid files: loaders either succeed or throw a
// psylex::Error, never anything else.
TEST(Parsers, TotalOnFuzzedInput) {
  TempDir dir("fuzz");
  const std::vector<std::pair<std::string, std::string>> seeds{
      {"lex", "term,category,weight\nhappy,joy,1.0\nsad,sadness,2\n\"a,b\",joy,3\n"},
      {"dict", "pattern,category\nthe,article\nwalk*,motion\n"},
      {"model", R"({"trait_name":"t","feature_space":"topic","intercept":1,"weights":{"T0":2}})"}};
  const std::string alphabet = ",\"\n*{}:01abc.-e \\";
  std::mt19937_64 rng(99);
  for (int i = 0; i < 3000; ++i) {
    const auto& [kind, seed] = seeds[i % seeds.size()];
    std::string s = seed;
    std::uniform_int_distribution<int> edits(1, 4);
    for (int e = edits(rng); e > 0; --e) {
      std::uniform_int_distribution<std::size_t> pos(0, s.size());
      std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
      const std::size_t p = pos(rng);
      switch (rng() % 3) {
        case 0: s.insert(p, 1, alphabet[ch(rng)]); break;
        case 1: if (p < s.size()) s.erase(p, 1); break;
        default: if (p < s.size()) s[p] = alphabet[ch(rng)]; break;
      }
    }
    const auto path = dir.write("f.txt", s);
    try {
      if (kind == "lex") load_weighted_lexicon(path);
      else if (kind == "dict") load_category_dictionary(path);
      else load_trait_model(path);
    } catch (const Error&) {
    } catch (const std::exception& e) {
      ADD_FAILURE() << kind << " threw non-psylex exception: " << e.what()
                    << "\n" << s;
    }
  }
}

}  // namespace
}  // namespace psylex

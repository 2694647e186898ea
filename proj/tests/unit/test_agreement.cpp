#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "psylex/agreement.hpp"
#include "psylex/error.hpp"

namespace psylex {
namespace {

// Pairable-values formulation, independent of the coincidence matrix:
// D_o averages within-unit pair differences, D_e averages differences over
// all pairs of pairable values.
double alpha_oracle(const ReliabilityMatrix& m, Difference diff) {
  auto delta = [&](double a, double b) {
    if (diff == Difference::linear) return std::abs(a - b);
    if (diff == Difference::interval) return (a - b) * (a - b);
    return a == b ? 0.0 : 1.0;
  };
  std::size_t units = 0;
  for (const auto& row : m) units = std::max(units, row.size());
  std::vector<double> all;
  double within = 0.0;
  for (std::size_t u = 0; u < units; ++u) {
    std::vector<double> v;
    for (const auto& row : m)
      if (u < row.size() && row[u]) v.push_back(*row[u]);
    if (v.size() < 2) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j)
        if (i != j) s += delta(v[i], v[j]);
    within += s / static_cast<double>(v.size() - 1);
    all.insert(all.end(), v.begin(), v.end());
  }
  const double n = static_cast<double>(all.size());
  double between = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      if (i != j) between += delta(all[i], all[j]);
  const double d_o = within / n;
  const double d_e = between / (n * (n - 1));
  return d_e == 0.0 ? 1.0 : 1.0 - d_o / d_e;
}

ReliabilityMatrix two_annotators(
    const std::vector<std::pair<double, double>>& units) {
  ReliabilityMatrix m(2);
  for (auto [a, b] : units) {
    m[0].emplace_back(a);
    m[1].emplace_back(b);
  }
  return m;
}

TEST(Krippendorff, PerfectAgreementIsOne) {
  const auto m = two_annotators({{3, 3}, {3, 3}, {3, 3}, {3, 3}});
  EXPECT_EQ(krippendorff_alpha(m, Difference::linear), 1.0);
  const auto m2 = two_annotators({{1, 1}, {2, 2}, {4, 4}, {5, 5}});
  EXPECT_EQ(krippendorff_alpha(m2, Difference::linear), 1.0);
  EXPECT_EQ(krippendorff_alpha(m2, Difference::interval), 1.0);
}

TEST(Krippendorff, HandComputedCoincidences) {
  // o11=4 o22=2 o33=2 o34=o43=1; n = (4,2,3,1), n = 10.
  // linear:   1 - 9 * 2 / 114 = 16/19
  // interval: 1 - 9 * 2 / 218 = 100/109
  const auto m = two_annotators({{1, 1}, {2, 2}, {3, 3}, {3, 4}, {1, 1}});
  const double linear = krippendorff_alpha(m, Difference::linear);
  const double interval = krippendorff_alpha(m, Difference::interval);
  EXPECT_NEAR(linear, 16.0 / 19.0, 1e-12);
  EXPECT_NEAR(interval, 100.0 / 109.0, 1e-12);
  EXPECT_NEAR(linear, alpha_oracle(m, Difference::linear), 1e-12);
  EXPECT_NEAR(interval, alpha_oracle(m, Difference::interval), 1e-12);
  EXPECT_GT(interval, linear);
}

TEST(Krippendorff, MatchesOracleWithMissingAndManyAnnotators) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> likert(1, 5);
  std::bernoulli_distribution skip(0.25);
  for (int trial = 0; trial < 200; ++trial) {
    ReliabilityMatrix m(2 + trial % 4);
    for (auto& row : m) {
      row.resize(10);
      for (auto& cell : row)
        if (!skip(rng)) cell = likert(rng);
    }
    for (Difference d :
         {Difference::linear, Difference::interval, Difference::nominal}) {
      double expected;
      try {
        expected = alpha_oracle(m, d);
        EXPECT_NEAR(krippendorff_alpha(m, d), expected, 1e-10);
      } catch (const DataError&) {
      }
    }
  }
}

TEST(Krippendorff, InsufficientDataThrows) {
  ReliabilityMatrix m{{1.0, std::nullopt}, {1.0, 2.0}};
  EXPECT_THROW(krippendorff_alpha(m, Difference::linear), DataError);
  EXPECT_THROW(krippendorff_alpha({}, Difference::linear), DataError);
}

TEST(Krippendorff, UniformRandomNearZero) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> likert(1, 5);
  ReliabilityMatrix m(3, std::vector<std::optional<double>>(1000));
  for (auto& row : m)
    for (auto& cell : row) cell = likert(rng);
  EXPECT_LT(std::abs(krippendorff_alpha(m, Difference::linear)), 0.1);
  EXPECT_LT(std::abs(krippendorff_alpha(m, Difference::interval)), 0.1);
}

TEST(Krippendorff, InvariantUnderRelabeling) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> likert(1, 5);
  for (int trial = 0; trial < 50; ++trial) {
    ReliabilityMatrix m(4, std::vector<std::optional<double>>(12));
    for (auto& row : m)
      for (auto& cell : row) cell = likert(rng);
    const double a = krippendorff_alpha(m, Difference::linear);

    auto shuffled = m;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::size_t> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& row : shuffled) {
      auto copy = row;
      for (std::size_t u = 0; u < perm.size(); ++u) row[u] = copy[perm[u]];
    }
    EXPECT_NEAR(krippendorff_alpha(shuffled, Difference::linear), a, 1e-12);
  }
}

TEST(Krippendorff, IntervalInvariantUnderAffineMaps) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> likert(1, 5);
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-50, 50);
  for (int trial = 0; trial < 50; ++trial) {
    ReliabilityMatrix m(3, std::vector<std::optional<double>>(15));
    for (auto& row : m)
      for (auto& cell : row) cell = likert(rng);
    const double a = scale(rng), b = shift(rng);
    auto mapped = m;
    for (auto& row : mapped)
      for (auto& cell : row) cell = a * *cell + b;
    EXPECT_NEAR(krippendorff_alpha(mapped, Difference::interval),
                krippendorff_alpha(m, Difference::interval), 1e-9);
  }
}

Corpus annotated_corpus() {
  Corpus c;
  const std::vector<std::vector<double>> grammar{{4, 4}, {2, 2}, {5, 5}};
  const std::vector<std::vector<double>> content{{1, 3}, {2, 5}, {4, 4}};
  for (int d = 0; d < 3; ++d) {
    Dialog dialog{"d" + std::to_string(d), "s", {}, {}};
    Turn t{"t", Speaker::agent, "x", {}};
    for (double v : grammar[d]) t.annotations["grammar"].values.emplace_back(v);
    for (double v : content[d]) t.annotations["content"].values.emplace_back(v);
    // Single rating per unit: never pairable.
    t.annotations["relevance"].values.emplace_back(3.0);
    dialog.turns.push_back(t);
    c.dialogs.push_back(dialog);
  }
  return c;
}

TEST(AgreementReport, ComposesPerDimensionAlpha) {
  const Corpus c = annotated_corpus();
  const auto r = agreement_report(c, Level::turn);
  EXPECT_EQ(*r.alpha.at("grammar"), 1.0);
  const double content = krippendorff_alpha(
      two_annotators({{1, 3}, {2, 5}, {4, 4}}), Difference::linear);
  EXPECT_NEAR(*r.alpha.at("content"), content, 1e-12);
  EXPECT_FALSE(r.alpha.at("relevance").has_value());
  EXPECT_NEAR(*r.mean, (1.0 + content) / 2.0, 1e-12);
  EXPECT_THROW(agreement_report(c, Level::dialog), DataError);
}

TEST(AgreementReport, AnnotatorIdsAlignRatings) {
  Corpus c;
  // Annotator y rates every unit 1, x rates 5; ids are listed in varying order.
  for (int d = 0; d < 4; ++d) {
    Dialog dialog{"d" + std::to_string(d), "s",
                  {{"t", Speaker::agent, "x", {}}}, {}};
    RatingList r;
    if (d % 2 == 0) {
      r.values = {5.0, 1.0};
      r.annotators = {"x", "y"};
    } else {
      r.values = {1.0, 5.0};
      r.annotators = {"y", "x"};
    }
    dialog.annotations["overall"] = r;
    c.dialogs.push_back(dialog);
  }
  const auto m = reliability_matrix(c, Level::dialog, "overall");
  ASSERT_EQ(m.size(), 2u);
  for (const auto& cell : m[0]) EXPECT_EQ(*cell, 5.0);
  for (const auto& cell : m[1]) EXPECT_EQ(*cell, 1.0);
}

}  // namespace
}  // namespace psylex

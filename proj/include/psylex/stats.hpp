#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psylex::stats {

double mean(std::span<const double> x);
// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> x);

// Sample product-moment correlation. nullopt when either side has zero
// variance. Throws DataError on length mismatch or fewer than two values.
std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y);

// 1-based ranks; tied values share the mean of the positions they cover.
std::vector<double> average_ranks(std::span<const double> x);

// Pearson correlation of average ranks.
std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

// Student t cumulative distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);

// Two-sided p-value P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

struct TTest {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
};

// Paired t-test on d = a - b. Identical pairs give t = 0, p = 1. A constant
// non-zero difference has no finite t and yields nullopt.
std::optional<TTest> paired_t_test(std::span<const double> a,
                                   std::span<const double> b);

enum class Correction { bonferroni, benjamini_hochberg };

std::string_view to_string(Correction correction);
Correction parse_correction(std::string_view s);

// min(1, p * m). Throws DataError unless 0 <= p <= 1 and m >= 1.
double bonferroni(double p, std::size_t m);

// (v - min) / (max - min); constant input maps to 0.5.
std::vector<double> minmax_normalize(std::span<const double> values);

struct RegressionResult {
  std::vector<std::string> predictors;
  std::vector<double> coefficients;  // aligned with predictors
  double intercept = 0.0;
  double r2 = 0.0;
  double adjusted_r2 = 0.0;
  std::vector<double> residuals;
  std::size_t n = 0;
  std::size_t p = 0;

  double coefficient(std::string_view predictor) const;
};

double adjusted_r2(double r2, std::size_t n, std::size_t p);

struct Predictor {
  std::string name;
  std::vector<double> values;
};

// Ordinary least squares with an intercept, solved by column-pivoted
// Householder QR. With `standardize`, every predictor and y are z-scored
// first (sample sd), so residuals are on the standardized y scale.
//
// Throws DataError when n <= p + 1, lengths differ, a predictor or y is
// constant under standardization, or the design is rank deficient (the
// message names the collinear columns).
RegressionResult ols_fit(const std::vector<Predictor>& predictors,
                         std::span<const double> y, bool standardize);

// z-scores with the sample standard deviation. Throws DataError if constant.
std::vector<double> standardize(std::span<const double> x);

// Missing entries count as zero correlation.
using CorrelationMatrix = std::vector<std::vector<std::optional<double>>>;

struct Merge {
  std::vector<std::size_t> left;   // original indices
  std::vector<std::size_t> right;
  double distance = 0.0;
};

struct Dendrogram {
  std::vector<Merge> merges;       // in merge order
  std::vector<std::size_t> order;  // leaf order
};

// Average-linkage agglomerative clustering on d = 1 - |r|. Ties go to the
// pair whose smallest original indices are lowest; within a merge the
// cluster holding the lower index goes left. Throws DataError if the matrix
// is not square.
Dendrogram cluster(const CorrelationMatrix& corr);

std::vector<std::size_t> cluster_order(const CorrelationMatrix& corr);

}  // namespace psylex::stats

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psylex/features.hpp"
#include "psylex/trait_model.hpp"

namespace psylex {

// Minimizes ||y - Xw - b||^2 + lambda ||w||^2 with an unpenalized intercept.
// The design is the union of feature names (absent = 0). Solved by Householder
// QR on the centered design augmented with sqrt(lambda) I.
//
// Throws ConfigError for lambda < 0, DataError for fewer than two rows or
// mismatched lengths or mixed feature spaces.
LinearTraitModel train_ridge(const std::vector<FeatureVector>& x,
                             const std::vector<double>& y, double lambda,
                             std::string trait_name = "trait");

struct CrossValidation {
  std::vector<double> predictions;  // out-of-fold, in input order
  std::optional<double> r;          // Pearson r against y
};

// Round-robin folds: row i is held out in fold i % k.
CrossValidation cross_validate_ridge_detail(const std::vector<FeatureVector>& x,
                                            const std::vector<double>& y,
                                            double lambda, int k);

// Pearson r of out-of-fold predictions; nullopt if y is constant.
// Throws ConfigError when k < 2 or k > |x|.
std::optional<double> cross_validate_ridge(const std::vector<FeatureVector>& x,
                                           const std::vector<double>& y,
                                           double lambda, int k);

}  // namespace psylex

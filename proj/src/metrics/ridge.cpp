#include "psylex/ridge.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "psylex/error.hpp"
#include "psylex/stats.hpp"

namespace psylex {

LinearTraitModel train_ridge(const std::vector<FeatureVector>& x,
                             const std::vector<double>& y, double lambda,
                             std::string trait_name) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("ridge penalty must be a finite value >= 0");
  if (x.size() != y.size())
    throw DataError("ridge training has " + std::to_string(x.size()) +
                    " feature rows but " + std::to_string(y.size()) +
                    " labels");
  if (x.size() < 2) throw DataError("ridge training needs at least two rows");
  for (const auto& row : x)
    if (row.space != x.front().space)
      throw DataError("ridge training rows mix feature spaces");

  // Column per distinct feature name, in name order.
  std::map<std::string, Eigen::Index, std::less<>> column;
  for (const auto& row : x)
    for (const auto& [name, value] : row.values) column.emplace(name, 0);
  Eigen::Index next = 0;
  for (auto& [name, idx] : column) idx = next++;

  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index p = next;
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (const auto& [name, value] : x[static_cast<std::size_t>(i)].values)
      design(i, column.at(name)) = value;
  const Eigen::Map<const Eigen::VectorXd> target(y.data(), n);

  const Eigen::RowVectorXd x_mean = design.colwise().mean();
  const double y_mean = target.mean();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  if (p > 0) {
    // [Xc; sqrt(lambda) I] w = [yc; 0]
    Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(n + p, p);
    augmented.topRows(n) = design.rowwise() - x_mean;
    augmented.bottomRows(p).diagonal().setConstant(std::sqrt(lambda));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + p);
    rhs.head(n) = target.array() - y_mean;
    w = augmented.colPivHouseholderQr().solve(rhs);
  }

  LinearTraitModel model;
  model.trait_name = std::move(trait_name);
  model.feature_space = x.front().space;
  model.intercept = y_mean - x_mean.dot(w);
  for (const auto& [name, idx] : column) model.weights.emplace(name, w(idx));
  return model;
}

CrossValidation cross_validate_ridge_detail(const std::vector<FeatureVector>& x,
                                            const std::vector<double>& y,
                                            double lambda, int k) {
  if (k < 2) throw ConfigError("cross-validation needs at least two folds");
  if (x.size() != y.size())
    throw DataError("cross-validation inputs differ in length");
  if (static_cast<std::size_t>(k) > x.size())
    throw ConfigError("cross-validation has more folds (" + std::to_string(k) +
                      ") than rows (" + std::to_string(x.size()) + ")");

  const auto folds = static_cast<std::size_t>(k);
  CrossValidation out;
  out.predictions.assign(x.size(), 0.0);
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<FeatureVector> train_x;
    std::vector<double> train_y;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i % folds == fold) continue;
      train_x.push_back(x[i]);
      train_y.push_back(y[i]);
    }
    const auto model = train_ridge(train_x, train_y, lambda);
    for (std::size_t i = fold; i < x.size(); i += folds)
      out.predictions[i] = apply_trait_model(x[i], model);
  }
  out.r = stats::pearson(out.predictions, y);
  return out;
}

std::optional<double> cross_validate_ridge(const std::vector<FeatureVector>& x,
                                           const std::vector<double>& y,
                                           double lambda, int k) {
  return cross_validate_ridge_detail(x, y, lambda, k).r;
}

}  // namespace psylex

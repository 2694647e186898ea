#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "psylex/error.hpp"
#include "psylex/stats.hpp"

namespace psylex::stats {

double adjusted_r2(double r2, std::size_t n, std::size_t p) {
  if (n <= p + 1)
    throw DataError("adjusted R^2 needs n > p + 1 (n=" + std::to_string(n) +
                    ", p=" + std::to_string(p) + ")");
  return 1.0 - (1.0 - r2) * static_cast<double>(n - 1) /
                   static_cast<double>(n - p - 1);
}

double RegressionResult::coefficient(std::string_view predictor) const {
  for (std::size_t i = 0; i < predictors.size(); ++i)
    if (predictors[i] == predictor) return coefficients[i];
  throw DataError("no predictor named '" + std::string(predictor) + "'");
}

std::vector<double> standardize(std::span<const double> x) {
  if (x.size() < 2) throw DataError("standardization needs two values");
  const bool constant =
      std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  const double sd = sample_sd(x);
  if (constant || sd == 0.0)
    throw DataError("cannot standardize a constant variable");
  const double m = mean(x);
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m) / sd;
  return z;
}

RegressionResult ols_fit(const std::vector<Predictor>& predictors,
                         std::span<const double> y, bool standardize_all) {
  const std::size_t n = y.size();
  const std::size_t p = predictors.size();
  if (n <= p + 1)
    throw DataError("regression needs n > p + 1 (n=" + std::to_string(n) +
                    ", p=" + std::to_string(p) + ")");
  for (const auto& pred : predictors)
    if (pred.values.size() != n)
      throw DataError("predictor '" + pred.name + "' has " +
                      std::to_string(pred.values.size()) +
                      " values, expected " + std::to_string(n));

  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> column;
    if (standardize_all) {
      try {
        column = standardize(predictors[j].values);
      } catch (const DataError&) {
        throw DataError("predictor '" + predictors[j].name +
                        "' is constant and cannot be standardized");
      }
    } else {
      column = predictors[j].values;
    }
    for (std::size_t i = 0; i < n; ++i)
      design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) =
          column[i];
  }

  std::vector<double> yv(y.begin(), y.end());
  if (standardize_all) {
    try {
      yv = standardize(y);
    } catch (const DataError&) {
      throw DataError("dependent variable is constant");
    }
  }
  const Eigen::Map<const Eigen::VectorXd> target(yv.data(),
                                                 static_cast<Eigen::Index>(n));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  qr.compute(design);
  if (static_cast<std::size_t>(qr.rank()) < p + 1) {
    // Columns with weight in some null-space direction are collinear.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(design);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd kernel = lu.kernel();
    std::string names;
    for (Eigen::Index col = 0; col < kernel.rows(); ++col) {
      const double scale = kernel.cwiseAbs().maxCoeff();
      if (kernel.row(col).cwiseAbs().maxCoeff() <= 1e-8 * scale) continue;
      names += names.empty() ? "" : ", ";
      names += col == 0 ? std::string("(intercept)")
                        : predictors[static_cast<std::size_t>(col - 1)].name;
    }
    throw DataError("design matrix is rank deficient; collinear columns: " +
                    names);
  }
  const Eigen::VectorXd beta = qr.solve(target);
  const Eigen::VectorXd residuals = target - design * beta;

  const double ybar = target.mean();
  const double sst = (target.array() - ybar).square().sum();
  if (sst == 0.0) throw DataError("dependent variable is constant");
  const double sse = residuals.squaredNorm();

  RegressionResult out;
  out.n = n;
  out.p = p;
  out.intercept = beta(0);
  for (std::size_t j = 0; j < p; ++j) {
    out.predictors.push_back(predictors[j].name);
    out.coefficients.push_back(beta(static_cast<Eigen::Index>(j + 1)));
  }
  out.residuals.assign(residuals.data(), residuals.data() + n);
  out.r2 = 1.0 - sse / sst;
  out.adjusted_r2 = adjusted_r2(out.r2, n, p);
  return out;
}

}  // namespace psylex::stats

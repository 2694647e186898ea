#include <algorithm>
#include <cmath>
#include <set>

#include "psylex/error.hpp"
#include "psylex/report.hpp"

namespace psylex {

std::string_view to_string(Stars stars) {
  switch (stars) {
    case Stars::none: return "";
    case Stars::one: return "*";
    case Stars::two: return "**";
    case Stars::three: return "***";
  }
  return "";
}

Stars parse_stars(std::string_view s) {
  if (s.empty() || s == "none") return Stars::none;
  if (s == "*") return Stars::one;
  if (s == "**") return Stars::two;
  if (s == "***") return Stars::three;
  throw DataError("invalid significance marker '" + std::string(s) + "'");
}

Stars stars_for(double corrected_p) {
  if (corrected_p < 0.001) return Stars::three;
  if (corrected_p < 0.01) return Stars::two;
  if (corrected_p < 0.05) return Stars::one;
  return Stars::none;
}

std::vector<PsychModel> default_psych_models(
    const std::vector<std::string>& psych_metrics) {
  std::vector<PsychModel> models;
  for (const auto& m : psych_metrics) models.push_back({m, {m}});
  if (psych_metrics.size() > 1)
    models.push_back({std::string(kAllPsychModel), psych_metrics});
  return models;
}

namespace {

struct Cell {
  std::vector<double> y;
  std::vector<stats::Predictor> traditional;
  std::vector<stats::Predictor> psych;
};

Cell assemble(const MetricTable& table,
              const std::map<UnitRef, double>& judgements,
              const std::string& traditional, const PsychModel& model) {
  Cell cell;
  cell.traditional.push_back({traditional, {}});
  for (const auto& m : model.metrics) cell.psych.push_back({m, {}});
  for (const auto& [unit, y] : judgements) {
    const MetricValue* t = table.find(unit, traditional);
    if (!t || !t->value) continue;
    std::vector<double> p;
    for (const auto& m : model.metrics) {
      const MetricValue* v = table.find(unit, m);
      if (!v || !v->value) break;
      p.push_back(*v->value);
    }
    if (p.size() != model.metrics.size()) continue;
    cell.y.push_back(y);
    cell.traditional[0].values.push_back(*t->value);
    for (std::size_t k = 0; k < p.size(); ++k)
      cell.psych[k].values.push_back(p[k]);
  }
  return cell;
}

std::vector<double> absolute(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(),
                 [](double x) { return std::abs(x); });
  return out;
}

}  // namespace

std::vector<ComparisonRow> build_regression_table(
    const MetricTable& table, const std::map<UnitRef, double>& judgements,
    const RegressionTableSpec& spec) {
  if (spec.correction == stats::Correction::benjamini_hochberg)
    throw ConfigError("Benjamini-Hochberg correction is not implemented; use "
                      "bonferroni");
  if (spec.traditional.empty())
    throw ConfigError("regression table needs at least one traditional metric");
  if (spec.psych_models.empty())
    throw ConfigError("regression table needs at least one psychological model");
  if (table.level() != spec.level)
    throw DataError("regression spec level does not match the metric table");

  const auto names = table.metric_names();
  const std::set<std::string> available(names.begin(), names.end());
  auto require = [&](const std::string& m) {
    if (!available.contains(m))
      throw DataError("metric '" + m + "' is not in the " +
                      std::string(to_string(table.level())) + " metric table");
  };
  for (const auto& t : spec.traditional) require(t);
  for (const auto& model : spec.psych_models) {
    if (model.metrics.empty())
      throw ConfigError("psychological model '" + model.name +
                        "' has no metrics");
    for (const auto& m : model.metrics) require(m);
  }

  std::vector<ComparisonRow> rows;
  for (const auto& traditional : spec.traditional) {
    for (const auto& model : spec.psych_models) {
      ComparisonRow row;
      row.level = spec.level;
      row.judgement = spec.judgement;
      row.traditional = traditional;
      row.psych_model = model.name;

      Cell cell = assemble(table, judgements, traditional, model);
      row.n = cell.y.size();
      const std::size_t p_full = cell.psych.size() + 1;
      if (row.n <= p_full + 1) {
        row.reason = "insufficient observations (n=" + std::to_string(row.n) +
                     ", need > " + std::to_string(p_full + 1) + ")";
        rows.push_back(std::move(row));
        continue;
      }
      try {
        const auto fit_t = stats::ols_fit(cell.traditional, cell.y, true);
        const auto fit_p = stats::ols_fit(cell.psych, cell.y, true);
        auto both = cell.psych;
        both.push_back(cell.traditional[0]);
        const auto fit_pt = stats::ols_fit(both, cell.y, true);

        row.r2_T = fit_t.adjusted_r2;
        row.r2_P = fit_p.adjusted_r2;
        row.r2_PT = fit_pt.adjusted_r2;
        row.raw_r2_T = fit_t.r2;
        row.raw_r2_P = fit_p.r2;
        row.raw_r2_PT = fit_pt.r2;

        const auto test = stats::paired_t_test(absolute(fit_t.residuals),
                                               absolute(fit_pt.residuals));
        if (test) {
          row.p_raw = test->p;
        } else {
          row.reason = "residual difference is constant";
        }
      } catch (const DataError& e) {
        row.r2_T = row.r2_P = row.r2_PT = std::nullopt;
        row.raw_r2_T = row.raw_r2_P = row.raw_r2_PT = std::nullopt;
        row.reason = e.what();
      }
      rows.push_back(std::move(row));
    }
  }

  const std::size_t m = spec.comparisons.value_or(rows.size());
  for (auto& row : rows) {
    if (!row.p_raw) continue;
    row.p_corrected = stats::bonferroni(*row.p_raw, m);
    row.stars = stars_for(*row.p_corrected);
  }
  return rows;
}

}  // namespace psylex

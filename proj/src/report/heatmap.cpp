#include <map>

#include "psylex/error.hpp"
#include "psylex/report.hpp"

namespace psylex {

HeatmapData build_heatmap(const MetricTable& table, std::size_t min_pairs) {
  const auto names = table.metric_names();
  std::vector<std::map<UnitRef, double>> values(names.size());
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  for (const auto& row : table.rows())
    if (row.value) values[index.at(row.metric_name)][row.unit] = *row.value;

  const std::size_t m = names.size();
  std::vector<std::vector<std::optional<double>>> corr(
      m, std::vector<std::optional<double>>(m));
  std::vector<std::vector<std::size_t>> counts(m, std::vector<std::size_t>(m));
  std::vector<bool> eligible(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    counts[i][i] = values[i].size();
    corr[i][i] = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      std::vector<double> x, y;
      for (const auto& [unit, v] : values[i]) {
        auto it = values[j].find(unit);
        if (it == values[j].end()) continue;
        x.push_back(v);
        y.push_back(it->second);
      }
      counts[i][j] = counts[j][i] = x.size();
      if (x.size() >= min_pairs && x.size() >= 2) {
        eligible[i] = eligible[j] = true;
        corr[i][j] = corr[j][i] = stats::pearson(x, y);
      }
    }
  }

  HeatmapData out;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < m; ++i) {
    if (eligible[i]) {
      kept.push_back(i);
    } else {
      out.warnings.push_back("metric '" + names[i] + "' excluded: fewer than " +
                             std::to_string(min_pairs) +
                             " paired observations with any other metric");
    }
  }
  if (kept.size() < 2)
    throw DataError("heatmap needs at least two metrics with " +
                    std::to_string(min_pairs) + " paired observations");

  stats::CorrelationMatrix sub(kept.size(),
                               std::vector<std::optional<double>>(kept.size()));
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = 0; b < kept.size(); ++b)
      sub[a][b] = corr[kept[a]][kept[b]];

  const auto order = stats::cluster_order(sub);
  out.matrix.assign(order.size(),
                    std::vector<std::optional<double>>(order.size()));
  out.n.assign(order.size(), std::vector<std::size_t>(order.size()));
  for (std::size_t a = 0; a < order.size(); ++a) {
    out.order.push_back(names[kept[order[a]]]);
    for (std::size_t b = 0; b < order.size(); ++b) {
      out.matrix[a][b] = sub[order[a]][order[b]];
      out.n[a][b] = counts[kept[order[a]]][kept[order[b]]];
    }
  }
  return out;
}

}  // namespace psylex

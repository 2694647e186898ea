#include "psylex/agreement.hpp"

#include <cmath>
#include <map>

#include "psylex/error.hpp"

namespace psylex {

std::string_view to_string(Difference difference) {
  switch (difference) {
    case Difference::linear: return "linear";
    case Difference::interval: return "interval";
    case Difference::nominal: return "nominal";
  }
  return "";
}

Difference parse_difference(std::string_view s) {
  if (s == "linear") return Difference::linear;
  if (s == "interval") return Difference::interval;
  if (s == "nominal") return Difference::nominal;
  throw ConfigError("unknown difference function '" + std::string(s) +
                    "' (expected linear, interval or nominal)");
}

namespace {

double delta(double a, double b, Difference difference) {
  switch (difference) {
    case Difference::linear: return std::abs(a - b);
    case Difference::interval: return (a - b) * (a - b);
    case Difference::nominal: return a == b ? 0.0 : 1.0;
  }
  return 0.0;
}

}  // namespace

double krippendorff_alpha(const ReliabilityMatrix& reliability,
                          Difference difference) {
  std::size_t units = 0;
  for (const auto& row : reliability) units = std::max(units, row.size());

  // Distinct values, then the coincidence matrix over them.
  std::map<double, std::size_t> value_index;
  std::vector<std::vector<double>> pairable;
  for (std::size_t u = 0; u < units; ++u) {
    std::vector<double> values;
    for (const auto& row : reliability)
      if (u < row.size() && row[u]) values.push_back(*row[u]);
    if (values.size() < 2) continue;
    for (double v : values) value_index.emplace(v, 0);
    pairable.push_back(std::move(values));
  }
  if (pairable.size() < 2)
    throw DataError("krippendorff_alpha needs at least two units with two or "
                    "more ratings");

  std::vector<double> values;
  for (auto& [v, idx] : value_index) {
    idx = values.size();
    values.push_back(v);
  }
  const std::size_t k = values.size();
  std::vector<double> coincidence(k * k, 0.0);
  for (const auto& unit : pairable) {
    const double weight = 1.0 / static_cast<double>(unit.size() - 1);
    for (std::size_t i = 0; i < unit.size(); ++i)
      for (std::size_t j = 0; j < unit.size(); ++j)
        if (i != j)
          coincidence[value_index[unit[i]] * k + value_index[unit[j]]] +=
              weight;
  }

  std::vector<double> marginal(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) marginal[c] += coincidence[c * k + d];
    n += marginal[c];
  }

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      const double dist = delta(values[c], values[d], difference);
      observed += coincidence[c * k + d] * dist;
      expected += marginal[c] * marginal[d] * dist;
    }
  }
  if (expected == 0.0) return 1.0;
  return 1.0 - (n - 1.0) * observed / expected;
}

ReliabilityMatrix reliability_matrix(const Corpus& corpus, Level level,
                                     std::string_view dimension) {
  std::vector<const RatingList*> units;
  for (const auto& d : corpus.dialogs) {
    auto take = [&](const Annotations& a) {
      auto it = a.find(dimension);
      units.push_back(it == a.end() ? nullptr : &it->second);
    };
    if (level == Level::dialog) {
      take(d.annotations);
    } else {
      for (const auto& t : d.turns) take(t.annotations);
    }
  }

  // Annotators keyed by explicit id, or by position when ids are absent.
  std::map<std::string, std::size_t> annotator_row;
  std::vector<std::string> order;
  auto key_for = [](const RatingList& r, std::size_t i) {
    return r.annotators.empty() ? "#" + std::to_string(i) : r.annotators[i];
  };
  for (const RatingList* r : units) {
    if (!r) continue;
    for (std::size_t i = 0; i < r->values.size(); ++i) {
      auto key = key_for(*r, i);
      if (annotator_row.emplace(key, order.size()).second)
        order.push_back(std::move(key));
    }
  }

  ReliabilityMatrix matrix(order.size(),
                           std::vector<std::optional<double>>(units.size()));
  for (std::size_t u = 0; u < units.size(); ++u) {
    const RatingList* r = units[u];
    if (!r) continue;
    for (std::size_t i = 0; i < r->values.size(); ++i)
      matrix[annotator_row.at(key_for(*r, i))][u] = r->values[i];
  }
  return matrix;
}

AgreementReport agreement_report(const Corpus& corpus, Level level,
                                 Difference difference) {
  AgreementReport report;
  report.level = level;
  report.difference = difference;
  const auto dims = corpus.dimensions(level);
  if (dims.empty())
    throw DataError("corpus has no " + std::string(to_string(level)) +
                    "-level annotations");

  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& dim : dims) {
    std::optional<double> alpha;
    try {
      alpha = krippendorff_alpha(reliability_matrix(corpus, level, dim),
                                 difference);
    } catch (const DataError&) {
      // Too few paired ratings: reported as missing.
    }
    if (alpha) {
      sum += *alpha;
      ++count;
    }
    report.alpha.emplace(dim, alpha);
  }
  if (count > 0) report.mean = sum / static_cast<double>(count);
  return report;
}

}  // namespace psylex

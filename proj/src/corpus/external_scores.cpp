#include "psylex/external_scores.hpp"

#include <fstream>
#include <map>
#include <set>

#include "psylex/csv.hpp"
#include "psylex/error.hpp"

namespace psylex {

ExternalScoreTable load_external_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open external scores");
  const std::string p = path.string();
  csv::Reader reader(in, p);
  csv::expect_header(reader, {"dialog_id", "turn_id", "metric_name", "value"},
                     p);

  ExternalScoreTable table;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->fields.size() != 4)
      throw ParseError(p, rec->line, "expected 4 fields, got " +
                                         std::to_string(rec->fields.size()));
    ExternalScore row;
    row.line = rec->line;
    row.dialog_id = rec->fields[0];
    if (!rec->fields[1].empty()) row.turn_id = rec->fields[1];
    row.metric_name = rec->fields[2];
    if (row.dialog_id.empty())
      throw ParseError(p, rec->line, "empty dialog_id");
    if (row.metric_name.empty())
      throw ParseError(p, rec->line, "empty metric_name");
    auto value = csv::parse_double(rec->fields[3]);
    if (!value)
      throw ParseError(p, rec->line,
                       "value '" + rec->fields[3] + "' is not a finite number");
    row.value = *value;
    table.push_back(std::move(row));
  }
  return table;
}

AttachedScores attach_external_scores(const Corpus& corpus,
                                      const ExternalScoreTable& table) {
  std::vector<std::string> unresolved;
  for (const auto& row : table) {
    const bool ok = row.turn_id
                        ? corpus.find_turn(row.dialog_id, *row.turn_id) != nullptr
                        : corpus.find_dialog(row.dialog_id) != nullptr;
    if (!ok) {
      unresolved.push_back(
          (row.line ? "line " + std::to_string(row.line) + " " : "") +
          to_string(UnitRef{row.dialog_id, row.turn_id}) + " (" +
          row.metric_name + ")");
    }
  }
  if (!unresolved.empty()) {
    std::string msg = "external scores reference ids absent from the corpus:";
    for (const auto& u : unresolved) msg += "\n  " + u;
    throw DataError(msg);
  }

  // Turn rows in corpus order, then metric first-appearance order.
  std::vector<std::string> metrics;
  std::set<std::string> seen;
  for (const auto& row : table)
    if (seen.insert(row.metric_name).second) metrics.push_back(row.metric_name);

  std::map<std::pair<UnitRef, std::string>, double> turn_values, dialog_values;
  for (const auto& row : table) {
    UnitRef unit{row.dialog_id, row.turn_id};
    auto& target = row.turn_id ? turn_values : dialog_values;
    if (!target.emplace(std::make_pair(unit, row.metric_name), row.value).second)
      throw DataError("duplicate external score " + row.metric_name + " for " +
                      to_string(unit));
  }

  AttachedScores out;
  for (const auto& d : corpus.dialogs) {
    for (const auto& metric : metrics) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& t : d.turns) {
        UnitRef unit{d.dialog_id, t.turn_id};
        auto it = turn_values.find({unit, metric});
        if (it == turn_values.end()) continue;
        sum += it->second;
        ++count;
      }
      UnitRef dialog_unit{d.dialog_id, std::nullopt};
      if (auto it = dialog_values.find({dialog_unit, metric});
          it != dialog_values.end()) {
        out.dialog.add(MetricValue::present(dialog_unit, metric, it->second));
      } else if (count > 0) {
        out.dialog.add(MetricValue::present(dialog_unit, metric,
                                            sum / static_cast<double>(count)));
      }
    }
    for (const auto& t : d.turns) {
      UnitRef unit{d.dialog_id, t.turn_id};
      for (const auto& metric : metrics)
        if (auto it = turn_values.find({unit, metric}); it != turn_values.end())
          out.turn.add(MetricValue::present(unit, metric, it->second));
    }
  }
  return out;
}

}  // namespace psylex

#include "psylex/metric_table.hpp"

#include <set>

#include "psylex/error.hpp"

namespace psylex {

std::string_view to_string(Level level) {
  return level == Level::turn ? "turn" : "dialog";
}

Level parse_level(std::string_view s) {
  if (s == "turn") return Level::turn;
  if (s == "dialog") return Level::dialog;
  throw DataError("unknown level '" + std::string(s) + "'");
}

std::string_view to_string(DegenerateReason reason) {
  switch (reason) {
    case DegenerateReason::empty_text: return "empty_text";
    case DegenerateReason::zero_emotion_vector: return "zero_emotion_vector";
    case DegenerateReason::constant_vector: return "constant_vector";
    case DegenerateReason::no_partner_turn: return "no_partner_turn";
  }
  return "";
}

DegenerateReason parse_degenerate_reason(std::string_view s) {
  if (s == "empty_text") return DegenerateReason::empty_text;
  if (s == "zero_emotion_vector") return DegenerateReason::zero_emotion_vector;
  if (s == "constant_vector") return DegenerateReason::constant_vector;
  if (s == "no_partner_turn") return DegenerateReason::no_partner_turn;
  throw DataError("unknown degenerate reason '" + std::string(s) + "'");
}

std::string to_string(const UnitRef& unit) {
  return unit.turn_id ? unit.dialog_id + "/" + *unit.turn_id : unit.dialog_id;
}

MetricValue MetricValue::present(UnitRef unit, std::string metric,
                                 double value) {
  return {std::move(unit), std::move(metric), value, std::nullopt};
}

MetricValue MetricValue::missing(UnitRef unit, std::string metric,
                                 DegenerateReason reason) {
  return {std::move(unit), std::move(metric), std::nullopt, reason};
}

void MetricTable::add(MetricValue row) {
  if (row.metric_name.empty()) throw DataError("metric row without a name");
  if (row.value.has_value() == row.degenerate_reason.has_value())
    throw DataError("metric " + row.metric_name + " for " +
                    to_string(row.unit) +
                    ": a row is missing exactly when it has a reason");
  auto key = std::make_pair(row.unit, row.metric_name);
  if (index_.contains(key))
    throw DataError("duplicate metric " + row.metric_name + " for " +
                    to_string(row.unit));
  index_.emplace(std::move(key), rows_.size());
  rows_.push_back(std::move(row));
}

void MetricTable::merge(const MetricTable& other) {
  if (other.level_ != level_)
    throw DataError("cannot merge metric tables of different levels");
  for (const auto& row : other.rows_) add(row);
}

const MetricValue* MetricTable::find(const UnitRef& unit,
                                     std::string_view metric) const {
  auto it = index_.find(std::make_pair(unit, std::string(metric)));
  return it == index_.end() ? nullptr : &rows_[it->second];
}

std::vector<std::string> MetricTable::metric_names() const {
  std::vector<std::string> names;
  std::set<std::string_view> seen;
  for (const auto& row : rows_)
    if (seen.insert(row.metric_name).second) names.push_back(row.metric_name);
  return names;
}

std::vector<UnitRef> MetricTable::units() const {
  std::vector<UnitRef> out;
  std::set<UnitRef> seen;
  for (const auto& row : rows_)
    if (seen.insert(row.unit).second) out.push_back(row.unit);
  return out;
}

}  // namespace psylex

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psylex {

enum class Level { turn, dialog };

std::string_view to_string(Level level);
Level parse_level(std::string_view s);

enum class DegenerateReason {
  empty_text,
  zero_emotion_vector,
  constant_vector,
  no_partner_turn,
};

std::string_view to_string(DegenerateReason reason);
DegenerateReason parse_degenerate_reason(std::string_view s);

// Identifies a scoring unit. Dialog-level units leave turn_id empty.
struct UnitRef {
  std::string dialog_id;
  std::optional<std::string> turn_id;

  auto operator<=>(const UnitRef&) const = default;
};

std::string to_string(const UnitRef& unit);

struct MetricValue {
  UnitRef unit;
  std::string metric_name;
  std::optional<double> value;
  std::optional<DegenerateReason> degenerate_reason;

  static MetricValue present(UnitRef unit, std::string metric, double value);
  static MetricValue missing(UnitRef unit, std::string metric,
                             DegenerateReason reason);

  bool operator==(const MetricValue&) const = default;
};

// Long-format table of metric values at one level. Row order is the order of
// insertion; (unit, metric_name) is unique.
class MetricTable {
 public:
  explicit MetricTable(Level level = Level::turn) : level_(level) {}

  Level level() const noexcept { return level_; }
  const std::vector<MetricValue>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  // Throws DataError when (unit, metric) already exists, or when the value
  // and degenerate reason disagree about missingness.
  void add(MetricValue row);

  // Appends every row of `other` (same level required).
  void merge(const MetricTable& other);

  const MetricValue* find(const UnitRef& unit,
                          std::string_view metric) const;

  // Metric names in first-appearance order.
  std::vector<std::string> metric_names() const;

  // Distinct units in first-appearance order.
  std::vector<UnitRef> units() const;

  bool operator==(const MetricTable& other) const {
    return level_ == other.level_ && rows_ == other.rows_;
  }

 private:
  Level level_;
  std::vector<MetricValue> rows_;
  std::map<std::pair<UnitRef, std::string>, std::size_t, std::less<>> index_;
};

}  // namespace psylex

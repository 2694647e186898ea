#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "psylex/metric_table.hpp"

namespace psylex {

enum class Speaker { agent, partner };

std::string_view to_string(Speaker speaker);

// Ratings for one judgement dimension on one unit. Annotator identity is the
// position in `values` unless `annotators` is non-empty, in which case it
// holds one id per value. A nullopt value is a skipped rating.
struct RatingList {
  std::vector<std::optional<double>> values;
  std::vector<std::string> annotators;

  std::vector<double> present() const;
};

using Annotations = std::map<std::string, RatingList, std::less<>>;

struct Turn {
  std::string turn_id;
  Speaker speaker = Speaker::agent;
  std::string text;
  Annotations annotations;
};

struct Dialog {
  std::string dialog_id;
  std::string system_id;
  std::vector<Turn> turns;
  Annotations annotations;
};

struct ScaleBounds {
  double min = 1.0;
  double max = 5.0;
};

struct Corpus {
  std::string corpus_id;
  std::vector<Dialog> dialogs;
  std::map<std::string, ScaleBounds, std::less<>> scale_bounds;

  const Dialog* find_dialog(std::string_view dialog_id) const;
  const Turn* find_turn(std::string_view dialog_id,
                        std::string_view turn_id) const;

  // Distinct system ids in first-appearance order.
  std::vector<std::string> system_ids() const;

  // Dimensions that carry at least one rating at the given level.
  std::vector<std::string> dimensions(Level level) const;

  // Turns whose text is empty, as (dialog_id, turn_id) pairs.
  std::vector<UnitRef> empty_turns() const;
};

struct LoadOptions {
  // Applied to any dimension not declared by a header record.
  ScaleBounds default_bounds{1.0, 5.0};
};

// Reads a JSONL corpus, one dialog object per line. An optional first record
// of the form {"corpus_id": str, "scale_bounds": {dim: [min, max]}} (no
// "dialog_id" key) declares corpus metadata. Blank lines are skipped.
Corpus load_corpus(const std::filesystem::path& path,
                   const LoadOptions& options = {});

// Checks id uniqueness, non-empty turn lists and rating bounds.
void validate(const Corpus& corpus);

// Median; the mean of the two middle values for an even count. Empty input
// yields nullopt.
std::optional<double> consensus_label(std::vector<double> ratings);

// Consensus label per unit for one dimension. Units without ratings are
// omitted.
std::map<UnitRef, double> consensus_labels(const Corpus& corpus, Level level,
                                           std::string_view dimension);

}  // namespace psylex

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psylex/corpus.hpp"
#include "psylex/metric_table.hpp"

namespace psylex {

struct ExternalScore {
  std::size_t line = 0;
  std::string dialog_id;
  std::optional<std::string> turn_id;  // nullopt for dialog-level rows
  std::string metric_name;
  double value = 0.0;
};

using ExternalScoreTable = std::vector<ExternalScore>;

// CSV with header dialog_id,turn_id,metric_name,value. An empty turn_id
// marks a dialog-level row.
ExternalScoreTable load_external_scores(const std::filesystem::path& path);

struct AttachedScores {
  MetricTable turn{Level::turn};
  MetricTable dialog{Level::dialog};
};

// Turn rows are copied verbatim. A metric's dialog value is the explicit
// dialog-level row when present, otherwise the mean of that dialog's turn
// rows. Throws DataError listing every row whose ids do not resolve.
AttachedScores attach_external_scores(const Corpus& corpus,
                                      const ExternalScoreTable& table);

}  // namespace psylex

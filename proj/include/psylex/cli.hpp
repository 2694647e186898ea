#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psylex/agreement.hpp"
#include "psylex/features.hpp"
#include "psylex/scoring.hpp"
#include "psylex/stats.hpp"

namespace psylex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct ResourcePaths {
  std::optional<std::filesystem::path> emotion_lexicon;
  std::optional<std::filesystem::path> function_words;
  std::optional<std::filesystem::path> topic_model;
  std::optional<std::filesystem::path> agreeableness_model;
  std::optional<std::filesystem::path> empathy_model;
};

struct EvaluateOptions {
  std::optional<std::filesystem::path> scores;
  std::string turn_judgement = "appropriateness";
  std::string dialog_judgement = "overall";
  // Empty: every external metric at the level.
  std::vector<std::string> traditional;
  std::size_t min_pairs = 3;
};

struct TrainOptions {
  std::optional<std::filesystem::path> features;
  std::optional<std::filesystem::path> labels;
  double lambda = 1.0;
  int folds = 10;
  FeatureSpace feature_space = FeatureSpace::topic;
  std::string trait_name = "trait";
};

struct RunConfig {
  ResourcePaths resources;
  ScoringConfig scoring;
  Difference agreement_difference = Difference::linear;
  stats::Correction correction = stats::Correction::bonferroni;
  std::optional<std::size_t> comparisons;
  std::filesystem::path output_dir = ".";
  EvaluateOptions evaluate;
  TrainOptions train;
};

// Applies `key=value` to a JSON document; dotted keys address nested
// objects. The value is parsed as JSON when possible, else taken as a string.
void apply_override(std::string& json_text, const std::string& assignment);

// Parses a config document (after overrides). Unknown keys are rejected.
// Throws ConfigError.
RunConfig parse_config(const std::string& json_text);

// Reads an optional config file, applies overrides and parses. Relative
// input paths (resources, scores, training files) resolve against the config
// file's directory; output_dir stays relative to the working directory.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides);

// Entry point shared by the binary and in-process tests. Returns the exit
// code: 0 success, 2 configuration or usage error, 3 data error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace psylex::cli

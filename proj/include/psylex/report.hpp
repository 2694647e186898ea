#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psylex/corpus.hpp"
#include "psylex/metric_table.hpp"
#include "psylex/stats.hpp"

namespace psylex {

struct HeatmapData {
  std::vector<std::string> order;
  // matrix[i][j] is the correlation of order[i] and order[j]; nullopt when
  // the pair has too few observations or zero variance.
  std::vector<std::vector<std::optional<double>>> matrix;
  std::vector<std::vector<std::size_t>> n;
  std::vector<std::string> warnings;
};

// Pairwise Pearson correlations over units where both metrics are present,
// reordered by clustering on absolute correlation. A metric that reaches
// `min_pairs` observations with no other metric is dropped with a warning.
// Throws DataError when fewer than two metrics remain.
HeatmapData build_heatmap(const MetricTable& table, std::size_t min_pairs = 3);

enum class Stars { none, one, two, three };

std::string_view to_string(Stars stars);
Stars parse_stars(std::string_view s);
// Thresholds 0.05 / 0.01 / 0.001 on the corrected p-value.
Stars stars_for(double corrected_p);

struct PsychModel {
  std::string name;
  std::vector<std::string> metrics;
};

struct RegressionTableSpec {
  Level level = Level::turn;
  std::string judgement;
  std::vector<std::string> traditional;
  // Defaults: one model per psychological metric plus "All Psych.".
  std::vector<PsychModel> psych_models;
  stats::Correction correction = stats::Correction::bonferroni;
  // Overrides the Bonferroni comparison count (default: table row count).
  std::optional<std::size_t> comparisons;
};

// Single-metric models for each name plus "All Psych." over all of them.
std::vector<PsychModel> default_psych_models(
    const std::vector<std::string>& psych_metrics);

inline constexpr std::string_view kAllPsychModel = "All Psych.";

struct ComparisonRow {
  Level level = Level::turn;
  std::string judgement;
  std::string traditional;
  std::string psych_model;
  std::size_t n = 0;
  // Adjusted R^2 of the T, P and P+T designs.
  std::optional<double> r2_T, r2_P, r2_PT;
  // Unadjusted R^2, kept for the nesting check.
  std::optional<double> raw_r2_T, raw_r2_P, raw_r2_PT;
  std::optional<double> p_raw;
  std::optional<double> p_corrected;
  Stars stars = Stars::none;
  std::string reason;  // why values are missing, empty otherwise
};

// Fits T, P and P+T on standardized variables for every
// (traditional, psych model) cell with listwise deletion, compares absolute
// residuals of T and P+T with a paired t-test and corrects across the table.
// Throws DataError when a named metric is absent from the table.
std::vector<ComparisonRow> build_regression_table(
    const MetricTable& table, const std::map<UnitRef, double>& judgements,
    const RegressionTableSpec& spec);

struct SystemProfile {
  std::string system_id;
  std::map<std::string, std::optional<double>> raw_mean;
  std::map<std::string, std::optional<double>> normalized;
};

// Turn rows are averaged within each dialog, then dialogs within a system;
// dialog rows are averaged within a system. Normalization is left empty.
std::vector<SystemProfile> system_raw_means(const MetricTable& table,
                                            const Corpus& corpus);

// system_raw_means followed by min-max normalization across systems per
// metric. Throws DataError for fewer than two systems.
std::vector<SystemProfile> build_system_profiles(const MetricTable& table,
                                                 const Corpus& corpus);

}  // namespace psylex

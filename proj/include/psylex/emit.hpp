#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "psylex/agreement.hpp"
#include "psylex/metric_table.hpp"
#include "psylex/report.hpp"

namespace psylex {

// Every renderer is deterministic: fixed column and key order, numbers
// through format_number, missing values as empty CSV fields or JSON null.

std::string metric_table_csv(const MetricTable& table);
// One table per level present, in order of first appearance.
std::vector<MetricTable> parse_metric_table_csv(const std::string& text);

std::string heatmap_json(const HeatmapData& heatmap);
HeatmapData parse_heatmap_json(const std::string& text);

std::string regression_csv(const std::vector<ComparisonRow>& rows);
std::vector<ComparisonRow> parse_regression_csv(const std::string& text);

std::string profiles_csv(const std::vector<SystemProfile>& profiles);
std::vector<SystemProfile> parse_profiles_csv(const std::string& text);

std::string agreement_json(const std::vector<AgreementReport>& reports);

std::string metric_table_json(const MetricTable& table);
std::string regression_json(const std::vector<ComparisonRow>& rows);
std::string profiles_json(const std::vector<SystemProfile>& profiles);

enum class Format { csv, json };

// Renders and writes one artifact. Throws ConfigError for a format the
// artifact has no renderer for (heatmaps are JSON only) and IoError on write
// failure.
void emit(const MetricTable& table, const std::filesystem::path& path,
          Format format);
void emit(const HeatmapData& heatmap, const std::filesystem::path& path,
          Format format);
void emit(const std::vector<ComparisonRow>& rows,
          const std::filesystem::path& path, Format format);
void emit(const std::vector<SystemProfile>& profiles,
          const std::filesystem::path& path, Format format);

// Writes the bytes to `path`. Throws IoError naming the path on failure.
void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace psylex

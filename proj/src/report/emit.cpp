#include "psylex/emit.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psylex/csv.hpp"
#include "psylex/error.hpp"
#include "psylex/format.hpp"

namespace psylex {

using nlohmann::ordered_json;

namespace {

ordered_json number_or_null(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round_significant(*v);
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv::escape(fields[i]);
  }
  line += '\n';
  return line;
}

std::vector<csv::Record> read_records(const std::string& text,
                                      const std::vector<std::string>& header,
                                      const std::string& what) {
  std::istringstream in(text);
  csv::Reader reader(in, what);
  csv::expect_header(reader, header, what);
  std::vector<csv::Record> out;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->fields.size() != header.size())
      throw ParseError(what, rec->line,
                       "expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(rec->fields.size()));
    out.push_back(std::move(*rec));
  }
  return out;
}

std::optional<double> optional_number(const std::string& field,
                                      const std::string& what,
                                      std::size_t line) {
  if (field.empty()) return std::nullopt;
  auto v = csv::parse_double(field);
  if (!v) throw ParseError(what, line, "'" + field + "' is not a number");
  return v;
}

const std::vector<std::string> kMetricHeader{
    "level", "dialog_id", "turn_id", "metric_name", "value",
    "degenerate_reason"};
const std::vector<std::string> kRegressionHeader{
    "level", "judgement", "traditional", "psych_model", "n", "r2_T",
    "r2_P",  "r2_PT",     "p_raw",       "p_corrected", "stars"};
const std::vector<std::string> kProfileHeader{"system_id", "metric",
                                              "raw_mean", "normalized"};

}  // namespace

std::string metric_table_csv(const MetricTable& table) {
  std::string out = join_row(kMetricHeader);
  const std::string level(to_string(table.level()));
  for (const auto& row : table.rows()) {
    out += join_row({level, row.unit.dialog_id, row.unit.turn_id.value_or(""),
                     row.metric_name, format_number(row.value),
                     row.degenerate_reason
                         ? std::string(to_string(*row.degenerate_reason))
                         : std::string()});
  }
  return out;
}

std::vector<MetricTable> parse_metric_table_csv(const std::string& text) {
  std::vector<MetricTable> tables;
  for (const auto& rec : read_records(text, kMetricHeader, "metric table")) {
    const auto& f = rec.fields;
    const Level level = parse_level(f[0]);
    auto it = std::find_if(tables.begin(), tables.end(),
                           [&](const MetricTable& t) { return t.level() == level; });
    if (it == tables.end()) {
      tables.emplace_back(level);
      it = std::prev(tables.end());
    }
    UnitRef unit{f[1], f[2].empty() ? std::nullopt
                                    : std::optional<std::string>(f[2])};
    if (f[5].empty()) {
      auto v = optional_number(f[4], "metric table", rec.line);
      if (!v) throw ParseError("metric table", rec.line, "missing value");
      it->add(MetricValue::present(std::move(unit), f[3], *v));
    } else {
      it->add(MetricValue::missing(std::move(unit), f[3],
                                   parse_degenerate_reason(f[5])));
    }
  }
  return tables;
}

std::string metric_table_json(const MetricTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows()) {
    ordered_json r;
    r["level"] = std::string(to_string(table.level()));
    r["dialog_id"] = row.unit.dialog_id;
    r["turn_id"] = row.unit.turn_id ? ordered_json(*row.unit.turn_id) : nullptr;
    r["metric_name"] = row.metric_name;
    r["value"] = number_or_null(row.value);
    r["degenerate_reason"] =
        row.degenerate_reason
            ? ordered_json(std::string(to_string(*row.degenerate_reason)))
            : nullptr;
    rows.push_back(std::move(r));
  }
  return rows.dump(2) + "\n";
}

std::string heatmap_json(const HeatmapData& heatmap) {
  ordered_json doc;
  doc["order"] = heatmap.order;
  ordered_json matrix = ordered_json::array();
  for (const auto& row : heatmap.matrix) {
    ordered_json r = ordered_json::array();
    for (const auto& v : row) r.push_back(number_or_null(v));
    matrix.push_back(std::move(r));
  }
  doc["matrix"] = std::move(matrix);
  doc["n"] = heatmap.n;
  return doc.dump(2) + "\n";
}

HeatmapData parse_heatmap_json(const std::string& text) {
  HeatmapData out;
  try {
    const auto doc = ordered_json::parse(text);
    out.order = doc.at("order").get<std::vector<std::string>>();
    for (const auto& row : doc.at("matrix")) {
      std::vector<std::optional<double>> r;
      for (const auto& v : row)
        r.push_back(v.is_null() ? std::nullopt
                                : std::optional<double>(v.get<double>()));
      out.matrix.push_back(std::move(r));
    }
    out.n = doc.at("n").get<std::vector<std::vector<std::size_t>>>();
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("malformed heatmap JSON: ") + e.what());
  }
  const std::size_t m = out.order.size();
  if (out.matrix.size() != m || out.n.size() != m)
    throw DataError("heatmap matrix does not match its order");
  for (std::size_t i = 0; i < m; ++i)
    if (out.matrix[i].size() != m || out.n[i].size() != m)
      throw DataError("heatmap matrix is not square");
  return out;
}

std::string regression_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = join_row(kRegressionHeader);
  for (const auto& r : rows) {
    out += join_row({std::string(to_string(r.level)), r.judgement,
                     r.traditional, r.psych_model, std::to_string(r.n),
                     format_number(r.r2_T), format_number(r.r2_P),
                     format_number(r.r2_PT), format_number(r.p_raw),
                     format_number(r.p_corrected),
                     std::string(to_string(r.stars))});
  }
  return out;
}

std::vector<ComparisonRow> parse_regression_csv(const std::string& text) {
  const std::string what = "regression table";
  std::vector<ComparisonRow> rows;
  for (const auto& rec : read_records(text, kRegressionHeader, what)) {
    const auto& f = rec.fields;
    ComparisonRow r;
    r.level = parse_level(f[0]);
    r.judgement = f[1];
    r.traditional = f[2];
    r.psych_model = f[3];
    auto n = csv::parse_double(f[4]);
    if (!n || *n < 0) throw ParseError(what, rec.line, "invalid n");
    r.n = static_cast<std::size_t>(*n);
    r.r2_T = optional_number(f[5], what, rec.line);
    r.r2_P = optional_number(f[6], what, rec.line);
    r.r2_PT = optional_number(f[7], what, rec.line);
    r.p_raw = optional_number(f[8], what, rec.line);
    r.p_corrected = optional_number(f[9], what, rec.line);
    r.stars = parse_stars(f[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string regression_json(const std::vector<ComparisonRow>& rows) {
  ordered_json doc = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json o;
    o["level"] = std::string(to_string(r.level));
    o["judgement"] = r.judgement;
    o["traditional"] = r.traditional;
    o["psych_model"] = r.psych_model;
    o["n"] = r.n;
    o["r2_T"] = number_or_null(r.r2_T);
    o["r2_P"] = number_or_null(r.r2_P);
    o["r2_PT"] = number_or_null(r.r2_PT);
    o["p_raw"] = number_or_null(r.p_raw);
    o["p_corrected"] = number_or_null(r.p_corrected);
    o["stars"] = std::string(to_string(r.stars));
    if (!r.reason.empty()) o["reason"] = r.reason;
    doc.push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

std::string profiles_csv(const std::vector<SystemProfile>& profiles) {
  std::string out = join_row(kProfileHeader);
  for (const auto& p : profiles) {
    for (const auto& [metric, raw] : p.raw_mean) {
      auto it = p.normalized.find(metric);
      out += join_row({p.system_id, metric, format_number(raw),
                       format_number(it == p.normalized.end()
                                         ? std::nullopt
                                         : it->second)});
    }
  }
  return out;
}

std::vector<SystemProfile> parse_profiles_csv(const std::string& text) {
  const std::string what = "profiles";
  std::vector<SystemProfile> out;
  for (const auto& rec : read_records(text, kProfileHeader, what)) {
    const auto& f = rec.fields;
    if (out.empty() || out.back().system_id != f[0]) {
      out.emplace_back();
      out.back().system_id = f[0];
    }
    out.back().raw_mean[f[1]] = optional_number(f[2], what, rec.line);
    out.back().normalized[f[1]] = optional_number(f[3], what, rec.line);
  }
  return out;
}

std::string profiles_json(const std::vector<SystemProfile>& profiles) {
  ordered_json doc = ordered_json::array();
  for (const auto& p : profiles) {
    ordered_json o;
    o["system_id"] = p.system_id;
    ordered_json raw = ordered_json::object();
    ordered_json norm = ordered_json::object();
    for (const auto& [metric, v] : p.raw_mean) raw[metric] = number_or_null(v);
    for (const auto& [metric, v] : p.normalized)
      norm[metric] = number_or_null(v);
    o["raw_mean"] = std::move(raw);
    o["normalized"] = std::move(norm);
    doc.push_back(std::move(o));
  }
  return doc.dump(2) + "\n";
}

std::string agreement_json(const std::vector<AgreementReport>& reports) {
  ordered_json doc = ordered_json::object();
  for (const auto& r : reports) {
    ordered_json o;
    o["difference"] = std::string(to_string(r.difference));
    ordered_json alpha = ordered_json::object();
    for (const auto& [dim, a] : r.alpha) alpha[dim] = number_or_null(a);
    o["alpha"] = std::move(alpha);
    o["mean"] = number_or_null(r.mean);
    doc[std::string(to_string(r.level))] = std::move(o);
  }
  return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError(path.string(), "write failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

[[noreturn]] void unsupported(const char* artifact, Format format) {
  throw ConfigError(std::string(artifact) + " cannot be emitted as " +
                    (format == Format::csv ? "csv" : "json"));
}

}  // namespace

void emit(const MetricTable& table, const std::filesystem::path& path,
          Format format) {
  write_file(path, format == Format::csv ? metric_table_csv(table)
                                         : metric_table_json(table));
}

void emit(const HeatmapData& heatmap, const std::filesystem::path& path,
          Format format) {
  if (format != Format::json) unsupported("heatmap", format);
  write_file(path, heatmap_json(heatmap));
}

void emit(const std::vector<ComparisonRow>& rows,
          const std::filesystem::path& path, Format format) {
  write_file(path, format == Format::csv ? regression_csv(rows)
                                         : regression_json(rows));
}

void emit(const std::vector<SystemProfile>& profiles,
          const std::filesystem::path& path, Format format) {
  write_file(path, format == Format::csv ? profiles_csv(profiles)
                                         : profiles_json(profiles));
}

}  // namespace psylex

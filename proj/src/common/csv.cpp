#include "psylex/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <system_error>

#include "psylex/error.hpp"

namespace psylex::csv {

Reader::Reader(std::istream& in, std::string path)
    : in_(in), path_(std::move(path)) {}

std::optional<Record> Reader::next() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  ++line_;

  Record record;
  record.line = line_;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  std::size_t i = 0;
  for (;;) {
    if (i >= line.size()) {
      if (quoted) {
        // Quoted field continues on the next physical line.
        std::string more;
        if (!std::getline(in_, more))
          throw ParseError(path_, record.line, "unterminated quoted field");
        ++line_;
        field += '\n';
        line = std::move(more);
        i = 0;
        continue;
      }
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      record.fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\r' && i + 1 == line.size()) {
      // CRLF line ending
    } else {
      field += c;
    }
    ++i;
  }
  record.fields.push_back(std::move(field));
  return record;
}

void expect_header(Reader& reader, const std::vector<std::string>& expected,
                   const std::string& path) {
  auto header = reader.next();
  if (!header) throw ParseError(path, 1, "missing header row");
  auto& fields = header->fields;
  // Tolerate a UTF-8 byte order mark on the first field.
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF"))
    fields[0].erase(0, 3);
  if (fields != expected) {
    std::string want;
    for (const auto& f : expected) want += (want.empty() ? "" : ",") + f;
    throw ParseError(path, header->line, "expected header '" + want + "'");
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

}  // namespace psylex::csv

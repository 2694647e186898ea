#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace psylex::csv {

struct Record {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

// Minimal RFC 4180 reader: comma separated, double-quote quoting with ""
// escapes, quoted fields may span lines. CR before LF is dropped.
class Reader {
 public:
  Reader(std::istream& in, std::string path);

  // Returns nullopt at end of input. Throws ParseError on an unterminated
  // quoted field.
  std::optional<Record> next();

 private:
  std::istream& in_;
  std::string path_;
  std::size_t line_ = 0;
};

// Reads the header row and checks it against `expected` exactly.
// Returns the reader positioned on the first data row.
void expect_header(Reader& reader, const std::vector<std::string>& expected,
                   const std::string& path);

std::string escape(std::string_view field);

// Parses a full-string finite double; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);

}  // namespace psylex::csv

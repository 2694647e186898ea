#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psylex {

// Base for all library errors. The CLI maps ConfigError to exit code 2 and
// DataError to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or resource wiring: wrong category sets, missing
// resources, incompatible feature spaces, invalid parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data that violates its declared schema or invariants.
class DataError : public Error {
 public:
  using Error::Error;
};

// Syntax error in an input file, tagged with its 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : DataError(path + ":" + std::to_string(line) + ": " + what),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  IoError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace psylex

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace psylex {

// term -> category -> weight. Serves both emotion lexicons and topic models
// (where categories are topic ids).
class WeightedLexicon {
 public:
  struct Entry {
    std::size_t category;  // index into categories()
    double weight;
  };

  std::string name;
  std::string description;

  const std::vector<std::string>& categories() const noexcept {
    return categories_;
  }
  std::size_t category_index(std::string_view category) const;  // npos if absent

  // Adds weight to (term, category); repeated pairs accumulate. The term is
  // lowercased. Throws DataError on a non-finite weight.
  void add(std::string_view term, std::string_view category, double weight);

  // Declares a category with no entries yet.
  std::size_t add_category(std::string_view category);

  // Entries for a term sorted by category index; empty when absent.
  const std::vector<Entry>& lookup(std::string_view term) const;

  double weight(std::string_view term, std::string_view category) const;

  std::size_t term_count() const noexcept { return entries_.size(); }

  // Smallest weight over all entries; 0 for an empty lexicon.
  double min_weight() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> categories_;
  std::unordered_map<std::string, std::size_t> category_index_;
  std::unordered_map<std::string, std::vector<Entry>> entries_;
};

// CSV with header term,category,weight.
WeightedLexicon load_weighted_lexicon(const std::filesystem::path& path);

// Literal tokens and terminal-wildcard prefix patterns ("walk*") mapped to
// categories. A token matching several patterns of one category counts once
// for that category.
class CategoryDictionary {
 public:
  const std::vector<std::string>& categories() const noexcept {
    return categories_;
  }
  std::size_t category_index(std::string_view category) const;

  // Throws DataError for an empty pattern, an interior '*', or a bare "*".
  void add(std::string_view pattern, std::string_view category);

  // Indices of every category the token belongs to, ascending, no repeats.
  std::vector<std::size_t> match(std::string_view token) const;

  std::size_t pattern_count() const noexcept {
    return literals_.size() + prefixes_.size();
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t intern(std::string_view category);

  std::vector<std::string> categories_;
  std::unordered_map<std::string, std::size_t> category_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> literals_;
  std::unordered_map<std::string, std::vector<std::size_t>> prefixes_;
  std::size_t max_prefix_ = 0;
};

// CSV with header pattern,category.
CategoryDictionary load_category_dictionary(const std::filesystem::path& path);

}  // namespace psylex

#include "psylex/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "psylex/csv.hpp"
#include "psylex/error.hpp"
#include "psylex/tokenizer.hpp"

namespace psylex {

std::size_t WeightedLexicon::category_index(std::string_view category) const {
  auto it = category_index_.find(std::string(category));
  return it == category_index_.end() ? npos : it->second;
}

std::size_t WeightedLexicon::add_category(std::string_view category) {
  auto [it, inserted] =
      category_index_.emplace(std::string(category), categories_.size());
  if (inserted) categories_.emplace_back(category);
  return it->second;
}

void WeightedLexicon::add(std::string_view term, std::string_view category,
                          double weight) {
  if (!std::isfinite(weight))
    throw DataError("non-finite weight for '" + std::string(term) + "'");
  if (category.empty()) throw DataError("empty category name");
  const std::size_t c = add_category(category);
  auto& entries = entries_[to_lower(term)];
  auto it = std::lower_bound(
      entries.begin(), entries.end(), c,
      [](const Entry& e, std::size_t idx) { return e.category < idx; });
  if (it != entries.end() && it->category == c) {
    it->weight += weight;
  } else {
    entries.insert(it, Entry{c, weight});
  }
}

const std::vector<WeightedLexicon::Entry>& WeightedLexicon::lookup(
    std::string_view term) const {
  static const std::vector<Entry> kEmpty;
  auto it = entries_.find(std::string(term));
  return it == entries_.end() ? kEmpty : it->second;
}

double WeightedLexicon::weight(std::string_view term,
                               std::string_view category) const {
  const std::size_t c = category_index(category);
  if (c == npos) return 0.0;
  for (const auto& e : lookup(to_lower(term)))
    if (e.category == c) return e.weight;
  return 0.0;
}

double WeightedLexicon::min_weight() const {
  double lowest = 0.0;
  bool first = true;
  for (const auto& [term, entries] : entries_) {
    for (const auto& e : entries) {
      if (first || e.weight < lowest) lowest = e.weight;
      first = false;
    }
  }
  return lowest;
}

WeightedLexicon load_weighted_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open lexicon");
  const std::string p = path.string();
  csv::Reader reader(in, p);
  csv::expect_header(reader, {"term", "category", "weight"}, p);

  WeightedLexicon lexicon;
  lexicon.name = path.stem().string();
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->fields.size() != 3)
      throw ParseError(p, rec->line, "expected 3 fields, got " +
                                         std::to_string(rec->fields.size()));
    if (rec->fields[0].empty()) throw ParseError(p, rec->line, "empty term");
    if (rec->fields[1].empty())
      throw ParseError(p, rec->line, "empty category");
    auto weight = csv::parse_double(rec->fields[2]);
    if (!weight)
      throw ParseError(p, rec->line, "weight '" + rec->fields[2] +
                                         "' is not a finite number");
    lexicon.add(rec->fields[0], rec->fields[1], *weight);
  }
  if (lexicon.categories().empty())
    throw DataError(p + ": lexicon has no entries");
  return lexicon;
}

std::size_t CategoryDictionary::category_index(
    std::string_view category) const {
  auto it = category_index_.find(std::string(category));
  return it == category_index_.end() ? npos : it->second;
}

std::size_t CategoryDictionary::intern(std::string_view category) {
  auto [it, inserted] =
      category_index_.emplace(std::string(category), categories_.size());
  if (inserted) categories_.emplace_back(category);
  return it->second;
}

void CategoryDictionary::add(std::string_view pattern,
                             std::string_view category) {
  if (category.empty()) throw DataError("empty category name");
  if (pattern.empty()) throw DataError("empty pattern");
  const auto star = pattern.find('*');
  const bool prefix = star != std::string_view::npos;
  if (prefix && star + 1 != pattern.size())
    throw DataError("pattern '" + std::string(pattern) +
                    "': '*' is only allowed as the final character");
  if (prefix && pattern.size() == 1)
    throw DataError("pattern '*' has an empty stem");

  const std::string key =
      to_lower(prefix ? pattern.substr(0, pattern.size() - 1) : pattern);
  const std::size_t c = intern(category);
  auto& cats = (prefix ? prefixes_ : literals_)[key];
  auto it = std::lower_bound(cats.begin(), cats.end(), c);
  if (it == cats.end() || *it != c) cats.insert(it, c);
  if (prefix) max_prefix_ = std::max(max_prefix_, key.size());
}

std::vector<std::size_t> CategoryDictionary::match(
    std::string_view token) const {
  std::vector<std::size_t> out;
  auto collect = [&](const std::vector<std::size_t>& cats) {
    out.insert(out.end(), cats.begin(), cats.end());
  };
  if (auto it = literals_.find(std::string(token)); it != literals_.end())
    collect(it->second);
  const std::size_t longest = std::min(max_prefix_, token.size());
  std::string probe;
  for (std::size_t len = 1; len <= longest; ++len) {
    probe.assign(token.substr(0, len));
    if (auto it = prefixes_.find(probe); it != prefixes_.end())
      collect(it->second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CategoryDictionary load_category_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open dictionary");
  const std::string p = path.string();
  csv::Reader reader(in, p);
  csv::expect_header(reader, {"pattern", "category"}, p);

  CategoryDictionary dictionary;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->fields.size() != 2)
      throw ParseError(p, rec->line, "expected 2 fields, got " +
                                         std::to_string(rec->fields.size()));
    try {
      dictionary.add(rec->fields[0], rec->fields[1]);
    } catch (const DataError& e) {
      throw ParseError(p, rec->line, e.what());
    }
  }
  if (dictionary.categories().empty())
    throw DataError(p + ": dictionary has no entries");
  return dictionary;
}

}  // namespace psylex

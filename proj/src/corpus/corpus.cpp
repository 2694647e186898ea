#include "psylex/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "psylex/error.hpp"

namespace psylex {

using nlohmann::json;

std::string_view to_string(Speaker speaker) {
  return speaker == Speaker::agent ? "agent" : "partner";
}

std::vector<double> RatingList::present() const {
  std::vector<double> out;
  for (const auto& v : values)
    if (v) out.push_back(*v);
  return out;
}

const Dialog* Corpus::find_dialog(std::string_view dialog_id) const {
  for (const auto& d : dialogs)
    if (d.dialog_id == dialog_id) return &d;
  return nullptr;
}

const Turn* Corpus::find_turn(std::string_view dialog_id,
                              std::string_view turn_id) const {
  const Dialog* d = find_dialog(dialog_id);
  if (!d) return nullptr;
  for (const auto& t : d->turns)
    if (t.turn_id == turn_id) return &t;
  return nullptr;
}

std::vector<std::string> Corpus::system_ids() const {
  std::vector<std::string> out;
  for (const auto& d : dialogs)
    if (std::find(out.begin(), out.end(), d.system_id) == out.end())
      out.push_back(d.system_id);
  return out;
}

std::vector<std::string> Corpus::dimensions(Level level) const {
  std::set<std::string> dims;
  auto collect = [&](const Annotations& a) {
    for (const auto& [dim, ratings] : a)
      if (!ratings.present().empty()) dims.insert(dim);
  };
  for (const auto& d : dialogs) {
    if (level == Level::dialog) {
      collect(d.annotations);
    } else {
      for (const auto& t : d.turns) collect(t.annotations);
    }
  }
  return {dims.begin(), dims.end()};
}

std::vector<UnitRef> Corpus::empty_turns() const {
  std::vector<UnitRef> out;
  for (const auto& d : dialogs)
    for (const auto& t : d.turns)
      if (t.text.empty()) out.push_back({d.dialog_id, t.turn_id});
  return out;
}

namespace {

struct LineContext {
  const std::string& path;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path, line, what);
  }
};

const json& require(const json& obj, const char* key, const LineContext& ctx,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) ctx.fail(where + "missing required field '" + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key,
                           const LineContext& ctx, const std::string& where) {
  const json& v = require(obj, key, ctx, where);
  if (!v.is_string()) ctx.fail(where + "field '" + key + "' must be a string");
  return v.get<std::string>();
}

Annotations parse_annotations(const json& obj, const LineContext& ctx,
                              const std::string& where) {
  Annotations out;
  auto it = obj.find("annotations");
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_object()) ctx.fail(where + "'annotations' must be an object");
  for (const auto& [dim, list] : it->items()) {
    if (!list.is_array())
      ctx.fail(where + "annotations for '" + dim + "' must be an array");
    RatingList ratings;
    for (const auto& v : list) {
      if (v.is_null()) {
        ratings.values.emplace_back(std::nullopt);
      } else if (v.is_number()) {
        double x = v.get<double>();
        if (!std::isfinite(x))
          ctx.fail(where + "non-finite rating for '" + dim + "'");
        ratings.values.emplace_back(x);
      } else {
        ctx.fail(where + "rating for '" + dim + "' must be a number or null");
      }
    }
    out.emplace(dim, std::move(ratings));
  }

  auto ids = obj.find("annotators");
  if (ids != obj.end() && !ids->is_null()) {
    if (!ids->is_object()) ctx.fail(where + "'annotators' must be an object");
    for (const auto& [dim, list] : ids->items()) {
      auto rit = out.find(dim);
      if (rit == out.end())
        ctx.fail(where + "annotator ids for unannotated dimension '" + dim +
                 "'");
      if (!list.is_array() || list.size() != rit->second.values.size())
        ctx.fail(where + "annotator ids for '" + dim +
                 "' must be an array matching the ratings");
      std::set<std::string> seen;
      for (const auto& id : list) {
        if (!id.is_string())
          ctx.fail(where + "annotator id for '" + dim + "' must be a string");
        if (!seen.insert(id.get<std::string>()).second)
          ctx.fail(where + "repeated annotator id '" + id.get<std::string>() +
                   "' for '" + dim + "'");
        rit->second.annotators.push_back(id.get<std::string>());
      }
    }
  }
  return out;
}

void check_bounds(const Annotations& annotations,
                  std::map<std::string, ScaleBounds, std::less<>>& bounds,
                  const ScaleBounds& fallback, const std::string& unit,
                  const std::string& prefix) {
  for (const auto& [dim, ratings] : annotations) {
    auto it = bounds.find(dim);
    if (it == bounds.end()) it = bounds.emplace(dim, fallback).first;
    for (const auto& v : ratings.values) {
      if (v && (*v < it->second.min || *v > it->second.max)) {
        throw DataError(prefix + "rating " + std::to_string(*v) + " for " +
                        unit + " is outside the scale of dimension '" + dim +
                        "' [" + std::to_string(it->second.min) + ", " +
                        std::to_string(it->second.max) + "]");
      }
    }
  }
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path,
                   const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open corpus");
  const std::string path_str = path.string();

  Corpus corpus;
  corpus.corpus_id = path.stem().string();
  std::set<std::string> dialog_ids;
  std::string line;
  std::size_t line_no = 0;
  bool seen_record = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    LineContext ctx{path_str, line_no};

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      ctx.fail(std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) ctx.fail("record must be a JSON object");

    if (!record.contains("dialog_id")) {
      if (seen_record)
        ctx.fail("header record must precede dialogs (missing 'dialog_id'?)");
      seen_record = true;
      if (auto it = record.find("corpus_id"); it != record.end()) {
        if (!it->is_string()) ctx.fail("'corpus_id' must be a string");
        corpus.corpus_id = it->get<std::string>();
      }
      if (auto it = record.find("scale_bounds"); it != record.end()) {
        if (!it->is_object()) ctx.fail("'scale_bounds' must be an object");
        for (const auto& [dim, b] : it->items()) {
          if (!b.is_array() || b.size() != 2 || !b[0].is_number() ||
              !b[1].is_number() || b[0].get<double>() > b[1].get<double>())
            ctx.fail("scale bounds for '" + dim + "' must be [min, max]");
          corpus.scale_bounds[dim] = {b[0].get<double>(), b[1].get<double>()};
        }
      }
      if (!record.contains("corpus_id") && !record.contains("scale_bounds"))
        ctx.fail("missing required field 'dialog_id'");
      continue;
    }
    seen_record = true;

    Dialog dialog;
    dialog.dialog_id = require_string(record, "dialog_id", ctx, "");
    dialog.system_id = require_string(record, "system_id", ctx, "");
    const std::string where = "dialog '" + dialog.dialog_id + "': ";
    dialog.annotations = parse_annotations(record, ctx, where);

    const json& turns = require(record, "turns", ctx, where);
    if (!turns.is_array()) ctx.fail(where + "'turns' must be an array");
    if (turns.empty()) ctx.fail(where + "dialog has no turns");

    std::set<std::string> turn_ids;
    for (std::size_t i = 0; i < turns.size(); ++i) {
      const json& t = turns[i];
      const std::string twhere = where + "turn " + std::to_string(i) + ": ";
      if (!t.is_object()) ctx.fail(twhere + "turn must be an object");
      Turn turn;
      turn.turn_id = require_string(t, "turn_id", ctx, twhere);
      const std::string speaker = require_string(t, "speaker", ctx, twhere);
      if (speaker == "agent") {
        turn.speaker = Speaker::agent;
      } else if (speaker == "partner") {
        turn.speaker = Speaker::partner;
      } else {
        ctx.fail(twhere + "speaker must be 'agent' or 'partner', got '" +
                 speaker + "'");
      }
      turn.text = require_string(t, "text", ctx, twhere);
      turn.annotations = parse_annotations(t, ctx, twhere);
      if (!turn_ids.insert(turn.turn_id).second)
        ctx.fail(where + "duplicate turn_id '" + turn.turn_id + "'");
      dialog.turns.push_back(std::move(turn));
    }
    if (!dialog_ids.insert(dialog.dialog_id).second)
      ctx.fail("duplicate dialog_id '" + dialog.dialog_id + "'");

    const std::string prefix =
        path_str + ":" + std::to_string(line_no) + ": ";
    check_bounds(dialog.annotations, corpus.scale_bounds,
                 options.default_bounds, "dialog '" + dialog.dialog_id + "'",
                 prefix);
    for (const auto& turn : dialog.turns)
      check_bounds(turn.annotations, corpus.scale_bounds,
                   options.default_bounds,
                   "turn '" + dialog.dialog_id + "/" + turn.turn_id + "'",
                   prefix);

    corpus.dialogs.push_back(std::move(dialog));
  }
  return corpus;
}

void validate(const Corpus& corpus) {
  std::set<std::string> dialog_ids;
  auto bounded = [&](const Annotations& a, const std::string& unit) {
    for (const auto& [dim, ratings] : a) {
      auto it = corpus.scale_bounds.find(dim);
      if (it == corpus.scale_bounds.end())
        throw DataError(unit + ": dimension '" + dim +
                        "' has no declared scale");
      if (!ratings.annotators.empty() &&
          ratings.annotators.size() != ratings.values.size())
        throw DataError(unit + ": annotator ids for '" + dim +
                        "' do not match the ratings");
      for (const auto& v : ratings.values)
        if (v && (*v < it->second.min || *v > it->second.max))
          throw DataError(unit + ": rating " + std::to_string(*v) +
                          " is outside the scale of dimension '" + dim + "'");
    }
  };
  for (const auto& d : corpus.dialogs) {
    if (!dialog_ids.insert(d.dialog_id).second)
      throw DataError("duplicate dialog_id '" + d.dialog_id + "'");
    if (d.turns.empty())
      throw DataError("dialog '" + d.dialog_id + "' has no turns");
    bounded(d.annotations, "dialog '" + d.dialog_id + "'");
    std::set<std::string> turn_ids;
    for (const auto& t : d.turns) {
      if (!turn_ids.insert(t.turn_id).second)
        throw DataError("dialog '" + d.dialog_id + "': duplicate turn_id '" +
                        t.turn_id + "'");
      bounded(t.annotations, "turn '" + d.dialog_id + "/" + t.turn_id + "'");
    }
  }
}

std::optional<double> consensus_label(std::vector<double> ratings) {
  if (ratings.empty()) return std::nullopt;
  const std::size_t n = ratings.size();
  const std::size_t mid = n / 2;
  std::nth_element(ratings.begin(), ratings.begin() + mid, ratings.end());
  const double upper = ratings[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(ratings.begin(), ratings.begin() + mid);
  return (lower + upper) / 2.0;
}

std::map<UnitRef, double> consensus_labels(const Corpus& corpus, Level level,
                                           std::string_view dimension) {
  std::map<UnitRef, double> out;
  auto take = [&](const Annotations& a, UnitRef unit) {
    auto it = a.find(dimension);
    if (it == a.end()) return;
    if (auto label = consensus_label(it->second.present()))
      out.emplace(std::move(unit), *label);
  };
  for (const auto& d : corpus.dialogs) {
    if (level == Level::dialog) {
      take(d.annotations, {d.dialog_id, std::nullopt});
    } else {
      for (const auto& t : d.turns) take(t.annotations, {d.dialog_id, t.turn_id});
    }
  }
  return out;
}

}  // namespace psylex

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "psylex/cli.hpp"
#include "psylex/error.hpp"

namespace psylex::cli {

using nlohmann::json;

void apply_override(std::string& json_text, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json doc;
  try {
    doc = json_text.empty() ? json::object() : json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }

  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' is empty");
    if (!node->is_object())
      throw ConfigError("override key '" + key + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
  json_text = doc.dump();
}

namespace {

class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object())
      throw ConfigError(label() + "must be an object");
  }

  ~Reader() = default;

  // Every key must have been consumed.
  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!used_.contains(key))
        throw ConfigError("unknown config key '" + where_ + key + "'");
  }

  const json* get(const std::string& key) {
    used_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(label(key) + "must be a string");
    return v->get<std::string>();
  }

  std::optional<std::filesystem::path> path(const std::string& key) {
    auto s = string(key);
    if (!s) return std::nullopt;
    return std::filesystem::path(*s);
  }

  template <typename T>
  std::optional<T> number(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer())
        throw ConfigError(label(key) + "must be an integer");
      const auto i = v->get<long long>();
      if (std::is_unsigned_v<T> && i < 0)
        throw ConfigError(label(key) + "must not be negative");
      return static_cast<T>(i);
    } else {
      if (!v->is_number()) throw ConfigError(label(key) + "must be a number");
      return v->get<T>();
    }
  }

  std::optional<std::vector<std::string>> strings(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_array())
      throw ConfigError(label(key) + "must be an array of strings");
    std::vector<std::string> out;
    for (const auto& s : *v) {
      if (!s.is_string())
        throw ConfigError(label(key) + "must be an array of strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  }

  std::string label(const std::string& key = "") const {
    return "config key '" + where_ + key + "' ";
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> used_;
};

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json_text.empty() ? json::object() : json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig config;
  Reader top(doc, "");

  if (const json* r = top.get("resources")) {
    Reader res(*r, "resources.");
    config.resources.emotion_lexicon = res.path("emotion_lexicon");
    config.resources.function_words = res.path("function_words");
    config.resources.topic_model = res.path("topic_model");
    config.resources.agreeableness_model = res.path("agreeableness_model");
    config.resources.empathy_model = res.path("empathy_model");
    res.finish();
  }
  if (const json* m = top.get("metrics")) {
    Reader metrics(*m, "metrics.");
    if (auto turn = metrics.strings("turn")) config.scoring.turn_metrics = *turn;
    if (auto dialog = metrics.strings("dialog"))
      config.scoring.dialog_metrics = *dialog;
    metrics.finish();
  }
  if (const json* a = top.get("dialog_aggregation")) {
    Reader agg(*a, "dialog_aggregation.");
    for (const auto& [metric, value] : a->items()) {
      auto s = agg.string(metric);
      config.scoring.dialog_aggregation[metric] =
          parse_dialog_aggregation(s.value_or(""));
    }
    agg.finish();
  }
  if (auto w = top.number<int>("matching_window"))
    config.scoring.matching_window = *w;
  if (auto c = top.strings("lsm_categories"))
    config.scoring.lsm_categories = *c;
  if (auto n = top.number<int>("ngram_max")) config.scoring.ngram_max = *n;
  if (auto base = top.string("entropy_log_base"))
    config.scoring.entropy_base = parse_log_base(*base);
  if (auto d = top.string("agreement_difference"))
    config.agreement_difference = parse_difference(*d);
  if (auto c = top.string("correction"))
    config.correction = stats::parse_correction(*c);
  if (auto m = top.number<std::size_t>("comparisons")) {
    if (*m < 1) throw ConfigError("config key 'comparisons' must be >= 1");
    config.comparisons = *m;
  }
  if (auto out = top.path("output_dir")) config.output_dir = *out;

  if (const json* e = top.get("evaluate")) {
    Reader ev(*e, "evaluate.");
    config.evaluate.scores = ev.path("scores");
    if (auto j = ev.string("turn_judgement")) config.evaluate.turn_judgement = *j;
    if (auto j = ev.string("dialog_judgement"))
      config.evaluate.dialog_judgement = *j;
    if (auto t = ev.strings("traditional")) config.evaluate.traditional = *t;
    if (auto p = ev.number<std::size_t>("min_pairs")) {
      if (*p < 2) throw ConfigError("config key 'evaluate.min_pairs' must be >= 2");
      config.evaluate.min_pairs = *p;
    }
    ev.finish();
  }
  if (const json* t = top.get("train")) {
    Reader tr(*t, "train.");
    config.train.features = tr.path("features");
    config.train.labels = tr.path("labels");
    if (auto l = tr.number<double>("lambda")) config.train.lambda = *l;
    if (auto k = tr.number<int>("folds")) config.train.folds = *k;
    if (auto s = tr.string("feature_space"))
      config.train.feature_space = parse_feature_space(*s);
    if (auto n = tr.string("trait_name")) config.train.trait_name = *n;
    tr.finish();
  }
  top.finish();
  return config;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides) {
  std::string text;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError(path->string() + ": cannot open config");
    std::stringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  for (const auto& o : overrides) apply_override(text, o);
  RunConfig config = parse_config(text);
  if (!path) return config;

  // Input paths are relative to the config file.
  const auto base = path->parent_path();
  auto resolve = [&](std::optional<std::filesystem::path>& p) {
    if (p && p->is_relative()) p = base / *p;
  };
  resolve(config.resources.emotion_lexicon);
  resolve(config.resources.function_words);
  resolve(config.resources.topic_model);
  resolve(config.resources.agreeableness_model);
  resolve(config.resources.empathy_model);
  resolve(config.evaluate.scores);
  resolve(config.train.features);
  resolve(config.train.labels);
  return config;
}

}  // namespace psylex::cli

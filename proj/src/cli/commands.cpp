#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "psylex/cli.hpp"
#include "psylex/corpus.hpp"
#include "psylex/csv.hpp"
#include "psylex/emit.hpp"
#include "psylex/error.hpp"
#include "psylex/external_scores.hpp"
#include "psylex/format.hpp"
#include "psylex/report.hpp"
#include "psylex/ridge.hpp"
#include "psylex/scoring.hpp"

namespace psylex::cli {

namespace {

namespace fs = std::filesystem;

struct Invocation {
  std::string command;
  std::optional<fs::path> corpus;
  std::optional<fs::path> config;
  std::optional<fs::path> out;
  std::vector<std::string> overrides;
};

unsigned thread_cap() {
  const char* env = std::getenv("PSYLEX_THREADS");
  if (!env || !*env) return 0;
  auto v = csv::parse_double(env);
  if (!v || *v < 0 || *v != static_cast<double>(static_cast<unsigned>(*v)))
    throw ConfigError("PSYLEX_THREADS must be a non-negative integer");
  return static_cast<unsigned>(*v);
}

bool needs(const ScoringConfig& s, std::string_view metric) {
  auto has = [&](const std::vector<std::string>& v) {
    return std::find(v.begin(), v.end(), metric) != v.end();
  };
  bool turn_mean = false;
  for (const auto& [m, agg] : s.dialog_aggregation)
    if (m == metric && agg == DialogAggregation::turn_mean) turn_mean = true;
  return has(s.turn_metrics) || has(s.dialog_metrics) || turn_mean;
}

// Loads only the resources the configured metrics use.
Resources load_resources(const RunConfig& config) {
  const auto& s = config.scoring;
  const auto& paths = config.resources;
  Resources r;
  auto require = [](const std::optional<fs::path>& p, const char* key,
                    std::string_view metric) -> const fs::path& {
    if (!p)
      throw ConfigError("metric '" + std::string(metric) +
                        "' needs resources." + key);
    if (!fs::exists(*p))
      throw ConfigError("resources." + std::string(key) + ": " + p->string() +
                        " does not exist");
    return *p;
  };
  if (needs(s, metric::kEmotionalEntropy) || needs(s, metric::kEmotionMatching)) {
    const auto metric_name = needs(s, metric::kEmotionalEntropy)
                                 ? metric::kEmotionalEntropy
                                 : metric::kEmotionMatching;
    r.emotion_lexicon.emplace(load_weighted_lexicon(
        require(paths.emotion_lexicon, "emotion_lexicon", metric_name)));
  }
  if (needs(s, metric::kLanguageStyleMatching))
    r.function_words = load_category_dictionary(require(
        paths.function_words, "function_words", metric::kLanguageStyleMatching));
  bool topics = false;
  if (needs(s, metric::kAgreeableness)) {
    r.agreeableness_model = load_trait_model(require(
        paths.agreeableness_model, "agreeableness_model", metric::kAgreeableness));
    topics = topics || r.agreeableness_model->feature_space != FeatureSpace::ngram;
  }
  if (needs(s, metric::kEmpathy)) {
    r.empathy_model = load_trait_model(
        require(paths.empathy_model, "empathy_model", metric::kEmpathy));
    topics = topics || r.empathy_model->feature_space != FeatureSpace::ngram;
  }
  if (topics)
    r.topic_model = load_weighted_lexicon(
        require(paths.topic_model, "topic_model", "trait models"));
  return r;
}

Corpus open_corpus(const Invocation& inv) {
  if (!inv.corpus) throw ConfigError("--corpus is required");
  if (!fs::exists(*inv.corpus))
    throw ConfigError("corpus " + inv.corpus->string() + " does not exist");
  return load_corpus(*inv.corpus);
}

fs::path output_dir(const RunConfig& config) {
  const fs::path dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

void print_summary(std::ostream& out, const MetricTable& table) {
  std::map<std::string, std::size_t> reasons;
  std::size_t present = 0;
  for (const auto& row : table.rows()) {
    if (row.value) {
      ++present;
    } else {
      ++reasons[std::string(to_string(*row.degenerate_reason))];
    }
  }
  out << to_string(table.level()) << ": " << table.size() << " rows, "
      << present << " present";
  for (const auto& [reason, count] : reasons)
    out << ", " << count << " " << reason;
  out << "\n";
}

ScoredCorpus score(const Corpus& corpus, const RunConfig& config) {
  const Resources resources = load_resources(config);
  ScoringConfig scoring = config.scoring;
  scoring.threads = thread_cap();
  return score_corpus(corpus, resources, scoring);
}

int cmd_score(const Invocation& inv, const RunConfig& config,
              std::ostream& out) {
  const Corpus corpus = open_corpus(inv);
  const ScoredCorpus scored = score(corpus, config);
  const fs::path dir = output_dir(config);
  emit(scored.turn, dir / "metrics_turn.csv", Format::csv);
  emit(scored.dialog, dir / "metrics_dialog.csv", Format::csv);

  out << "corpus " << corpus.corpus_id << ": " << corpus.dialogs.size()
      << " dialogs\n";
  print_summary(out, scored.turn);
  print_summary(out, scored.dialog);
  out << "emotional_entropy ceiling: "
      << format_number(max_emotional_entropy(config.scoring.entropy_base))
      << " (log base " << to_string(config.scoring.entropy_base) << ")\n";
  return kExitOk;
}

int cmd_agreement(const Invocation& inv, const RunConfig& config,
                  std::ostream& out, std::ostream& err) {
  const Corpus corpus = open_corpus(inv);
  std::vector<AgreementReport> reports;
  for (Level level : {Level::turn, Level::dialog}) {
    if (corpus.dimensions(level).empty()) continue;
    reports.push_back(
        agreement_report(corpus, level, config.agreement_difference));
  }
  if (reports.empty())
    throw DataError("corpus has no annotations to compute agreement on");

  const fs::path dir = output_dir(config);
  write_file(dir / "agreement.json", agreement_json(reports));
  for (const auto& r : reports) {
    out << to_string(r.level) << " alpha (" << to_string(r.difference)
        << "): mean " << (r.mean ? format_number(*r.mean) : "missing") << "\n";
    for (const auto& [dim, a] : r.alpha) {
      out << "  " << dim << ": " << (a ? format_number(*a) : "missing") << "\n";
      if (!a) err << "warning: " << to_string(r.level) << " dimension '" << dim
                  << "' has too few paired ratings\n";
    }
  }
  return kExitOk;
}

// Psychological metrics merged with external scores, one table per level.
struct EvaluationTables {
  MetricTable turn{Level::turn};
  MetricTable dialog{Level::dialog};
  std::vector<std::string> external_turn, external_dialog;
  std::vector<std::string> psych_turn, psych_dialog;
};

EvaluationTables evaluation_tables(const Corpus& corpus,
                                   const RunConfig& config) {
  if (!config.evaluate.scores)
    throw ConfigError("evaluate.scores (external metric file) is required");
  if (!fs::exists(*config.evaluate.scores))
    throw ConfigError("external scores " + config.evaluate.scores->string() +
                      " do not exist");
  const auto external = attach_external_scores(
      corpus, load_external_scores(*config.evaluate.scores));
  const ScoredCorpus scored = score(corpus, config);

  EvaluationTables t;
  t.psych_turn = scored.turn.metric_names();
  t.psych_dialog = scored.dialog.metric_names();
  t.external_turn = external.turn.metric_names();
  t.external_dialog = external.dialog.metric_names();
  for (const auto& m : t.external_turn)
    if (std::find(t.psych_turn.begin(), t.psych_turn.end(), m) !=
        t.psych_turn.end())
      throw DataError("external metric '" + m +
                      "' collides with a psychological metric name");
  for (const auto& m : t.external_dialog)
    if (std::find(t.psych_dialog.begin(), t.psych_dialog.end(), m) !=
        t.psych_dialog.end())
      throw DataError("external metric '" + m +
                      "' collides with a psychological metric name");
  t.turn.merge(scored.turn);
  t.turn.merge(external.turn);
  t.dialog.merge(scored.dialog);
  t.dialog.merge(external.dialog);
  return t;
}

int cmd_evaluate(const Invocation& inv, const RunConfig& config,
                 std::ostream& out, std::ostream& err) {
  const Corpus corpus = open_corpus(inv);
  const EvaluationTables tables = evaluation_tables(corpus, config);
  const fs::path dir = output_dir(config);
  emit(tables.turn, dir / "metrics_turn.csv", Format::csv);
  emit(tables.dialog, dir / "metrics_dialog.csv", Format::csv);

  std::size_t products = 0;
  struct LevelInputs {
    Level level;
    const MetricTable* table;
    const std::vector<std::string>* external;
    const std::vector<std::string>* psych;
    std::string judgement;
  };
  const LevelInputs levels[] = {
      {Level::turn, &tables.turn, &tables.external_turn, &tables.psych_turn,
       config.evaluate.turn_judgement},
      {Level::dialog, &tables.dialog, &tables.external_dialog,
       &tables.psych_dialog, config.evaluate.dialog_judgement}};

  for (const auto& in : levels) {
    const std::string name(to_string(in.level));
    if (in.table->size() == 0) continue;

    try {
      const HeatmapData heatmap =
          build_heatmap(*in.table, config.evaluate.min_pairs);
      for (const auto& w : heatmap.warnings)
        err << "warning: " << name << " heatmap: " << w << "\n";
      emit(heatmap, dir / ("heatmap_" + name + ".json"), Format::json);
      out << name << " heatmap: " << heatmap.order.size() << " metrics\n";
      ++products;
    } catch (const DataError& e) {
      err << "warning: " << name << " heatmap skipped: " << e.what() << "\n";
    }

    std::vector<std::string> traditional;
    if (config.evaluate.traditional.empty()) {
      traditional = *in.external;
    } else {
      for (const auto& t : config.evaluate.traditional)
        if (std::find(in.external->begin(), in.external->end(), t) !=
            in.external->end())
          traditional.push_back(t);
    }
    const auto judgements = consensus_labels(corpus, in.level, in.judgement);
    if (traditional.empty() || in.psych->empty() || judgements.empty()) {
      err << "warning: " << name << " regression table skipped: needs "
          << "traditional metrics, psychological metrics and '" << in.judgement
          << "' judgements\n";
      continue;
    }
    RegressionTableSpec spec;
    spec.level = in.level;
    spec.judgement = in.judgement;
    spec.traditional = traditional;
    spec.psych_models = default_psych_models(*in.psych);
    spec.correction = config.correction;
    spec.comparisons = config.comparisons;
    const auto rows = build_regression_table(*in.table, judgements, spec);
    for (const auto& r : rows)
      if (!r.reason.empty())
        err << "warning: " << name << " " << r.traditional << " x "
            << r.psych_model << ": " << r.reason << "\n";
    emit(rows, dir / ("regression_" + name + ".csv"), Format::csv);
    out << name << " regression table: " << rows.size() << " rows, judgement '"
        << in.judgement << "', " << judgements.size() << " labelled units\n";
    ++products;
  }
  if (products == 0)
    throw DataError("no heatmap or regression table could be built");
  return kExitOk;
}

int cmd_compare(const Invocation& inv, const RunConfig& config,
                std::ostream& out) {
  const Corpus corpus = open_corpus(inv);
  MetricTable turn{Level::turn}, dialog{Level::dialog};
  if (config.evaluate.scores) {
    const auto t = evaluation_tables(corpus, config);
    turn = t.turn;
    dialog = t.dialog;
  } else {
    const auto scored = score(corpus, config);
    turn = scored.turn;
    dialog = scored.dialog;
  }
  const fs::path dir = output_dir(config);
  const auto systems = corpus.system_ids();
  if (systems.size() < 2) {
    emit(system_raw_means(turn, corpus), dir / "profiles_turn.csv",
         Format::csv);
    emit(system_raw_means(dialog, corpus), dir / "profiles_dialog.csv",
         Format::csv);
    throw DataError("normalized profiles need at least two systems, found " +
                    std::to_string(systems.size()) +
                    "; raw means were written");
  }
  emit(build_system_profiles(turn, corpus), dir / "profiles_turn.csv",
       Format::csv);
  emit(build_system_profiles(dialog, corpus), dir / "profiles_dialog.csv",
       Format::csv);
  out << systems.size() << " system profiles written\n";
  return kExitOk;
}

// features: unit_id,feature,value   labels: unit_id,label
std::pair<std::vector<FeatureVector>, std::vector<double>> load_training(
    const TrainOptions& train) {
  if (!train.features || !train.labels)
    throw ConfigError("train.features and train.labels are required");
  for (const auto& p : {*train.features, *train.labels})
    if (!fs::exists(p))
      throw ConfigError("training file " + p.string() + " does not exist");

  std::vector<std::string> ids;
  std::map<std::string, double> labels;
  {
    std::ifstream in(*train.labels);
    const std::string path = train.labels->string();
    csv::Reader reader(in, path);
    csv::expect_header(reader, {"unit_id", "label"}, path);
    while (auto rec = reader.next()) {
      if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
      if (rec->fields.size() != 2)
        throw ParseError(path, rec->line, "expected 2 fields");
      auto v = csv::parse_double(rec->fields[1]);
      if (!v) throw ParseError(path, rec->line, "label is not a number");
      if (!labels.emplace(rec->fields[0], *v).second)
        throw ParseError(path, rec->line,
                         "duplicate unit_id '" + rec->fields[0] + "'");
      ids.push_back(rec->fields[0]);
    }
  }
  std::map<std::string, FeatureVector> features;
  {
    std::ifstream in(*train.features);
    const std::string path = train.features->string();
    csv::Reader reader(in, path);
    csv::expect_header(reader, {"unit_id", "feature", "value"}, path);
    while (auto rec = reader.next()) {
      if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
      if (rec->fields.size() != 3)
        throw ParseError(path, rec->line, "expected 3 fields");
      if (!labels.contains(rec->fields[0]))
        throw ParseError(path, rec->line,
                         "unit '" + rec->fields[0] + "' has no label");
      auto v = csv::parse_double(rec->fields[2]);
      if (!v) throw ParseError(path, rec->line, "value is not a number");
      auto& fv = features[rec->fields[0]];
      fv.space = train.feature_space;
      fv.values[rec->fields[1]] += *v;
    }
  }
  std::vector<FeatureVector> x;
  std::vector<double> y;
  for (const auto& id : ids) {
    FeatureVector fv;
    fv.space = train.feature_space;
    if (auto it = features.find(id); it != features.end()) fv = it->second;
    x.push_back(std::move(fv));
    y.push_back(labels.at(id));
  }
  return {std::move(x), std::move(y)};
}

int cmd_train_trait(const RunConfig& config, std::ostream& out) {
  const auto& train = config.train;
  if (!(train.lambda >= 0.0))
    throw ConfigError("train.lambda must be >= 0");
  if (train.folds < 2) throw ConfigError("train.folds must be at least 2");
  const auto [x, y] = load_training(train);
  if (x.size() < static_cast<std::size_t>(train.folds))
    throw DataError("training data has fewer rows than folds");

  const auto cv = cross_validate_ridge_detail(x, y, train.lambda, train.folds);
  const auto model = train_ridge(x, y, train.lambda, train.trait_name);

  const fs::path dir = output_dir(config);
  write_file(dir / (train.trait_name + "_model.json"),
             serialize_trait_model(model));
  nlohmann::ordered_json report;
  report["trait_name"] = train.trait_name;
  report["feature_space"] = std::string(to_string(train.feature_space));
  report["n"] = x.size();
  report["features"] = model.weights.size();
  report["lambda"] = train.lambda;
  report["folds"] = train.folds;
  report["cv_r"] = cv.r ? nlohmann::ordered_json(round_significant(*cv.r))
                        : nlohmann::ordered_json(nullptr);
  write_file(dir / (train.trait_name + "_cv.json"), report.dump(2) + "\n");
  out << "trained " << train.trait_name << " on " << x.size() << " rows, "
      << model.weights.size() << " features; " << train.folds
      << "-fold CV r = " << (cv.r ? format_number(*cv.r) : "missing") << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Psychologically grounded dialog metrics and evaluation",
               "psylex"};
  app.require_subcommand(1);
  Invocation inv;
  std::optional<std::string> features, labels;
  std::optional<double> lambda;
  std::optional<int> folds;

  auto add_common = [&](CLI::App* sub, bool corpus) {
    if (corpus) sub->add_option("--corpus", inv.corpus, "JSONL dialog corpus")->required();
    sub->add_option("--config", inv.config, "JSON run configuration");
    sub->add_option("--out", inv.out, "output directory");
    sub->add_option("--set", inv.overrides, "config override key=value");
  };
  add_common(app.add_subcommand("score", "compute turn and dialog metrics"), true);
  add_common(app.add_subcommand("agreement", "inter-annotator agreement"), true);
  add_common(app.add_subcommand("evaluate",
                                "correlation heatmaps and regression tables"),
             true);
  add_common(app.add_subcommand("compare", "normalized per-system profiles"),
             true);
  auto* train = app.add_subcommand("train-trait",
                                   "train a ridge trait model with CV");
  add_common(train, false);
  train->add_option("--corpus", inv.corpus, "unused");
  train->add_option("--features", features, "CSV unit_id,feature,value");
  train->add_option("--labels", labels, "CSV unit_id,label");
  train->add_option("--lambda", lambda, "ridge penalty");
  train->add_option("--folds", folds, "cross-validation folds");

  std::vector<std::string> argv_storage{"psylex"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  inv.command = app.get_subcommands().front()->get_name();

  try {
    RunConfig config = load_config(inv.config, inv.overrides);
    if (inv.out) config.output_dir = *inv.out;
    if (features) config.train.features = *features;
    if (labels) config.train.labels = *labels;
    if (lambda) config.train.lambda = *lambda;
    if (folds) config.train.folds = *folds;

    if (inv.command == "score") return cmd_score(inv, config, out);
    if (inv.command == "agreement") return cmd_agreement(inv, config, out, err);
    if (inv.command == "evaluate") return cmd_evaluate(inv, config, out, err);
    if (inv.command == "compare") return cmd_compare(inv, config, out);
    return cmd_train_trait(config, out);
  } catch (const ConfigError& e) {
    err << "psylex: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "psylex: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "psylex: data error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace psylex::cli

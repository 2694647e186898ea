#include "psylex/trait_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psylex/error.hpp"

namespace psylex {

using nlohmann::ordered_json;

LinearTraitModel parse_trait_model(const std::string& json_text,
                                   const std::string& source) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(source + ": malformed trait model JSON: " + e.what());
  }
  auto fail = [&](const std::string& what) -> void {
    throw DataError(source + ": " + what);
  };
  if (!doc.is_object()) fail("trait model must be a JSON object");

  LinearTraitModel model;
  auto name = doc.find("trait_name");
  if (name == doc.end() || !name->is_string())
    fail("'trait_name' must be a string");
  model.trait_name = name->get<std::string>();

  auto space = doc.find("feature_space");
  if (space == doc.end() || !space->is_string())
    fail("'feature_space' must be a string");
  try {
    model.feature_space = parse_feature_space(space->get<std::string>());
  } catch (const ConfigError& e) {
    fail(e.what());
  }

  auto intercept = doc.find("intercept");
  if (intercept == doc.end() || !intercept->is_number())
    fail("'intercept' must be a number");
  model.intercept = intercept->get<double>();
  if (!std::isfinite(model.intercept)) fail("'intercept' must be finite");

  auto weights = doc.find("weights");
  if (weights == doc.end() || !weights->is_object())
    fail("'weights' must be an object");
  for (const auto& [feature, w] : weights->items()) {
    if (!w.is_number() || !std::isfinite(w.get<double>()))
      fail("weight for '" + feature + "' must be a finite number");
    model.weights[feature] = w.get<double>();
  }
  return model;
}

LinearTraitModel load_trait_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open trait model");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_trait_model(buffer.str(), path.string());
}

std::string serialize_trait_model(const LinearTraitModel& model) {
  ordered_json doc;
  doc["trait_name"] = model.trait_name;
  doc["feature_space"] = std::string(to_string(model.feature_space));
  doc["intercept"] = model.intercept;
  ordered_json weights = ordered_json::object();
  for (const auto& [feature, w] : model.weights) weights[feature] = w;
  doc["weights"] = std::move(weights);
  return doc.dump(2) + "\n";
}

double apply_trait_model(const FeatureVector& features,
                         const LinearTraitModel& model) {
  if (features.space != model.feature_space)
    throw ConfigError("trait model '" + model.trait_name + "' expects " +
                      std::string(to_string(model.feature_space)) +
                      " features, got " +
                      std::string(to_string(features.space)));
  double score = model.intercept;
  // Walk the smaller side.
  if (features.values.size() <= model.weights.size()) {
    for (const auto& [name, value] : features.values)
      if (auto it = model.weights.find(name); it != model.weights.end())
        score += it->second * value;
  } else {
    for (const auto& [name, weight] : model.weights)
      if (auto it = features.values.find(name); it != features.values.end())
        score += weight * it->second;
  }
  return score;
}

}  // namespace psylex

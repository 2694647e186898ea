#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "psylex/features.hpp"

namespace psylex {

struct LinearTraitModel {
  std::string trait_name;
  FeatureSpace feature_space = FeatureSpace::topic;
  double intercept = 0.0;
  std::map<std::string, double, std::less<>> weights;
};

// JSON: {"trait_name", "feature_space", "intercept", "weights": {f: w}}
LinearTraitModel load_trait_model(const std::filesystem::path& path);
LinearTraitModel parse_trait_model(const std::string& json_text,
                                   const std::string& source = "<string>");
std::string serialize_trait_model(const LinearTraitModel& model);

// intercept + sum_f weight(f) * feature(f); names present on only one side
// contribute nothing. Throws ConfigError on a feature-space mismatch.
double apply_trait_model(const FeatureVector& features,
                         const LinearTraitModel& model);

}  // namespace psylex

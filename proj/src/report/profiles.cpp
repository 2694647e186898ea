#include <map>

#include "psylex/error.hpp"
#include "psylex/report.hpp"

namespace psylex {

std::vector<SystemProfile> system_raw_means(const MetricTable& table,
                                            const Corpus& corpus) {
  // Stage one: per-dialog (sum, count) of present values for each metric.
  std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>>
      per_dialog;
  for (const auto& row : table.rows()) {
    if (!corpus.find_dialog(row.unit.dialog_id))
      throw DataError("metric row for unknown dialog '" + row.unit.dialog_id +
                      "'");
    if (!row.value) continue;
    auto& [sum, count] = per_dialog[{row.unit.dialog_id, row.metric_name}];
    sum += *row.value;
    ++count;
  }

  const auto metrics = table.metric_names();
  std::vector<SystemProfile> profiles;
  for (const auto& system : corpus.system_ids()) {
    SystemProfile profile;
    profile.system_id = system;
    for (const auto& metric : metrics) {
      // Stage two: dialogs weighted equally within the system.
      double system_sum = 0.0;
      std::size_t dialogs = 0;
      for (const auto& dialog : corpus.dialogs) {
        if (dialog.system_id != system) continue;
        const auto it = per_dialog.find({dialog.dialog_id, metric});
        if (it == per_dialog.end()) continue;
        system_sum += it->second.first / static_cast<double>(it->second.second);
        ++dialogs;
      }
      profile.raw_mean[metric] =
          dialogs ? std::optional<double>(system_sum /
                                          static_cast<double>(dialogs))
                  : std::nullopt;
      profile.normalized[metric] = std::nullopt;
    }
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

std::vector<SystemProfile> build_system_profiles(const MetricTable& table,
                                                 const Corpus& corpus) {
  auto profiles = system_raw_means(table, corpus);
  if (profiles.size() < 2)
    throw DataError("system profiles need at least two systems, found " +
                    std::to_string(profiles.size()));
  for (const auto& metric : table.metric_names()) {
    std::vector<std::size_t> who;
    std::vector<double> means;
    for (std::size_t s = 0; s < profiles.size(); ++s) {
      if (const auto& m = profiles[s].raw_mean.at(metric)) {
        who.push_back(s);
        means.push_back(*m);
      }
    }
    if (means.empty()) continue;
    const auto normalized = stats::minmax_normalize(means);
    for (std::size_t k = 0; k < who.size(); ++k)
      profiles[who[k]].normalized[metric] = normalized[k];
  }
  return profiles;
}

}  // namespace psylex

#include <algorithm>
#include <cmath>
#include <limits>

#include "psylex/error.hpp"
#include "psylex/stats.hpp"

namespace psylex::stats {

namespace {

struct Node {
  std::vector<std::size_t> members;  // sorted original indices
  std::vector<std::size_t> leaves;   // dendrogram leaf order
};

}  // namespace

Dendrogram cluster(const CorrelationMatrix& corr) {
  const std::size_t n = corr.size();
  for (const auto& row : corr)
    if (row.size() != n)
      throw DataError("correlation matrix must be square");

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = corr[i][j].value_or(0.0);
      const double rt = corr[j][i].value_or(0.0);
      if (std::abs(r - rt) > 1e-12)
        throw DataError("correlation matrix must be symmetric");
      dist[i][j] = 1.0 - std::abs(r);
    }
  }

  std::vector<Node> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({{i}, {i}});

  auto linkage = [&](const Node& a, const Node& b) {
    double sum = 0.0;
    for (std::size_t i : a.members)
      for (std::size_t j : b.members) sum += dist[i][j];
    return sum / static_cast<double>(a.members.size() * b.members.size());
  };

  Dendrogram out;
  while (active.size() > 1) {
    // `active` stays sorted by smallest member, so scanning pairs in order
    // realizes the lowest-index tie-break.
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = linkage(active[a], active[b]);
        if (d < best - 1e-12) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    Node& left = active[best_a];
    Node& right = active[best_b];
    out.merges.push_back({left.members, right.members, best});

    Node merged;
    merged.members = left.members;
    merged.members.insert(merged.members.end(), right.members.begin(),
                          right.members.end());
    std::sort(merged.members.begin(), merged.members.end());
    merged.leaves = left.leaves;
    merged.leaves.insert(merged.leaves.end(), right.leaves.begin(),
                         right.leaves.end());

    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active[best_a] = std::move(merged);
  }
  if (n == 1) out.order = {0};
  if (!active.empty()) out.order = active.front().leaves;
  return out;
}

std::vector<std::size_t> cluster_order(const CorrelationMatrix& corr) {
  return cluster(corr).order;
}

}  // namespace psylex::stats

#pragma once

// Agglomerative clustering of market verdict vectors (L1 distance, average
// linkage).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stylized/battery.hpp"
#include "stylized/error.hpp"

namespace stylized {

struct DendrogramNode {
  std::string market;  ///< set for leaves only
  double height = 0.0;
  std::vector<std::string> members;  ///< sorted
  std::unique_ptr<DendrogramNode> left;
  std::unique_ptr<DendrogramNode> right;
  /// Leaves are numbered 0..n-1 in name order, internal nodes n, n+1, ...
  std::size_t id = 0;

  [[nodiscard]] bool is_leaf() const { return !left; }
};

struct MergeStep {
  std::size_t step = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t id = 0;
  double height = 0.0;
  std::size_t size = 0;
  std::vector<std::string> members;
};

struct Dendrogram {
  std::unique_ptr<DendrogramNode> root;
  std::vector<MergeStep> merges;
  std::vector<std::string> leaves;  ///< sorted market names
};

inline double l1_distance(const MarketVerdictVector& a, const MarketVerdictVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < kFactCount; ++i) d += std::abs(a.verdicts[i] - b.verdicts[i]);
  return d;
}

/// Average-linkage clustering. Equal distances are resolved by the
/// lexicographically smallest pair of cluster representatives (each cluster's
/// smallest member name), so the result does not depend on input order.
inline Dendrogram cluster_markets(std::span<const MarketVerdictVector> vectors) {
  if (vectors.size() < 2) fail(ErrorKind::Input, "cluster_markets requires at least 2 markets");
  std::vector<MarketVerdictVector> v(vectors.begin(), vectors.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.market < b.market; });
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].market == v[i - 1].market) fail(ErrorKind::Input, "duplicate market name: " + v[i].market);
  }
  const std::size_t n = v.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = l1_distance(v[i], v[j]);
  }

  Dendrogram out;
  std::vector<std::unique_ptr<DendrogramNode>> active;
  std::vector<std::vector<std::size_t>> leaf_sets;
  for (std::size_t i = 0; i < n; ++i) {
    auto leaf = std::make_unique<DendrogramNode>();
    leaf->market = v[i].market;
    leaf->members = {v[i].market};
    leaf->id = i;
    active.push_back(std::move(leaf));
    leaf_sets.push_back({i});
    out.leaves.push_back(v[i].market);
  }

  auto linkage = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t i : leaf_sets[a]) {
      for (std::size_t j : leaf_sets[b]) s += dist[i][j];
    }
    return s / static_cast<double>(leaf_sets[a].size() * leaf_sets[b].size());
  };
  constexpr double kTieTol = 1e-12;

  std::size_t next_id = n;
  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = linkage(0, 1);
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = linkage(a, b);
        // active is kept ordered by smallest member, so (a, b) scans pairs in
        // lexicographic order and only a strictly smaller distance wins.
        if (d < best - kTieTol) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    auto node = std::make_unique<DendrogramNode>();
    node->height = best;
    node->id = next_id++;
    node->members = active[best_a]->members;
    node->members.insert(node->members.end(), active[best_b]->members.begin(), active[best_b]->members.end());
    std::sort(node->members.begin(), node->members.end());
    MergeStep step;
    step.step = out.merges.size() + 1;
    step.left = active[best_a]->id;
    step.right = active[best_b]->id;
    step.id = node->id;
    step.height = best;
    step.size = node->members.size();
    step.members = node->members;
    out.merges.push_back(step);
    node->left = std::move(active[best_a]);
    node->right = std::move(active[best_b]);

    std::vector<std::size_t> merged = leaf_sets[best_a];
    merged.insert(merged.end(), leaf_sets[best_b].begin(), leaf_sets[best_b].end());
    // Erase b first (b > a); the merged cluster takes a's slot, which keeps
    // the smallest-member ordering.
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    leaf_sets.erase(leaf_sets.begin() + static_cast<std::ptrdiff_t>(best_b));
    active[best_a] = std::move(node);
    leaf_sets[best_a] = std::move(merged);
  }
  out.root = std::move(active.front());
  return out;
}

/// Finds the smallest subtree whose members include all of `names`.
inline const DendrogramNode* smallest_subtree_containing(const DendrogramNode& node,
                                                         const std::vector<std::string>& names) {
  auto contains = [&](const DendrogramNode& n) {
    return std::all_of(names.begin(), names.end(), [&](const std::string& s) {
      return std::binary_search(n.members.begin(), n.members.end(), s);
    });
  };
  if (!contains(node)) return nullptr;
  if (!node.is_leaf()) {
    if (const auto* l = smallest_subtree_containing(*node.left, names)) return l;
    if (const auto* r = smallest_subtree_containing(*node.right, names)) return r;
  }
  return &node;
}

}  // namespace stylized

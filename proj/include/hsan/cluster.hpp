#pragma once

#include <cstdint>
#include <vector>

#include "hsan/model.hpp"
#include "hsan/tensor.hpp"

namespace hsan {

struct ClusterResult {
  std::vector<int> assignments;  // in [0, K)
  Dense centers;                 // K x d
  std::vector<double> distances;  // ||x_i - centers[assignments[i]]||
  double inertia = 0.0;           // sum of squared distances
  // Inertia after each Lloyd update of the best restart.
  std::vector<double> inertia_history;
  int iterations = 0;

  [[nodiscard]] int k() const { return static_cast<int>(centers.rows()); }
};

struct KMeansOptions {
  int max_iterations = 300;
  int restarts = 1;
};

// Lloyd's algorithm from k-means++ seeding. The restart with the lowest inertia
// wins; ties go to the earlier restart. Empty clusters take the point farthest
// from its current center.
ClusterResult kmeans(const Dense& points, int k, std::uint64_t seed, const KMeansOptions& opts = {});

enum class ConfidenceScope { kGlobal, kPerCluster };

struct HighConfidenceSet {
  std::vector<int> indices;  // strictly increasing
  double tau_used = 0.0;

  [[nodiscard]] std::vector<bool> mask(int n) const;
};

// Global scope keeps the floor(tau * N) points nearest their centers (at least
// K). Per-cluster scope keeps floor(tau * |c|) points of each cluster, at least
// one each. Ties go to the lower index.
HighConfidenceSet select_high_confidence(const ClusterResult& res, double tau,
                                         ConfidenceScope scope = ConfidenceScope::kGlobal);

// q(i, k) = 1 iff assignments agree.
struct PairPseudoLabels {
  std::vector<int> assignments;

  [[nodiscard]] int n() const { return static_cast<int>(assignments.size()); }
  [[nodiscard]] bool operator()(int i, int k) const { return assignments[i] == assignments[k]; }
  [[nodiscard]] Dense to_dense() const;
};

PairPseudoLabels pair_pseudo_labels(const ClusterResult& res);

// (z1 + z2) / 2
Dense clustering_embedding(const EmbeddingBundle& emb);

}  // namespace hsan

#pragma once

#include <vector>

#include "hsan/cluster.hpp"
#include "hsan/model.hpp"
#include "hsan/tensor.hpp"

namespace hsan {

inline constexpr double kDegenerateRange = 1e-12;

// Global min-max normalization over all four blocks of a similarity grid.
struct NormalizedGrid {
  Dense values;  // in [0, 1]
  double min = 0.0;
  double max = 0.0;
  // Flat (row-major) positions of the extreme entries; first occurrence wins.
  Eigen::Index argmin = 0;
  Eigen::Index argmax = 0;
  bool degenerate = false;  // max - min < kDegenerateRange: every value is 0.5

  [[nodiscard]] double range() const { return max - min; }
};

NormalizedGrid min_max_normalize(const SimilarityGrid& grid);

// Sample-pair weights aligned with the 2N x 2N grid. Entries outside H x H are
// exactly 1; inside, |q - norm|^beta.
struct WeightMatrix {
  Dense values;
  // d weight / d normalized similarity; zero outside H x H. Empty when the
  // weights were built detached.
  Dense d_weight_d_norm;
  NormalizedGrid normalization;
  double beta_used = 1.0;
  std::vector<bool> hc_mask;

  [[nodiscard]] bool has_derivative() const { return d_weight_d_norm.size() > 0; }
};

// Weight matrix with every entry 1 (the unweighted objective).
WeightMatrix unit_weights(Eigen::Index n);

// Elementwise modulating function |q - s|^beta, and its derivative in s.
double modulate(bool q, double norm_sim, double beta);
double modulate_derivative(bool q, double norm_sim, double beta);

WeightMatrix modulating_weights(const PairPseudoLabels& q, const NormalizedGrid& norm, const HighConfidenceSet& hc,
                                double beta, bool with_derivative = true);

struct LossResult {
  double value = 0.0;
  Dense grad_grid;  // dL/dS, 2N x 2N
};

// Mean over the 2N anchors of -log(e^{w s}_pos / sum_{c != anchor} e^{w s}).
// When the weights carry a derivative, the gradient includes the path through
// the weights, the normalization scale, and the grid entries holding the
// normalization min and max.
LossResult hsan_loss(const SimilarityGrid& grid, const WeightMatrix& weights);

struct InfoNceResult {
  double value = 0.0;
  Dense grad_z1;
  Dense grad_z2;
};

// Symmetric two-view infoNCE on cosine similarity of unit-norm rows.
InfoNceResult infonce_loss(const Dense& z1, const Dense& z2);

}  // namespace hsan

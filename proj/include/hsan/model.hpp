#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hsan/graphops.hpp"
#include "hsan/tensor.hpp"

namespace hsan {

inline constexpr double kAlphaInit = 0.99999;

// Two attribute encoders (D -> d), two structure encoders (N -> d) and the
// learnable attribute/structure trade-off.
struct ModelParams {
  LinearLayer ae1, ae2;
  LinearLayer se1, se2;
  double alpha = kAlphaInit;
};

ModelParams init_params(int feature_dim, int num_nodes, int hidden, std::uint64_t seed);

// Same layout as ModelParams; used for gradients.
using ModelGrads = ModelParams;

ModelGrads zeros_like(const ModelParams& p);

// Flat views in a fixed order: ae1.w, ae1.b, ae2.w, ae2.b, se1.w, se1.b,
// se2.w, se2.b, alpha.
std::vector<std::span<double>> param_views(ModelParams& p);
std::vector<std::span<const double>> param_views(const ModelParams& p);

// Row-unit-norm embeddings of both views.
struct EmbeddingBundle {
  Dense z1, z2;  // attribute
  Dense e1, e2;  // structure

  [[nodiscard]] Eigen::Index num_nodes() const { return z1.rows(); }
};

struct EncodeCache {
  Dense z1_raw, z2_raw, e1_raw, e2_raw;
  RowNormCache z1_norm, z2_norm, e1_norm, e2_norm;
};

struct EncodeResult {
  EmbeddingBundle bundle;
  EncodeCache cache;
};

// x_filtered is the smoothed attribute matrix; adjacency is the dense binary
// adjacency (zero diagonal) that feeds the structure encoders row by row.
EncodeResult encode(const Dense& x_filtered, const Dense& adjacency, const ModelParams& params);
EncodeResult encode(const FilteredAttributes& x_filtered, const SparseSym& adj, const ModelParams& params);

struct EmbeddingGrads {
  Dense z1, z2, e1, e2;
};

// Backpropagates embedding gradients to every encoder parameter. The alpha slot
// of the result is zero; similarity_backward supplies it.
ModelGrads encode_backward(const Dense& x_filtered, const Dense& adjacency, const ModelParams& params,
                           const EncodeCache& cache, const EmbeddingGrads& grads);

// The 2N x 2N attribute-structure similarity over stacked views. Row and
// column index v*N + i addresses node i in view v (v = 0, 1).
struct SimilarityGrid {
  Dense values;
  double alpha_used = 0.0;
  Eigen::Index n = 0;

  // Block S^{(j,l)} for views j, l in {0, 1}.
  [[nodiscard]] auto block(int j, int l) const { return values.block(j * n, l * n, n, n); }
};

// S = alpha * Z Z^T + (1 - alpha) * E E^T over stacked [z1; z2] and [e1; e2].
// Computed as symmetric rank updates so the grid is exactly symmetric.
SimilarityGrid similarity_grid(const EmbeddingBundle& emb, double alpha);

struct SimilarityGrads {
  EmbeddingGrads embeddings;
  double alpha = 0.0;
};

// Chain rule through the grid given dL/dS for all 2N x 2N entries.
SimilarityGrads similarity_backward(const EmbeddingBundle& emb, double alpha, const Dense& grad_grid);

Dense stack_views(const Dense& first, const Dense& second);

}  // namespace hsan

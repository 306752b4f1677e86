#include "hsan/model.hpp"

#include <random>
#include <stdexcept>

#include "hsan/seed.hpp"

namespace hsan {

ModelParams init_params(int feature_dim, int num_nodes, int hidden, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, SeedStream::kParamInit));
  ModelParams p;
  p.ae1 = make_linear(feature_dim, hidden, rng);
  p.ae2 = make_linear(feature_dim, hidden, rng);
  p.se1 = make_linear(num_nodes, hidden, rng);
  p.se2 = make_linear(num_nodes, hidden, rng);
  p.alpha = kAlphaInit;
  return p;
}

ModelGrads zeros_like(const ModelParams& p) {
  auto zero = [](const LinearLayer& l) {
    return LinearLayer{Dense::Zero(l.weight.rows(), l.weight.cols()), Dense::Zero(1, l.bias.cols())};
  };
  return ModelGrads{zero(p.ae1), zero(p.ae2), zero(p.se1), zero(p.se2), 0.0};
}

std::vector<std::span<double>> param_views(ModelParams& p) {
  return {as_span(p.ae1.weight), as_span(p.ae1.bias), as_span(p.ae2.weight), as_span(p.ae2.bias),
          as_span(p.se1.weight), as_span(p.se1.bias), as_span(p.se2.weight), as_span(p.se2.bias),
          std::span<double>(&p.alpha, 1)};
}

std::vector<std::span<const double>> param_views(const ModelParams& p) {
  return {as_span(p.ae1.weight), as_span(p.ae1.bias), as_span(p.ae2.weight), as_span(p.ae2.bias),
          as_span(p.se1.weight), as_span(p.se1.bias), as_span(p.se2.weight), as_span(p.se2.bias),
          std::span<const double>(&p.alpha, 1)};
}

EncodeResult encode(const Dense& x_filtered, const Dense& adjacency, const ModelParams& params) {
  if (adjacency.rows() != x_filtered.rows() || adjacency.cols() != adjacency.rows()) {
    throw std::invalid_argument("encode: adjacency must be N x N with N = rows of the attributes");
  }
  EncodeResult r;
  auto& c = r.cache;
  c.z1_raw = linear_forward(params.ae1, x_filtered);
  c.z2_raw = linear_forward(params.ae2, x_filtered);
  c.e1_raw = linear_forward(params.se1, adjacency);
  c.e2_raw = linear_forward(params.se2, adjacency);

  auto z1 = row_l2_normalize_forward(c.z1_raw);
  auto z2 = row_l2_normalize_forward(c.z2_raw);
  auto e1 = row_l2_normalize_forward(c.e1_raw);
  auto e2 = row_l2_normalize_forward(c.e2_raw);
  r.bundle = {std::move(z1.y), std::move(z2.y), std::move(e1.y), std::move(e2.y)};
  c.z1_norm = std::move(z1.cache);
  c.z2_norm = std::move(z2.cache);
  c.e1_norm = std::move(e1.cache);
  c.e2_norm = std::move(e2.cache);
  return r;
}

EncodeResult encode(const FilteredAttributes& x_filtered, const SparseSym& adj, const ModelParams& params) {
  return encode(x_filtered.matrix, adj.to_dense(), params);
}

ModelGrads encode_backward(const Dense& x_filtered, const Dense& adjacency, const ModelParams& params,
                           const EncodeCache& cache, const EmbeddingGrads& grads) {
  auto through = [](const LinearLayer& layer, const Dense& input, const Dense& raw, const RowNormCache& norm,
                    const Dense& grad_emb) {
    const Dense grad_raw = row_l2_normalize_backward(norm, raw, grad_emb);
    // Input gradients are not needed: the inputs are constants.
    LinearLayer g;
    g.weight.resize(layer.weight.rows(), layer.weight.cols());
    g.weight.noalias() = input.transpose() * grad_raw;
    g.bias = grad_raw.colwise().sum();
    return g;
  };
  ModelGrads g;
  g.ae1 = through(params.ae1, x_filtered, cache.z1_raw, cache.z1_norm, grads.z1);
  g.ae2 = through(params.ae2, x_filtered, cache.z2_raw, cache.z2_norm, grads.z2);
  g.se1 = through(params.se1, adjacency, cache.e1_raw, cache.e1_norm, grads.e1);
  g.se2 = through(params.se2, adjacency, cache.e2_raw, cache.e2_norm, grads.e2);
  g.alpha = 0.0;
  return g;
}

Dense stack_views(const Dense& first, const Dense& second) {
  if (first.rows() != second.rows() || first.cols() != second.cols()) {
    throw std::invalid_argument("stack_views: view shapes differ");
  }
  Dense out(first.rows() * 2, first.cols());
  out.topRows(first.rows()) = first;
  out.bottomRows(second.rows()) = second;
  return out;
}

SimilarityGrid similarity_grid(const EmbeddingBundle& emb, double alpha) {
  const Dense z = stack_views(emb.z1, emb.z2);
  const Dense e = stack_views(emb.e1, emb.e2);
  SimilarityGrid g;
  g.n = emb.num_nodes();
  g.alpha_used = alpha;
  g.values = Dense::Zero(z.rows(), z.rows());
  g.values.selfadjointView<Eigen::Lower>().rankUpdate(z, alpha);
  g.values.selfadjointView<Eigen::Lower>().rankUpdate(e, 1.0 - alpha);
  g.values.triangularView<Eigen::StrictlyUpper>() = g.values.transpose();
  return g;
}

SimilarityGrads similarity_backward(const EmbeddingBundle& emb, double alpha, const Dense& grad_grid) {
  const Eigen::Index n = emb.num_nodes();
  if (grad_grid.rows() != 2 * n || grad_grid.cols() != 2 * n) {
    throw std::invalid_argument("similarity_backward: gradient must be 2N x 2N");
  }
  const Dense z = stack_views(emb.z1, emb.z2);
  const Dense e = stack_views(emb.e1, emb.e2);
  const Dense sym = grad_grid + grad_grid.transpose();

  Dense gz(z.rows(), z.cols());
  gz.noalias() = sym * z;
  Dense ge(e.rows(), e.cols());
  ge.noalias() = sym * e;

  SimilarityGrads r;
  // sum(G .* Z Z^T) = 1/2 sum((G + G^T) Z .* Z)
  r.alpha = 0.5 * (gz.cwiseProduct(z).sum() - ge.cwiseProduct(e).sum());
  gz *= alpha;
  ge *= 1.0 - alpha;
  r.embeddings.z1 = gz.topRows(n);
  r.embeddings.z2 = gz.bottomRows(n);
  r.embeddings.e1 = ge.topRows(n);
  r.embeddings.e2 = ge.bottomRows(n);
  return r;
}

}  // namespace hsan

#include "hsan/loss.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hsan/errors.hpp"

namespace hsan {

NormalizedGrid min_max_normalize(const SimilarityGrid& grid) {
  const Dense& s = grid.values;
  if (s.size() == 0) throw std::invalid_argument("min_max_normalize: empty grid");
  if (!s.allFinite()) throw NumericalError("min_max_normalize: non-finite similarity");
  NormalizedGrid out;
  const double* p = s.data();
  out.argmin = out.argmax = 0;
  for (Eigen::Index i = 1; i < s.size(); ++i) {
    if (p[i] < p[out.argmin]) out.argmin = i;
    if (p[i] > p[out.argmax]) out.argmax = i;
  }
  out.min = p[out.argmin];
  out.max = p[out.argmax];
  if (out.range() < kDegenerateRange) {
    out.degenerate = true;
    out.values = Dense::Constant(s.rows(), s.cols(), 0.5);
  } else {
    out.values = (s.array() - out.min) / out.range();
  }
  return out;
}

WeightMatrix unit_weights(Eigen::Index n) {
  WeightMatrix w;
  w.values = Dense::Ones(2 * n, 2 * n);
  w.hc_mask.assign(static_cast<std::size_t>(n), false);
  return w;
}

double modulate(bool q, double norm_sim, double beta) {
  return std::pow(std::abs((q ? 1.0 : 0.0) - norm_sim), beta);
}

double modulate_derivative(bool q, double norm_sim, double beta) {
  const double u = (q ? 1.0 : 0.0) - norm_sim;
  if (u == 0.0) return 0.0;
  const double sign = u > 0.0 ? 1.0 : -1.0;
  return -beta * std::pow(std::abs(u), beta - 1.0) * sign;
}

WeightMatrix modulating_weights(const PairPseudoLabels& q, const NormalizedGrid& norm, const HighConfidenceSet& hc,
                                double beta, bool with_derivative) {
  if (!(beta >= 1.0)) throw std::invalid_argument("modulating_weights: beta must be >= 1");
  const Eigen::Index n = q.n();
  if (norm.values.rows() != 2 * n || norm.values.cols() != 2 * n) {
    throw std::invalid_argument("modulating_weights: grid does not match the pseudo labels");
  }
  WeightMatrix w;
  w.values = Dense::Ones(2 * n, 2 * n);
  if (with_derivative) w.d_weight_d_norm = Dense::Zero(2 * n, 2 * n);
  w.normalization = norm;
  w.beta_used = beta;
  w.hc_mask = hc.mask(static_cast<int>(n));

  for (int j = 0; j < 2; ++j) {
    for (int l = 0; l < 2; ++l) {
      for (int i : hc.indices) {
        const Eigen::Index row = j * n + i;
        for (int k : hc.indices) {
          const Eigen::Index col = l * n + k;
          const bool same = q(i, k);
          const double s = norm.values(row, col);
          w.values(row, col) = modulate(same, s, beta);
          if (with_derivative) w.d_weight_d_norm(row, col) = modulate_derivative(same, s, beta);
        }
      }
    }
  }
  return w;
}

LossResult hsan_loss(const SimilarityGrid& grid, const WeightMatrix& weights) {
  const Dense& s = grid.values;
  const Eigen::Index two_n = s.rows();
  const Eigen::Index n = two_n / 2;
  if (s.cols() != two_n || two_n % 2 != 0 || weights.values.rows() != two_n || weights.values.cols() != two_n) {
    throw std::invalid_argument("hsan_loss: grid and weights must both be 2N x 2N");
  }

  const Dense logits = weights.values.cwiseProduct(s);
  Dense expo = logits.array().exp();
  const double scale = 1.0 / static_cast<double>(two_n);

  LossResult r;
  r.grad_grid.resize(two_n, two_n);
  Dense& g = r.grad_grid;  // holds dL/dlogits until the end
  double total = 0.0;
  for (Eigen::Index a = 0; a < two_n; ++a) {
    const Eigen::Index pos = (a + n) % two_n;
    const double denom = expo.row(a).sum() - expo(a, a);
    total += std::log(denom) - logits(a, pos);
    g.row(a) = expo.row(a) * (scale / denom);
    g(a, a) = 0.0;
    g(a, pos) -= scale;
  }
  r.value = total * scale;
  if (!std::isfinite(r.value)) {
    std::ostringstream os;
    os << "hsan_loss: non-finite loss " << r.value;
    throw NumericalError(os.str());
  }

  if (weights.has_derivative() && !weights.normalization.degenerate) {
    const auto& nz = weights.normalization;
    // dL/dnorm for every entry; zero outside H x H through d_weight_d_norm.
    const Dense d_norm = g.cwiseProduct(s).cwiseProduct(weights.d_weight_d_norm);
    const double range = nz.range();
    const double g_min = (d_norm.array() * (s.array() - nz.max)).sum() / (range * range);
    const double g_max = -(d_norm.array() * (s.array() - nz.min)).sum() / (range * range);
    g = g.cwiseProduct(weights.values) + d_norm / range;
    g.data()[nz.argmin] += g_min;
    g.data()[nz.argmax] += g_max;
  } else {
    g = g.cwiseProduct(weights.values);
  }
  return r;
}

InfoNceResult infonce_loss(const Dense& z1, const Dense& z2) {
  if (z1.rows() != z2.rows() || z1.cols() != z2.cols()) throw std::invalid_argument("infonce_loss: view shapes differ");
  const Eigen::Index n = z1.rows();
  const Dense s11 = z1 * z1.transpose();
  const Dense s22 = z2 * z2.transpose();
  const Dense s12 = z1 * z2.transpose();  // s21 = s12^T
  const Dense e11 = s11.array().exp();
  const Dense e22 = s22.array().exp();
  const Dense e12 = s12.array().exp();
  const double scale = 1.0 / static_cast<double>(2 * n);

  Dense g11 = Dense::Zero(n, n);
  Dense g22 = Dense::Zero(n, n);
  Dense g12 = Dense::Zero(n, n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // view 1 anchor: same-view row of s11, cross-view row of s12
    const double den1 = e11.row(i).sum() - e11(i, i) + e12.row(i).sum();
    total += std::log(den1) - s12(i, i);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != i) g11(i, k) += scale * e11(i, k) / den1;
      g12(i, k) += scale * e12(i, k) / den1;
    }
    g12(i, i) -= scale;
    // view 2 anchor: same-view row of s22, cross-view column of s12
    const double den2 = e22.row(i).sum() - e22(i, i) + e12.col(i).sum();
    total += std::log(den2) - s12(i, i);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != i) g22(i, k) += scale * e22(i, k) / den2;
      g12(k, i) += scale * e12(k, i) / den2;
    }
    g12(i, i) -= scale;
  }
  InfoNceResult r;
  r.value = total * scale;
  r.grad_z1 = (g11 + g11.transpose()) * z1 + g12 * z2;
  r.grad_z2 = (g22 + g22.transpose()) * z2 + g12.transpose() * z1;
  return r;
}

}  // namespace hsan

#include "hsan/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hsan/errors.hpp"

namespace hsan {

bool all_finite(const Dense& m) { return m.allFinite(); }

LinearLayer make_linear(Eigen::Index in_dim, Eigen::Index out_dim, std::mt19937_64& rng) {
  if (in_dim <= 0 || out_dim <= 0) throw std::invalid_argument("make_linear: non-positive dimension");
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  std::uniform_real_distribution<double> dist(-bound, bound);
  LinearLayer layer{Dense(in_dim, out_dim), Dense(1, out_dim)};
  for (Eigen::Index i = 0; i < layer.weight.size(); ++i) layer.weight.data()[i] = dist(rng);
  for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias.data()[i] = dist(rng);
  return layer;
}

Dense linear_forward(const LinearLayer& layer, const Dense& x) {
  if (x.cols() != layer.weight.rows()) {
    std::ostringstream os;
    os << "linear_forward: input has " << x.cols() << " columns, layer expects " << layer.weight.rows();
    throw std::invalid_argument(os.str());
  }
  Dense y(x.rows(), layer.weight.cols());
  y.noalias() = x * layer.weight;
  y.rowwise() += layer.bias.row(0);
  return y;
}

LinearGrads linear_backward(const LinearLayer& layer, const Dense& x, const Dense& grad_out) {
  if (x.cols() != layer.weight.rows() || grad_out.rows() != x.rows() ||
      grad_out.cols() != layer.weight.cols()) {
    throw std::invalid_argument("linear_backward: shape mismatch");
  }
  LinearGrads g;
  g.grad_x.resize(x.rows(), x.cols());
  g.grad_x.noalias() = grad_out * layer.weight.transpose();
  g.grad_w.resize(x.cols(), grad_out.cols());
  g.grad_w.noalias() = x.transpose() * grad_out;
  g.grad_b = grad_out.colwise().sum();
  return g;
}

RowNormResult row_l2_normalize_forward(const Dense& x) {
  RowNormResult r{Dense(x.rows(), x.cols()), RowNormCache{Vector(x.rows())}};
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double n = x.row(i).norm();
    if (!(n >= kNormFloor) || !std::isfinite(n)) {
      std::ostringstream os;
      os << "degenerate embedding: row " << i << " has L2 norm " << n << " (floor " << kNormFloor << ")";
      throw NumericalError(os.str());
    }
    r.cache.norms[i] = n;
    r.y.row(i) = x.row(i) / n;
  }
  return r;
}

Dense row_l2_normalize_backward(const RowNormCache& cache, const Dense& x, const Dense& grad_out) {
  if (cache.norms.size() != x.rows() || grad_out.rows() != x.rows() || grad_out.cols() != x.cols()) {
    throw std::invalid_argument("row_l2_normalize_backward: cache or gradient does not match input");
  }
  Dense g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double n = cache.norms[i];
    const auto y = x.row(i) / n;
    const double proj = y.dot(grad_out.row(i));
    g.row(i) = (grad_out.row(i) - proj * y) / n;
  }
  return g;
}

void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads, AdamState& state, double lr) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam_step: params/grads count mismatch");
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (params[t].size() != grads[t].size()) throw std::invalid_argument("adam_step: tensor size mismatch");
    for (std::size_t i = 0; i < grads[t].size(); ++i) {
      if (!std::isfinite(grads[t][i])) {
        std::ostringstream os;
        os << "non-finite gradient in parameter tensor " << t << " at element " << i;
        throw NumericalError(os.str());
      }
    }
  }
  if (state.first_moment.empty()) {
    state.first_moment.resize(params.size());
    state.second_moment.resize(params.size());
    for (std::size_t t = 0; t < params.size(); ++t) {
      state.first_moment[t].assign(params[t].size(), 0.0);
      state.second_moment[t].assign(params[t].size(), 0.0);
    }
  } else if (state.first_moment.size() != params.size()) {
    throw std::invalid_argument("adam_step: state shaped for a different parameter list");
  }

  state.step_count += 1;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto& m = state.first_moment[t];
    auto& v = state.second_moment[t];
    for (std::size_t i = 0; i < params[t].size(); ++i) {
      const double g = grads[t][i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      params[t][i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

std::vector<double> finite_diff_grad(const std::function<double()>& loss_fn, std::span<double> params,
                                     double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw std::invalid_argument("finite_diff_grad: h outside [1e-7, 1e-3]");
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double up = loss_fn();
    params[i] = saved - h;
    const double down = loss_fn();
    params[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      std::ostringstream os;
      os << "finite_diff_grad: non-finite loss while probing coordinate " << i;
      throw NumericalError(os.str());
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_error: size mismatch");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  if (scale == 0.0) return 0.0;
  return std::sqrt(diff) / scale;
}

}  // namespace hsan

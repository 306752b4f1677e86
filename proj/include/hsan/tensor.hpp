#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace hsan {

// Row-major double matrix used for every dense quantity in the engine.
using Dense = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr double kNormFloor = 1e-12;

bool all_finite(const Dense& m);

// y = x W + 1 b. weight is in_dim x out_dim, bias is 1 x out_dim.
struct LinearLayer {
  Dense weight;
  Dense bias;

  [[nodiscard]] Eigen::Index in_dim() const { return weight.rows(); }
  [[nodiscard]] Eigen::Index out_dim() const { return weight.cols(); }
};

// Uniform in [-1/sqrt(in_dim), 1/sqrt(in_dim)] for weights and biases.
LinearLayer make_linear(Eigen::Index in_dim, Eigen::Index out_dim, std::mt19937_64& rng);

Dense linear_forward(const LinearLayer& layer, const Dense& x);

struct LinearGrads {
  Dense grad_x;
  Dense grad_w;
  Dense grad_b;
};

LinearGrads linear_backward(const LinearLayer& layer, const Dense& x, const Dense& grad_out);

struct RowNormCache {
  Vector norms;
};

struct RowNormResult {
  Dense y;
  RowNormCache cache;
};

// Throws NumericalError naming the first row whose norm is below kNormFloor
// or not finite.
RowNormResult row_l2_normalize_forward(const Dense& x);

// Applies (I - y y^T) / ||x|| per row.
Dense row_l2_normalize_backward(const RowNormCache& cache, const Dense& x, const Dense& grad_out);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step_count = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

// One bias-corrected Adam update over a list of flat parameter tensors.
// Moments are allocated on the first call. Throws NumericalError on a
// non-finite gradient before touching any parameter.
void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads, AdamState& state, double lr);

// Central differences (f(p+h) - f(p-h)) / 2h for every coordinate of params.
// loss_fn reads params through whatever storage they alias; each coordinate is
// restored exactly after probing.
std::vector<double> finite_diff_grad(const std::function<double()>& loss_fn,
                                     std::span<double> params, double h);

// ||a - b|| / max(||a||, ||b||), 0 when both vanish.
double relative_error(std::span<const double> a, std::span<const double> b);

inline std::span<double> as_span(Dense& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
inline std::span<const double> as_span(const Dense& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace hsan

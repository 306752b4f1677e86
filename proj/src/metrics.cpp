#include "hsan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hsan {
namespace {

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("metrics: prediction and truth lengths differ");
  if (pred.empty()) throw std::invalid_argument("metrics: empty labelings");
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0) throw std::invalid_argument("metrics: negative label");
  }
}

int label_count(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()) + 1; }

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

Confusion confusion_matrix(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_lengths(pred, truth);
  Confusion c(label_count(pred), std::vector<long>(label_count(truth), 0));
  for (std::size_t i = 0; i < pred.size(); ++i) ++c[pred[i]][truth[i]];
  return c;
}

std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(cost[0].size());
  const int n = std::max(rows, cols);
  // Square padding with zero-cost dummies; 1-based potentials formulation.
  auto a = [&](int i, int j) -> double {
    if (i <= rows && j <= cols) return cost[i - 1][j - 1];
    return 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(rows, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] >= 1 && p[j] <= rows && j <= cols) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

AccuracyResult clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Confusion c = confusion_matrix(pred, truth);
  std::vector<std::vector<double>> cost(c.size(), std::vector<double>(c[0].size()));
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t t = 0; t < c[p].size(); ++t) cost[p][t] = -static_cast<double>(c[p][t]);
  }
  AccuracyResult r;
  r.mapping = hungarian_min_cost(cost);
  long correct = 0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (r.mapping[p] >= 0) correct += c[p][r.mapping[p]];
  }
  r.acc = static_cast<double>(correct) / static_cast<double>(pred.size());
  return r;
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Confusion c = confusion_matrix(pred, truth);
  const double n = static_cast<double>(pred.size());
  std::vector<double> rows(c.size(), 0.0), cols(c[0].size(), 0.0);
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t t = 0; t < c[p].size(); ++t) {
      rows[p] += static_cast<double>(c[p][t]);
      cols[t] += static_cast<double>(c[p][t]);
    }
  }
  auto entropy = [n](const std::vector<double>& counts) {
    double h = 0.0;
    for (double x : counts) {
      if (x > 0.0) h -= (x / n) * std::log(x / n);
    }
    return h;
  };
  const double hp = entropy(rows);
  const double ht = entropy(cols);
  double mi = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t t = 0; t < c[p].size(); ++t) {
      const double x = static_cast<double>(c[p][t]);
      if (x > 0.0) mi += (x / n) * std::log(x * n / (rows[p] * cols[t]));
    }
  }
  const double denom = 0.5 * (hp + ht);
  if (denom <= 0.0) return 1.0;  // both partitions are a single block
  return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Confusion c = confusion_matrix(pred, truth);
  const double n = static_cast<double>(pred.size());
  std::vector<double> rows(c.size(), 0.0), cols(c[0].size(), 0.0);
  double index = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t t = 0; t < c[p].size(); ++t) {
      const double x = static_cast<double>(c[p][t]);
      rows[p] += x;
      cols[t] += x;
      index += choose2(x);
    }
  }
  double sum_rows = 0.0, sum_cols = 0.0;
  for (double x : rows) sum_rows += choose2(x);
  for (double x : cols) sum_cols += choose2(x);
  const double total = choose2(n);
  if (total == 0.0) return 1.0;
  const double expected = sum_rows * sum_cols / total;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double macro_f1(const std::vector<int>& pred, const std::vector<int>& truth, const std::vector<int>& mapping) {
  check_lengths(pred, truth);
  const int classes = label_count(truth);
  std::vector<double> tp(classes, 0.0), pred_count(classes, 0.0), true_count(classes, 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] >= static_cast<int>(mapping.size())) throw std::invalid_argument("macro_f1: mapping too short");
    const int mapped = mapping[pred[i]];
    true_count[truth[i]] += 1.0;
    if (mapped >= 0 && mapped < classes) {
      pred_count[mapped] += 1.0;
      if (mapped == truth[i]) tp[mapped] += 1.0;
    }
  }
  double sum = 0.0;
  for (int t = 0; t < classes; ++t) {
    const double precision = pred_count[t] > 0.0 ? tp[t] / pred_count[t] : 0.0;
    const double recall = true_count[t] > 0.0 ? tp[t] / true_count[t] : 0.0;
    if (precision + recall > 0.0) sum += 2.0 * precision * recall / (precision + recall);
  }
  return sum / classes;
}

EvalReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth) {
  EvalReport r;
  const auto acc = clustering_accuracy(pred, truth);
  r.acc = acc.acc;
  r.mapping = acc.mapping;
  r.nmi = nmi(pred, truth);
  r.ari = ari(pred, truth);
  r.f1 = macro_f1(pred, truth, r.mapping);
  r.confusion = confusion_matrix(pred, truth);
  return r;
}

}  // namespace hsan

#pragma once

// Scalar brute-force reference implementations shared by the unit tests and the
// acceptance suite. Deliberately loop-based and independent of the vectorized
// code paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "hsan/tensor.hpp"

namespace hsan::oracle {

inline Dense random_dense(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Dense m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

inline Dense unit_rows(Dense m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i).normalize();
  return m;
}

inline double dot(const Dense& a, int i, const Dense& b, int k) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) s += a(i, c) * b(k, c);
  return s;
}

// Weighted contrastive loss evaluated anchor by anchor. views[v] = {Z_v, E_v}; hc lists the
// high-confidence nodes; pred holds the pseudo labels.
inline double hsan_loss_by_anchor(const Dense& z1, const Dense& z2, const Dense& e1, const Dense& e2, double alpha,
                             const std::vector<int>& pred, const std::vector<int>& hc, double beta,
                             bool use_weights) {
  const int n = static_cast<int>(z1.rows());
  const Dense* z[2] = {&z1, &z2};
  const Dense* e[2] = {&e1, &e2};
  auto sim = [&](int j, int i, int l, int k) {
    return alpha * dot(*z[j], i, *z[l], k) + (1.0 - alpha) * dot(*e[j], i, *e[l], k);
  };
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          lo = std::min(lo, sim(j, i, l, k));
          hi = std::max(hi, sim(j, i, l, k));
        }
  const std::set<int> h(hc.begin(), hc.end());
  auto weight = [&](int j, int i, int l, int k) {
    if (!use_weights || !h.count(i) || !h.count(k)) return 1.0;
    const double norm = hi - lo < 1e-12 ? 0.5 : (sim(j, i, l, k) - lo) / (hi - lo);
    const double q = pred[i] == pred[k] ? 1.0 : 0.0;
    return std::pow(std::abs(q - norm), beta);
  };
  auto term = [&](int j, int i, int l, int k) { return std::exp(weight(j, i, l, k) * sim(j, i, l, k)); };

  double total = 0.0;
  for (int v = 0; v < 2; ++v) {
    const int u = 1 - v;
    for (int i = 0; i < n; ++i) {
      const double pos = term(v, i, u, i);
      double neg = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != i) neg += term(v, i, v, k) + term(v, i, u, k);
      }
      total += -std::log(pos / (pos + neg));
    }
  }
  return total / (2.0 * n);
}

// Two-view infoNCE on cosine similarity of unit rows, anchor by anchor.
inline double infonce_by_anchor(const Dense& z1, const Dense& z2) {
  const int n = static_cast<int>(z1.rows());
  const Dense* z[2] = {&z1, &z2};
  double total = 0.0;
  for (int v = 0; v < 2; ++v) {
    const int u = 1 - v;
    for (int i = 0; i < n; ++i) {
      const double pos = std::exp(dot(*z[v], i, *z[u], i));
      double neg = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != i) neg += std::exp(dot(*z[v], i, *z[v], k)) + std::exp(dot(*z[v], i, *z[u], k));
      }
      total += -std::log(pos / (pos + neg));
    }
  }
  return total / (2.0 * n);
}

// Best accuracy over every injective relabeling of predicted clusters.
inline double accuracy_by_permutation(const std::vector<int>& pred, const std::vector<int>& truth) {
  const int kp = *std::max_element(pred.begin(), pred.end()) + 1;
  const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  const int k = std::max(kp, kt);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  long best = 0;
  do {
    long hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += perm[pred[i]] == truth[i];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

// Adjusted Rand index from agreement counts over all unordered pairs.
inline double ari_by_pairs(const std::vector<int>& pred, const std::vector<int>& truth) {
  const std::size_t n = pred.size();
  double both = 0, same_pred = 0, same_truth = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool p = pred[i] == pred[j], t = truth[i] == truth[j];
      both += p && t;
      same_pred += p;
      same_truth += t;
      pairs += 1;
    }
  }
  const double expected = same_pred * same_truth / pairs;
  const double max_index = 0.5 * (same_pred + same_truth);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

inline double nmi_by_entropy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const double n = static_cast<double>(pred.size());
  std::map<int, double> cp, ct;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    cp[pred[i]] += 1;
    ct[truth[i]] += 1;
    joint[{pred[i], truth[i]}] += 1;
  }
  double hp = 0, ht = 0, mi = 0;
  for (auto [k, c] : cp) hp -= c / n * std::log(c / n);
  for (auto [k, c] : ct) ht -= c / n * std::log(c / n);
  for (auto [key, c] : joint) mi += c / n * std::log((c / n) / ((cp[key.first] / n) * (ct[key.second] / n)));
  if (hp == 0.0 && ht == 0.0) return 1.0;
  return mi / (0.5 * (hp + ht));
}

inline std::vector<int> random_labels(int n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, k - 1);
  std::vector<int> v(n);
  for (int& x : v) x = d(rng);
  // Compact to 0..k'-1 so every label in range is used.
  std::map<int, int> remap;
  for (int& x : v) x = remap.emplace(x, static_cast<int>(remap.size())).first->second;
  return v;
}

}  // namespace hsan::oracle

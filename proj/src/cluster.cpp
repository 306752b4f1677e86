#include "hsan/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hsan/seed.hpp"

namespace hsan {
namespace {

double squared_distance(const Dense& a, Eigen::Index i, const Dense& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Dense seed_plus_plus(const Dense& x, int k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  Dense centers(k, x.cols());
  std::vector<char> chosen(n, 0);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  Eigen::Index first = pick(rng);
  centers.row(0) = x.row(first);
  chosen[first] = 1;

  std::vector<double> d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = squared_distance(x, i, centers, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Eigen::Index next = -1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        next = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point coincides with a center: take any unused index.
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[i]) free.push_back(i);
      }
      std::uniform_int_distribution<std::size_t> pf(0, free.size() - 1);
      next = free[pf(rng)];
    }
    centers.row(c) = x.row(next);
    chosen[next] = 1;
    for (Eigen::Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x, i, centers, c));
  }
  return centers;
}

void assign_nearest(const Dense& x, const Dense& centers, std::vector<int>& assign, std::vector<double>& d2) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
      const double d = squared_distance(x, i, centers, c);
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    assign[i] = arg;
    d2[i] = best;
  }
}

// Moves the farthest point of a non-singleton cluster into each empty cluster.
void repair_empty(const Dense& x, Dense& centers, std::vector<int>& assign, std::vector<double>& d2) {
  const int k = static_cast<int>(centers.rows());
  std::vector<int> count(k, 0);
  for (int a : assign) ++count[a];
  for (int c = 0; c < k; ++c) {
    if (count[c] > 0) continue;
    Eigen::Index far = -1;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (count[assign[i]] <= 1) continue;
      if (far < 0 || d2[i] > d2[far]) far = i;
    }
    if (far < 0) throw std::logic_error("kmeans: cannot repair empty cluster");
    --count[assign[far]];
    assign[far] = c;
    ++count[c];
    centers.row(c) = x.row(far);
    d2[far] = 0.0;
  }
}

Dense cluster_means(const Dense& x, const std::vector<int>& assign, int k) {
  Dense m = Dense::Zero(k, x.cols());
  std::vector<int> count(k, 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    m.row(assign[i]) += x.row(i);
    ++count[assign[i]];
  }
  for (int c = 0; c < k; ++c) m.row(c) /= static_cast<double>(count[c]);
  return m;
}

double inertia_of(const Dense& x, const Dense& centers, const std::vector<int>& assign) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) s += squared_distance(x, i, centers, assign[i]);
  return s;
}

ClusterResult lloyd(const Dense& x, int k, std::mt19937_64& rng, int max_iterations) {
  const Eigen::Index n = x.rows();
  ClusterResult r;
  r.centers = seed_plus_plus(x, k, rng);
  std::vector<int> assign(n, -1);
  std::vector<int> prev;
  std::vector<double> d2(n);
  for (int it = 1; it <= max_iterations; ++it) {
    r.iterations = it;
    assign_nearest(x, r.centers, assign, d2);
    repair_empty(x, r.centers, assign, d2);
    if (assign == prev) break;
    r.centers = cluster_means(x, assign, k);
    r.inertia_history.push_back(inertia_of(x, r.centers, assign));
    prev = assign;
  }
  r.assignments = std::move(assign);
  r.distances.resize(n);
  r.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sq = squared_distance(x, i, r.centers, r.assignments[i]);
    r.distances[i] = std::sqrt(sq);
    r.inertia += sq;
  }
  return r;
}

}  // namespace

ClusterResult kmeans(const Dense& points, int k, std::uint64_t seed, const KMeansOptions& opts) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be positive");
  if (k > points.rows()) throw std::invalid_argument("kmeans: k exceeds the number of points");
  if (!points.allFinite()) throw std::invalid_argument("kmeans: non-finite input");
  if (opts.restarts < 1 || opts.max_iterations < 1) throw std::invalid_argument("kmeans: bad options");

  ClusterResult best;
  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(r) + 1)));
    ClusterResult cur = lloyd(points, k, rng, opts.max_iterations);
    if (r == 0 || cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

std::vector<bool> HighConfidenceSet::mask(int n) const {
  std::vector<bool> m(n, false);
  for (int i : indices) m[i] = true;
  return m;
}

HighConfidenceSet select_high_confidence(const ClusterResult& res, double tau, ConfidenceScope scope) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("select_high_confidence: tau outside (0, 1]");
  const int n = static_cast<int>(res.distances.size());
  auto closer = [&](int a, int b) {
    return res.distances[a] < res.distances[b] || (res.distances[a] == res.distances[b] && a < b);
  };
  HighConfidenceSet h;
  h.tau_used = tau;
  if (scope == ConfidenceScope::kGlobal) {
    int m = static_cast<int>(std::floor(tau * n + 1e-9));
    m = std::min(n, std::max(m, res.k()));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + m, order.end(), closer);
    h.indices.assign(order.begin(), order.begin() + m);
  } else {
    std::vector<std::vector<int>> members(res.k());
    for (int i = 0; i < n; ++i) members[res.assignments[i]].push_back(i);
    for (auto& mem : members) {
      if (mem.empty()) continue;
      std::sort(mem.begin(), mem.end(), closer);
      const int take = std::max(1, static_cast<int>(std::floor(tau * static_cast<double>(mem.size()) + 1e-9)));
      h.indices.insert(h.indices.end(), mem.begin(), mem.begin() + take);
    }
  }
  std::sort(h.indices.begin(), h.indices.end());
  return h;
}

Dense PairPseudoLabels::to_dense() const {
  const int n = this->n();
  Dense q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) q(i, k) = assignments[i] == assignments[k] ? 1.0 : 0.0;
  }
  return q;
}

PairPseudoLabels pair_pseudo_labels(const ClusterResult& res) { return PairPseudoLabels{res.assignments}; }

Dense clustering_embedding(const EmbeddingBundle& emb) { return (emb.z1 + emb.z2) / 2.0; }

}  // namespace hsan

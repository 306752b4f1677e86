#include "hsan/graphops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsan {

SparseSym::SparseSym(int n, std::vector<Entry> entries) : n_(n), entries_(std::move(entries)) {
  if (n < 0) throw std::invalid_argument("SparseSym: negative dimension");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.row < 0 || e.col >= n || e.row > e.col) throw std::invalid_argument("SparseSym: entry outside upper triangle");
    if (i > 0) {
      const auto& p = entries_[i - 1];
      if (p.row > e.row || (p.row == e.row && p.col >= e.col)) {
        throw std::invalid_argument("SparseSym: entries not sorted or duplicated");
      }
    }
  }
}

std::size_t SparseSym::nonzeros() const {
  std::size_t nnz = 0;
  for (const auto& e : entries_) {
    if (e.value == 0.0) continue;
    nnz += e.row == e.col ? 1 : 2;
  }
  return nnz;
}

double SparseSym::at(int row, int col) const {
  if (row > col) std::swap(row, col);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{row, col},
                             [](const Entry& e, const std::pair<int, int>& key) {
                               return e.row < key.first || (e.row == key.first && e.col < key.second);
                             });
  if (it != entries_.end() && it->row == row && it->col == col) return it->value;
  return 0.0;
}

Dense SparseSym::to_dense() const {
  Dense m = Dense::Zero(n_, n_);
  for (const auto& e : entries_) {
    m(e.row, e.col) = e.value;
    m(e.col, e.row) = e.value;
  }
  return m;
}

Dense SparseSym::multiply(const Dense& x) const {
  if (x.rows() != n_) throw std::invalid_argument("SparseSym::multiply: row count mismatch");
  Dense y = Dense::Zero(x.rows(), x.cols());
  for (const auto& e : entries_) {
    y.row(e.row) += e.value * x.row(e.col);
    if (e.row != e.col) y.row(e.col) += e.value * x.row(e.row);
  }
  return y;
}

SparseSym build_adjacency(const Dataset& dataset) {
  std::vector<SparseSym::Entry> entries;
  entries.reserve(dataset.edges.size());
  for (const auto& [a, b] : dataset.edges) entries.push_back({a, b, 1.0});
  return SparseSym(dataset.num_nodes(), std::move(entries));
}

SparseSym filter_matrix(const SparseSym& adj) {
  const int n = adj.n();
  std::vector<double> degree(n, 1.0);  // self-loop
  for (const auto& e : adj.entries()) {
    if (e.row == e.col) throw std::invalid_argument("filter_matrix: adjacency has a nonzero diagonal");
    degree[e.row] += e.value;
    degree[e.col] += e.value;
  }
  std::vector<SparseSym::Entry> out;
  out.reserve(adj.entries().size() + n);
  auto it = adj.entries().begin();
  for (int i = 0; i < n; ++i) {
    out.push_back({i, i, 1.0 / degree[i]});
    for (; it != adj.entries().end() && it->row == i; ++it) {
      out.push_back({i, it->col, it->value / std::sqrt(degree[i] * degree[it->col])});
    }
  }
  return SparseSym(n, std::move(out));
}

FilteredAttributes smooth_attributes(const Dense& x, const SparseSym& filt, int t) {
  if (t < 0) throw std::invalid_argument("smooth_attributes: negative filtering times");
  FilteredAttributes r{x, t};
  for (int step = 0; step < t; ++step) r.matrix = filt.multiply(r.matrix);
  return r;
}

}  // namespace hsan

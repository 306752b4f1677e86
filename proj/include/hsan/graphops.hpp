#pragma once

#include <vector>

#include "hsan/dataio.hpp"
#include "hsan/tensor.hpp"

namespace hsan {

// Symmetric sparse matrix in coordinate form. Each unordered pair is stored
// once with row <= col; entries are sorted by (row, col) and unique.
class SparseSym {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  SparseSym() = default;
  // Entries must satisfy the class invariant; throws std::invalid_argument otherwise.
  SparseSym(int n, std::vector<Entry> entries);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

  // Nonzeros of the full (both-triangle) matrix.
  [[nodiscard]] std::size_t nonzeros() const;
  [[nodiscard]] double at(int row, int col) const;
  [[nodiscard]] Dense to_dense() const;

  // Sparse-dense product, accumulated in entry order.
  [[nodiscard]] Dense multiply(const Dense& x) const;

 private:
  int n_ = 0;
  std::vector<Entry> entries_;
};

// Result of t rounds of low-pass filtering.
struct FilteredAttributes {
  Dense matrix;
  int filter_steps = 0;
};

// Binary adjacency with zero diagonal.
SparseSym build_adjacency(const Dataset& dataset);

// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
SparseSym filter_matrix(const SparseSym& adj);

// Applies the filter t times to x.
FilteredAttributes smooth_attributes(const Dense& x, const SparseSym& filt, int t);

}  // namespace hsan

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hsan/tensor.hpp"

namespace hsan {

using Edge = std::pair<int, int>;

// Attributed undirected graph with ground-truth labels.
//
// Edges are canonical: first < second, sorted, unique, no self-loops.
// Every label lies in [0, num_classes) and every class occurs.
struct Dataset {
  std::string name;
  Dense attributes;  // N x D
  std::vector<Edge> edges;
  std::vector<int> labels;  // length N
  int num_classes = 0;

  [[nodiscard]] int num_nodes() const { return static_cast<int>(attributes.rows()); }
  [[nodiscard]] int feature_dim() const { return static_cast<int>(attributes.cols()); }

  bool operator==(const Dataset& other) const;
};

// Throws DataError if any Dataset invariant is violated.
void validate(const Dataset& d);

// Reads features.tsv, edges.tsv and labels.tsv from dir. Self-loops and
// duplicate edges are dropped; remaining edges are canonicalized. Errors are
// DataError with "<file>:<line>: <reason>".
Dataset load_dataset(const std::filesystem::path& dir);

// Writes the three files; reals are emitted with 17 significant digits so
// load_dataset(dir) reproduces d exactly.
void write_dataset(const Dataset& d, const std::filesystem::path& dir);

struct SyntheticSpec {
  int n_per_cluster = 20;
  int num_clusters = 2;
  int feature_dim = 4;
  double intra_edge_prob = 0.5;
  double inter_edge_prob = 0.05;
  double feature_separation = 4.0;
  std::uint64_t seed = 0;
};

// Stochastic block model with Gaussian features around per-cluster means.
// Nodes are laid out cluster by cluster; node i has label i / n_per_cluster.
Dataset generate_synthetic(const SyntheticSpec& spec);

// Parses "n=20,k=4,dim=8,pin=0.5,pout=0.05,sep=4,seed=7". Omitted keys keep
// their defaults. Throws ConfigError on unknown keys or bad values.
SyntheticSpec parse_synthetic_spec(const std::string& text);

}  // namespace hsan

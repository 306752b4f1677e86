#pragma once

#include <vector>

namespace hsan {

// confusion[p][t] counts samples with predicted label p and true label t.
using Confusion = std::vector<std::vector<long>>;

Confusion confusion_matrix(const std::vector<int>& pred, const std::vector<int>& truth);

// Minimum-cost assignment on a rectangular cost matrix (rows <= cols is not
// required). Returns, for each row, its assigned column or -1 when the row is
// left unmatched because there are more rows than columns.
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost);

struct AccuracyResult {
  double acc = 0.0;
  // mapping[p] is the true label assigned to predicted label p, or -1.
  std::vector<int> mapping;
};

AccuracyResult clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Mutual information over the arithmetic mean of the two entropies.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

double ari(const std::vector<int>& pred, const std::vector<int>& truth);

// Macro F1 over true classes after relabeling predictions through mapping.
double macro_f1(const std::vector<int>& pred, const std::vector<int>& truth, const std::vector<int>& mapping);

struct EvalReport {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double f1 = 0.0;
  Confusion confusion;
  std::vector<int> mapping;
};

EvalReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace hsan

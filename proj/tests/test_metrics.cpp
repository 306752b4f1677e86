#include <gtest/gtest.h>

#include <random>

#include "hsan/metrics.hpp"
#include "oracles.hpp"

using namespace hsan;

namespace {

std::vector<int> permuted(const std::vector<int>& a, const std::vector<int>& perm) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = perm[a[i]];
  return out;
}

// Number of label permutations reaching the optimal accuracy.
int optimal_mappings(const std::vector<int>& pred, const std::vector<int>& truth) {
  const int k = std::max(*std::max_element(pred.begin(), pred.end()), *std::max_element(truth.begin(), truth.end())) + 1;
  const double best = oracle::accuracy_by_permutation(pred, truth);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    long hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += perm[pred[i]] == truth[i];
    count += static_cast<double>(hits) / static_cast<double>(pred.size()) == best;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace

TEST(Confusion, Counts) {
  const Confusion c = confusion_matrix({0, 0, 1, 2}, {1, 1, 0, 0});
  ASSERT_EQ(c.size(), 3u);
  ASSERT_EQ(c[0].size(), 2u);
  EXPECT_EQ(c[0][1], 2);
  EXPECT_EQ(c[1][0], 1);
  EXPECT_EQ(c[2][0], 1);
  EXPECT_EQ(c[0][0], 0);
}

TEST(Hungarian, SmallCostMatrices) {
  EXPECT_EQ(hungarian_min_cost({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}}), (std::vector<int>{1, 0, 2}));
  // More rows than columns: one row stays unmatched.
  const auto tall = hungarian_min_cost({{1, 9}, {9, 1}, {0, 0}});
  EXPECT_EQ(std::count(tall.begin(), tall.end(), -1), 1);
  EXPECT_EQ(hungarian_min_cost({{5, 0, 7}}), (std::vector<int>{1}));
}

TEST(Accuracy, Relabeling) {
  EXPECT_EQ(clustering_accuracy({1, 1, 0, 0}, {0, 0, 1, 1}).acc, 1.0);
  const std::vector<int> t{0, 1, 2, 2, 1};
  const AccuracyResult r = clustering_accuracy(t, t);
  EXPECT_EQ(r.acc, 1.0);
  EXPECT_EQ(r.mapping, (std::vector<int>{0, 1, 2}));
}

TEST(Accuracy, MatchesPermutationOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 19;
    const int kp = 1 + trial % 6, kt = 1 + (trial / 6) % 6;
    const auto pred = oracle::random_labels(n, kp, rng);
    const auto truth = oracle::random_labels(n, kt, rng);
    EXPECT_NEAR(clustering_accuracy(pred, truth).acc, oracle::accuracy_by_permutation(pred, truth), 1e-15)
        << "trial " << trial;
  }
}

TEST(Accuracy, AtLeastLargestClassShareOverK) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pred = oracle::random_labels(20, 4, rng);
    const auto truth = oracle::random_labels(20, 4, rng);
    const int k = *std::max_element(truth.begin(), truth.end()) + 1;
    EXPECT_GE(clustering_accuracy(pred, truth).acc, 1.0 / k - 1e-15);
  }
}

TEST(Nmi, Examples) {
  const std::vector<int> t{0, 0, 1, 1, 2};
  EXPECT_NEAR(nmi(t, t), 1.0, 1e-15);
  EXPECT_NEAR(nmi({0, 0, 0, 0}, {0, 0, 1, 1}), 0.0, 1e-15);
  EXPECT_EQ(nmi({0, 0}, {0, 0}), 1.0);
}

TEST(Nmi, MatchesEntropyOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pred = oracle::random_labels(15, 4, rng);
    const auto truth = oracle::random_labels(15, 3, rng);
    EXPECT_NEAR(nmi(pred, truth), oracle::nmi_by_entropy(pred, truth), 1e-12);
  }
}

TEST(Ari, Examples) {
  const std::vector<int> t{0, 0, 1, 1, 2, 2};
  EXPECT_NEAR(ari(t, t), 1.0, 1e-15);
  EXPECT_NEAR(ari({0, 0, 0, 0, 0, 0}, t), 0.0, 1e-15);
}

TEST(Ari, MatchesPairCountingOracle) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 11;
    const auto pred = oracle::random_labels(n, 1 + trial % 4, rng);
    const auto truth = oracle::random_labels(n, 1 + (trial / 4) % 4, rng);
    EXPECT_NEAR(ari(pred, truth), oracle::ari_by_pairs(pred, truth), 1e-12) << "trial " << trial;
  }
}

TEST(MacroF1, Examples) {
  const std::vector<int> t{0, 1, 1, 2};
  EXPECT_NEAR(macro_f1(t, t, {0, 1, 2}), 1.0, 1e-15);
  EXPECT_NEAR(macro_f1({0, 0, 0, 0}, {0, 0, 1, 1}, {0}), 1.0 / 3.0, 1e-15);
}

TEST(MacroF1, MatchesPerClassOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pred = oracle::random_labels(18, 3, rng);
    const auto truth = oracle::random_labels(18, 3, rng);
    const AccuracyResult acc = clustering_accuracy(pred, truth);
    const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
    double sum = 0.0;
    for (int c = 0; c < kt; ++c) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < pred.size(); ++i) {
        const int mapped = acc.mapping[pred[i]];
        tp += mapped == c && truth[i] == c;
        fp += mapped == c && truth[i] != c;
        fn += mapped != c && truth[i] == c;
      }
      sum += tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
    }
    EXPECT_NEAR(macro_f1(pred, truth, acc.mapping), sum / kt, 1e-12);
  }
}

TEST(Evaluate, InvariantUnderPredictedRelabeling) {
  std::mt19937_64 rng(6);
  int f1_checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto pred = oracle::random_labels(16, 4, rng);
    const auto truth = oracle::random_labels(16, 4, rng);
    const int kp = *std::max_element(pred.begin(), pred.end()) + 1;
    std::vector<int> perm(kp);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const EvalReport a = evaluate(pred, truth), b = evaluate(permuted(pred, perm), truth);
    EXPECT_NEAR(a.acc, b.acc, 1e-15);
    EXPECT_NEAR(a.nmi, b.nmi, 1e-12);
    EXPECT_NEAR(a.ari, b.ari, 1e-12);
    // F1 depends on which optimal mapping is chosen; with ties it may differ.
    if (optimal_mappings(pred, truth) == 1) {
      EXPECT_NEAR(a.f1, b.f1, 1e-12);
      ++f1_checked;
    }
  }
  EXPECT_GT(f1_checked, 0);
}

TEST(Evaluate, RejectsLengthMismatch) {
  EXPECT_THROW(evaluate({0, 1}, {0}), std::invalid_argument);
}

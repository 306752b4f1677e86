#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hsan/cluster.hpp"
#include "hsan/dataio.hpp"
#include "hsan/loss.hpp"
#include "hsan/metrics.hpp"
#include "hsan/model.hpp"

namespace hsan {

enum class LossVariant { kHsan, kInfoNce };

// B: infoNCE on attribute embeddings. B+S: attribute-structure similarity,
// unit weights. B+M: modulated weights on attribute similarity. full: both.
enum class Ablation { kBaseline, kStructure, kModulation, kFull };

struct LossFlags {
  bool use_structure_similarity = true;
  bool use_weights = true;

  bool operator==(const LossFlags&) const = default;
};

LossFlags ablation_mode_semantics(Ablation mode);
Ablation parse_ablation(const std::string& name);
std::string to_string(Ablation mode);
LossVariant parse_loss_variant(const std::string& name);
std::string to_string(LossVariant v);

struct Preset {
  std::string name;
  double tau;
  double beta;
  int t;
  double lr;
  int hidden;
};

// Per-benchmark hyperparameters.
std::span<const Preset> presets();
std::optional<Preset> find_preset(const std::string& name);

struct TrainConfig {
  std::string dataset;  // directory or preset name, echoed in the report
  double tau = 0.7;
  double beta = 2.0;
  int t = 2;
  double lr = 1e-3;
  int epochs = 400;
  int hidden = 500;
  std::uint64_t seed = 0;
  int runs = 10;
  LossVariant loss = LossVariant::kHsan;
  Ablation ablation = Ablation::kFull;
  bool detach_weights = false;
  ConfidenceScope confidence_scope = ConfidenceScope::kGlobal;
  int final_restarts = 10;
  int scatter_every = 100;
  int jobs = 1;

  void apply(const Preset& p);
  // Flags actually used: the infoNCE variant always runs the B configuration.
  [[nodiscard]] LossFlags flags() const;
};

// Throws ConfigError naming the offending field.
void validate(const TrainConfig& config);

// Full-batch training problem with the filtered attributes and the dense
// adjacency precomputed.
struct Problem {
  Dense x_filtered;
  Dense adjacency;
  int num_classes = 0;
};

Problem make_problem(const Dataset& dataset, int filter_steps);

struct PseudoLabelState {
  ClusterResult clusters;
  HighConfidenceSet high_confidence;
  PairPseudoLabels pairs;
};

PseudoLabelState pseudo_labels(const EmbeddingBundle& emb, int k, double tau, ConfidenceScope scope,
                               std::uint64_t seed);

struct ObjectiveOptions {
  LossVariant loss = LossVariant::kHsan;
  LossFlags flags;
  double beta = 2.0;
  bool detach_weights = false;
};

struct ObjectiveResult {
  double loss = 0.0;
  ModelGrads grads;
  std::optional<WeightMatrix> weights;  // set when the modulating path ran
  double alpha_used = 1.0;
};

// Loss and parameter gradients for an encoding of the current params. The
// pseudo labels are constants; they are only read when weights are in use.
ObjectiveResult objective(const Problem& problem, const ModelParams& params, const EncodeResult& enc,
                          const PseudoLabelState* pseudo, const ObjectiveOptions& opts);

// Encode, then objective().
ObjectiveResult evaluate_objective(const Problem& problem, const ModelParams& params,
                                   const PseudoLabelState* pseudo, const ObjectiveOptions& opts);

struct WeightScatterRow {
  int i = 0;
  int k = 0;
  double norm_sim = 0.0;
  double weight = 0.0;
  int q = 0;
  bool is_hc = true;
};

struct WeightSnapshot {
  int epoch = 0;
  double beta = 0.0;
  std::vector<WeightScatterRow> rows;
};

// One row per high-confidence pair (i, k) of the cross-view block.
WeightSnapshot emit_weight_scatter(int epoch, const WeightMatrix& weights, const PairPseudoLabels& q,
                                   const HighConfidenceSet& hc);

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double acc = 0.0;
  double alpha = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  EvalReport report;
  std::vector<int> assignments;
  Dense embedding;  // final (z1 + z2) / 2
  std::vector<EpochRecord> curve;
  std::vector<WeightSnapshot> scatters;
  double final_alpha = 0.0;
  double elapsed_seconds = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
};

MetricSummary summarize(const std::vector<double>& values);

struct TrainResult {
  TrainConfig config;
  std::string dataset_name;
  std::vector<RunResult> runs;
  MetricSummary acc, nmi, ari, f1;
  double elapsed_seconds = 0.0;
};

// One training run with the given seed. Labels are only read for evaluation.
RunResult train(const TrainConfig& config, const Dataset& dataset, std::uint64_t seed, bool capture_scatter = false);

// config.runs runs with seeds seed, seed + 1, ...; weight scatters are kept for
// the first run only.
TrainResult run_benchmark(const TrainConfig& config, const Dataset& dataset);

nlohmann::json report_json(const TrainResult& result);

// report.json, curves_run<k>.csv, weights_epoch<e>.csv, embeddings.tsv and
// assignments.tsv (the last three from the first run).
void write_artifacts(const TrainResult& result, const std::filesystem::path& out_dir);

void write_weight_scatter_csv(const WeightSnapshot& snap, const std::filesystem::path& file);

// $HSAN_DATA_DIR if set, ./data otherwise.
std::filesystem::path default_data_root();

}  // namespace hsan

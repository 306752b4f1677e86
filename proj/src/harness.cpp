#include "hsan/harness.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

#include "hsan/errors.hpp"
#include "hsan/graphops.hpp"
#include "hsan/seed.hpp"

namespace hsan {
namespace {

const std::array<Preset, 6> kPresets{{
    {"cora", 0.9, 1.0, 2, 1e-3, 1500},
    {"cite", 0.3, 2.0, 2, 1e-3, 1500},
    {"amap", 0.9, 3.0, 3, 1e-5, 500},
    {"bat", 0.3, 5.0, 6, 1e-3, 1500},
    {"eat", 0.7, 5.0, 6, 1e-4, 1500},
    {"uat", 0.7, 5.0, 6, 1e-4, 500},
}};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw DataError(p.string() + ": cannot open for writing");
  return out;
}

}  // namespace

LossFlags ablation_mode_semantics(Ablation mode) {
  switch (mode) {
    case Ablation::kBaseline: return {false, false};
    case Ablation::kStructure: return {true, false};
    case Ablation::kModulation: return {false, true};
    case Ablation::kFull: return {true, true};
  }
  throw ConfigError("unknown ablation mode");
}

Ablation parse_ablation(const std::string& name) {
  if (name == "B") return Ablation::kBaseline;
  if (name == "B+S") return Ablation::kStructure;
  if (name == "B+M") return Ablation::kModulation;
  if (name == "full") return Ablation::kFull;
  throw ConfigError("unknown ablation mode '" + name + "' (expected B, B+S, B+M or full)");
}

std::string to_string(Ablation mode) {
  switch (mode) {
    case Ablation::kBaseline: return "B";
    case Ablation::kStructure: return "B+S";
    case Ablation::kModulation: return "B+M";
    case Ablation::kFull: return "full";
  }
  return "?";
}

LossVariant parse_loss_variant(const std::string& name) {
  if (name == "hsan") return LossVariant::kHsan;
  if (name == "infonce") return LossVariant::kInfoNce;
  throw ConfigError("unknown loss '" + name + "' (expected hsan or infonce)");
}

std::string to_string(LossVariant v) { return v == LossVariant::kHsan ? "hsan" : "infonce"; }

std::span<const Preset> presets() { return kPresets; }

std::optional<Preset> find_preset(const std::string& name) {
  const std::string key = lower(name);
  for (const auto& p : kPresets) {
    if (p.name == key) return p;
  }
  return std::nullopt;
}

void TrainConfig::apply(const Preset& p) {
  tau = p.tau;
  beta = p.beta;
  t = p.t;
  lr = p.lr;
  hidden = p.hidden;
}

LossFlags TrainConfig::flags() const {
  if (loss == LossVariant::kInfoNce) return {false, false};
  return ablation_mode_semantics(ablation);
}

void validate(const TrainConfig& c) {
  auto bad = [](const std::string& what) { throw ConfigError(what); };
  if (!(c.tau > 0.0 && c.tau <= 1.0)) bad("tau must lie in (0, 1]");
  if (!(c.beta >= 1.0 && c.beta <= 5.0)) bad("beta must lie in [1, 5]");
  if (c.t < 0) bad("t must be nonnegative");
  if (!(c.lr > 0.0) || !std::isfinite(c.lr)) bad("lr must be positive");
  if (c.epochs < 1) bad("epochs must be positive");
  if (c.hidden < 1) bad("hidden must be positive");
  if (c.runs < 1) bad("runs must be positive");
  if (c.final_restarts < 1) bad("final restarts must be positive");
  if (c.scatter_every < 1) bad("scatter interval must be positive");
  if (c.jobs < 1) bad("jobs must be positive");
  if (c.loss == LossVariant::kInfoNce && c.ablation != Ablation::kBaseline) {
    bad("the infonce loss only runs the B ablation");
  }
}

Problem make_problem(const Dataset& dataset, int filter_steps) {
  const SparseSym adj = build_adjacency(dataset);
  const SparseSym filt = filter_matrix(adj);
  Problem p;
  p.x_filtered = smooth_attributes(dataset.attributes, filt, filter_steps).matrix;
  p.adjacency = adj.to_dense();
  p.num_classes = dataset.num_classes;
  return p;
}

PseudoLabelState pseudo_labels(const EmbeddingBundle& emb, int k, double tau, ConfidenceScope scope,
                               std::uint64_t seed) {
  PseudoLabelState s;
  s.clusters = kmeans(clustering_embedding(emb), k, seed, KMeansOptions{300, 1});
  s.high_confidence = select_high_confidence(s.clusters, tau, scope);
  s.pairs = pair_pseudo_labels(s.clusters);
  return s;
}

ObjectiveResult objective(const Problem& problem, const ModelParams& params, const EncodeResult& enc,
                          const PseudoLabelState* pseudo, const ObjectiveOptions& opts) {
  const auto& emb = enc.bundle;
  ObjectiveResult r;
  EmbeddingGrads eg;
  if (opts.loss == LossVariant::kInfoNce) {
    auto nce = infonce_loss(emb.z1, emb.z2);
    r.loss = nce.value;
    r.alpha_used = 1.0;
    eg.z1 = std::move(nce.grad_z1);
    eg.z2 = std::move(nce.grad_z2);
    eg.e1 = Dense::Zero(emb.e1.rows(), emb.e1.cols());
    eg.e2 = Dense::Zero(emb.e2.rows(), emb.e2.cols());
    r.grads = encode_backward(problem.x_filtered, problem.adjacency, params, enc.cache, eg);
    return r;
  }

  r.alpha_used = opts.flags.use_structure_similarity ? params.alpha : 1.0;
  const SimilarityGrid grid = similarity_grid(emb, r.alpha_used);
  WeightMatrix weights;
  if (opts.flags.use_weights) {
    if (pseudo == nullptr) throw std::invalid_argument("objective: weighted loss needs pseudo labels");
    weights = modulating_weights(pseudo->pairs, min_max_normalize(grid), pseudo->high_confidence, opts.beta,
                                 !opts.detach_weights);
  } else {
    weights = unit_weights(emb.num_nodes());
  }
  LossResult lr = hsan_loss(grid, weights);
  r.loss = lr.value;
  SimilarityGrads sg = similarity_backward(emb, r.alpha_used, lr.grad_grid);
  r.grads = encode_backward(problem.x_filtered, problem.adjacency, params, enc.cache, sg.embeddings);
  r.grads.alpha = opts.flags.use_structure_similarity ? sg.alpha : 0.0;
  if (opts.flags.use_weights) r.weights = std::move(weights);
  return r;
}

ObjectiveResult evaluate_objective(const Problem& problem, const ModelParams& params,
                                   const PseudoLabelState* pseudo, const ObjectiveOptions& opts) {
  const EncodeResult enc = encode(problem.x_filtered, problem.adjacency, params);
  return objective(problem, params, enc, pseudo, opts);
}

WeightSnapshot emit_weight_scatter(int epoch, const WeightMatrix& weights, const PairPseudoLabels& q,
                                   const HighConfidenceSet& hc) {
  const Eigen::Index n = q.n();
  WeightSnapshot snap;
  snap.epoch = epoch;
  snap.beta = weights.beta_used;
  snap.rows.reserve(hc.indices.size() * hc.indices.size());
  for (int i : hc.indices) {
    for (int k : hc.indices) {
      WeightScatterRow row;
      row.i = i;
      row.k = k;
      row.norm_sim = weights.normalization.values(i, n + k);
      row.weight = weights.values(i, n + k);
      row.q = q(i, k) ? 1 : 0;
      row.is_hc = true;
      snap.rows.push_back(row);
    }
  }
  return snap;
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

RunResult train(const TrainConfig& config, const Dataset& dataset, std::uint64_t seed, bool capture_scatter) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const Problem problem = make_problem(dataset, config.t);
  const int k = dataset.num_classes;

  ModelParams params = init_params(dataset.feature_dim(), dataset.num_nodes(), config.hidden, seed);
  AdamState adam;
  ObjectiveOptions opts;
  opts.loss = config.loss;
  opts.flags = config.flags();
  opts.beta = config.beta;
  opts.detach_weights = config.detach_weights;
  const bool learn_alpha = opts.loss == LossVariant::kHsan && opts.flags.use_structure_similarity;

  RunResult run;
  run.seed = seed;
  run.curve.reserve(config.epochs);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const EncodeResult enc = encode(problem.x_filtered, problem.adjacency, params);
    const PseudoLabelState pseudo = pseudo_labels(enc.bundle, k, config.tau, config.confidence_scope,
                                                  derive_seed(seed, SeedStream::kKMeansEpoch, epoch));
    ObjectiveResult obj = objective(problem, params, enc, &pseudo, opts);
    if (!std::isfinite(obj.loss)) {
      throw NumericalError("non-finite loss at epoch " + std::to_string(epoch));
    }
    const double acc = clustering_accuracy(pseudo.clusters.assignments, dataset.labels).acc;
    run.curve.push_back({epoch, obj.loss, acc, params.alpha});

    if (capture_scatter && obj.weights && (epoch % config.scatter_every == 0 || epoch == config.epochs)) {
      run.scatters.push_back(emit_weight_scatter(epoch, *obj.weights, pseudo.pairs, pseudo.high_confidence));
    }

    auto grad_views = param_views(std::as_const(obj.grads));
    auto views = param_views(params);
    if (!learn_alpha) {
      views.pop_back();
      grad_views.pop_back();
    }
    try {
      adam_step(views, grad_views, adam, config.lr);
    } catch (const NumericalError& e) {
      throw NumericalError("epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }

  const EncodeResult final_enc = encode(problem.x_filtered, problem.adjacency, params);
  run.embedding = clustering_embedding(final_enc.bundle);
  const ClusterResult final_clusters =
      kmeans(run.embedding, k, derive_seed(seed, SeedStream::kKMeansFinal), KMeansOptions{300, config.final_restarts});
  run.assignments = final_clusters.assignments;
  run.report = evaluate(run.assignments, dataset.labels);
  run.final_alpha = params.alpha;
  run.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

TrainResult run_benchmark(const TrainConfig& config, const Dataset& dataset) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  result.config = config;
  result.dataset_name = dataset.name;
  result.runs.resize(config.runs);

  auto one = [&](int r) {
    try {
      return train(config, dataset, config.seed + static_cast<std::uint64_t>(r), r == 0);
    } catch (const NumericalError& e) {
      throw NumericalError("run " + std::to_string(r) + " (seed " + std::to_string(config.seed + r) + "): " + e.what());
    }
  };
  if (config.jobs <= 1) {
    for (int r = 0; r < config.runs; ++r) result.runs[r] = one(r);
  } else {
    for (int base = 0; base < config.runs; base += config.jobs) {
      std::vector<std::future<RunResult>> batch;
      for (int r = base; r < std::min(config.runs, base + config.jobs); ++r) {
        batch.push_back(std::async(std::launch::async, one, r));
      }
      for (std::size_t i = 0; i < batch.size(); ++i) result.runs[base + i] = batch[i].get();
    }
  }

  std::vector<double> acc, nmi_v, ari_v, f1;
  for (const auto& r : result.runs) {
    acc.push_back(r.report.acc);
    nmi_v.push_back(r.report.nmi);
    ari_v.push_back(r.report.ari);
    f1.push_back(r.report.f1);
  }
  result.acc = summarize(acc);
  result.nmi = summarize(nmi_v);
  result.ari = summarize(ari_v);
  result.f1 = summarize(f1);
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

nlohmann::json report_json(const TrainResult& result) {
  using nlohmann::json;
  const auto& c = result.config;
  json j;
  j["dataset"] = result.dataset_name;
  j["config"] = {
      {"dataset", c.dataset},
      {"tau", c.tau},
      {"beta", c.beta},
      {"t", c.t},
      {"lr", c.lr},
      {"epochs", c.epochs},
      {"hidden", c.hidden},
      {"seed", c.seed},
      {"runs", c.runs},
      {"loss", to_string(c.loss)},
      {"ablation", to_string(c.ablation)},
      {"detach_weights", c.detach_weights},
      {"confidence_scope", c.confidence_scope == ConfidenceScope::kGlobal ? "global" : "per-cluster"},
      {"final_restarts", c.final_restarts},
  };
  json runs = json::array();
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& r = result.runs[i];
    runs.push_back({
        {"run", i},
        {"seed", r.seed},
        {"acc", r.report.acc},
        {"nmi", r.report.nmi},
        {"ari", r.report.ari},
        {"f1", r.report.f1},
        {"final_alpha", r.final_alpha},
        {"first_loss", r.curve.empty() ? 0.0 : r.curve.front().loss},
        {"last_loss", r.curve.empty() ? 0.0 : r.curve.back().loss},
        {"elapsed_seconds", r.elapsed_seconds},
    });
  }
  j["runs"] = runs;
  auto summary = [](const MetricSummary& s) { return json{{"mean", s.mean}, {"std", s.std}}; };
  j["aggregate"] = {
      {"acc", summary(result.acc)},
      {"nmi", summary(result.nmi)},
      {"ari", summary(result.ari)},
      {"f1", summary(result.f1)},
  };
  j["elapsed_seconds"] = result.elapsed_seconds;
  return j;
}

void write_weight_scatter_csv(const WeightSnapshot& snap, const std::filesystem::path& file) {
  auto out = open_out(file);
  out << "i,k,norm_sim,weight,q,is_hc\n";
  for (const auto& r : snap.rows) {
    out << r.i << ',' << r.k << ',' << format_real(r.norm_sim) << ',' << format_real(r.weight) << ',' << r.q << ','
        << (r.is_hc ? 1 : 0) << '\n';
  }
}

void write_artifacts(const TrainResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "report.json");
    out << report_json(result).dump(2) << '\n';
  }
  for (std::size_t k = 0; k < result.runs.size(); ++k) {
    auto out = open_out(out_dir / ("curves_run" + std::to_string(k) + ".csv"));
    out << "epoch,loss,acc\n";
    for (const auto& e : result.runs[k].curve) {
      out << e.epoch << ',' << format_real(e.loss) << ',' << format_real(e.acc) << '\n';
    }
  }
  if (result.runs.empty()) return;
  const RunResult& first = result.runs.front();
  for (const auto& snap : first.scatters) {
    write_weight_scatter_csv(snap, out_dir / ("weights_epoch" + std::to_string(snap.epoch) + ".csv"));
  }
  {
    auto out = open_out(out_dir / "embeddings.tsv");
    for (Eigen::Index i = 0; i < first.embedding.rows(); ++i) {
      for (Eigen::Index j = 0; j < first.embedding.cols(); ++j) {
        if (j) out << '\t';
        out << format_real(first.embedding(i, j));
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(out_dir / "assignments.tsv");
    for (int a : first.assignments) out << a << '\n';
  }
}

std::filesystem::path default_data_root() {
  if (const char* env = std::getenv("HSAN_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return "data";
}

}  // namespace hsan

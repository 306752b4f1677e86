// hsan: train the hard-sample-aware graph clustering model and emit artifacts.
//
//   hsan train --dataset bat --out runs/bat
//   hsan train --synthetic n=40,k=3,dim=16,pin=0.3,pout=0.02,sep=3 --epochs 100 --out runs/syn
//   hsan generate --synthetic n=20,k=2,dim=4 --out data/toy
//   hsan presets

#include <cstdio>
#ifdef __GLIBC__
#include <malloc.h>
#endif
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hsan/dataio.hpp"
#include "hsan/errors.hpp"
#include "hsan/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct TrainArgs {
  std::string dataset;
  std::string synthetic;
  std::string preset;
  std::string data_root;
  double tau = 0, beta = 0, lr = 0;
  int t = 0, epochs = 0, hidden = 0, runs = 0, jobs = 1, restarts = 10;
  std::uint64_t seed = 0;
  std::string loss = "hsan";
  std::string ablation = "full";
  std::string confidence = "global";
  bool detach = false;
  std::string out;
};

hsan::Dataset load_input(const TrainArgs& a, hsan::TrainConfig& config) {
  using namespace hsan;
  if (!a.synthetic.empty()) {
    SyntheticSpec spec = parse_synthetic_spec(a.synthetic);
    if (a.synthetic.find("seed=") == std::string::npos) spec.seed = config.seed;
    config.dataset = "synthetic:" + a.synthetic;
    return generate_synthetic(spec);
  }
  if (a.dataset.empty()) throw ConfigError("one of --dataset or --synthetic is required");
  config.dataset = a.dataset;
  if (auto preset = find_preset(a.dataset)) {
    const std::filesystem::path root = a.data_root.empty() ? default_data_root() : std::filesystem::path(a.data_root);
    Dataset d = load_dataset(root / preset->name);
    d.name = preset->name;
    return d;
  }
  if (!std::filesystem::is_directory(a.dataset)) {
    throw DataError(a.dataset + ": neither a preset name nor a dataset directory");
  }
  return load_dataset(a.dataset);
}

int run_train(const TrainArgs& a, const CLI::App& cmd) {
  using namespace hsan;
  TrainConfig config;
  config.seed = a.seed;

  // Preset values first, explicit flags override.
  std::string preset_name = a.preset;
  if (preset_name.empty() && a.synthetic.empty() && find_preset(a.dataset)) preset_name = a.dataset;
  if (!preset_name.empty()) {
    auto p = find_preset(preset_name);
    if (!p) throw ConfigError("unknown preset '" + preset_name + "'");
    config.apply(*p);
  }
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--tau")) config.tau = a.tau;
  if (given("--beta")) config.beta = a.beta;
  if (given("--t")) config.t = a.t;
  if (given("--lr")) config.lr = a.lr;
  if (given("--epochs")) config.epochs = a.epochs;
  if (given("--hidden")) config.hidden = a.hidden;
  if (given("--runs")) config.runs = a.runs;
  config.jobs = a.jobs;
  config.final_restarts = a.restarts;
  config.loss = parse_loss_variant(a.loss);
  if (config.loss == LossVariant::kInfoNce && !given("--ablation")) {
    config.ablation = Ablation::kBaseline;
  } else {
    config.ablation = parse_ablation(a.ablation);
  }
  config.detach_weights = a.detach;
  if (a.confidence == "global") {
    config.confidence_scope = ConfidenceScope::kGlobal;
  } else if (a.confidence == "per-cluster") {
    config.confidence_scope = ConfidenceScope::kPerCluster;
  } else {
    throw ConfigError("unknown --confidence-scope '" + a.confidence + "'");
  }
  validate(config);

  const Dataset dataset = load_input(a, config);
  std::fprintf(stderr, "dataset %s: N=%d D=%d edges=%zu C=%d\n", dataset.name.c_str(), dataset.num_nodes(),
               dataset.feature_dim(), dataset.edges.size(), dataset.num_classes);
  std::fprintf(stderr, "tau=%g beta=%g t=%d lr=%g hidden=%d epochs=%d runs=%d loss=%s ablation=%s\n", config.tau,
               config.beta, config.t, config.lr, config.hidden, config.epochs, config.runs,
               to_string(config.loss).c_str(), to_string(config.ablation).c_str());

  const TrainResult result = run_benchmark(config, dataset);
  write_artifacts(result, a.out);
  for (std::size_t r = 0; r < result.runs.size(); ++r) {
    const auto& rep = result.runs[r].report;
    std::printf("run %zu seed %llu: ACC %.2f NMI %.2f ARI %.2f F1 %.2f alpha %.4f (%.1fs)\n", r,
                static_cast<unsigned long long>(result.runs[r].seed), 100 * rep.acc, 100 * rep.nmi, 100 * rep.ari,
                100 * rep.f1, result.runs[r].final_alpha, result.runs[r].elapsed_seconds);
  }
  std::printf("%s: ACC %.2f±%.2f NMI %.2f±%.2f ARI %.2f±%.2f F1 %.2f±%.2f over %d runs in %.1fs\n",
              result.dataset_name.c_str(), 100 * result.acc.mean, 100 * result.acc.std, 100 * result.nmi.mean,
              100 * result.nmi.std, 100 * result.ari.mean, 100 * result.ari.std, 100 * result.f1.mean,
              100 * result.f1.std, config.runs, result.elapsed_seconds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
  // Per-epoch N x N temporaries would otherwise be mmap'd and unmapped each time.
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
#endif
  CLI::App app{"Hard-sample-aware contrastive graph clustering"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train and evaluate over several seeds");
  train->add_option("--dataset", ta.dataset, "Dataset directory or preset name (cora, cite, amap, bat, eat, uat)");
  train->add_option("--synthetic", ta.synthetic, "Synthetic graph spec, e.g. n=20,k=4,dim=8,pin=0.5,pout=0.05,sep=4");
  train->add_option("--preset", ta.preset, "Apply a preset's hyperparameters to a custom dataset");
  train->add_option("--data-root", ta.data_root, "Directory holding preset dataset folders (default $HSAN_DATA_DIR or ./data)");
  train->add_option("--tau", ta.tau, "Confidence fraction in (0, 1]");
  train->add_option("--beta", ta.beta, "Focusing factor in [1, 5]");
  train->add_option("--t", ta.t, "Laplacian filtering times");
  train->add_option("--lr", ta.lr, "Adam learning rate");
  train->add_option("--epochs", ta.epochs, "Training epochs (default 400)");
  train->add_option("--hidden", ta.hidden, "Embedding width");
  train->add_option("--seed", ta.seed, "Root seed; run k uses seed + k");
  train->add_option("--runs", ta.runs, "Number of seeds (default 10)");
  train->add_option("--jobs", ta.jobs, "Runs trained concurrently")->check(CLI::PositiveNumber);
  train->add_option("--final-restarts", ta.restarts, "k-means++ restarts for the final clustering");
  train->add_option("--loss", ta.loss, "hsan or infonce")->check(CLI::IsMember({"hsan", "infonce"}));
  train->add_option("--ablation", ta.ablation, "B, B+S, B+M or full")->check(CLI::IsMember({"B", "B+S", "B+M", "full"}));
  train->add_option("--confidence-scope", ta.confidence, "global or per-cluster high-confidence selection");
  train->add_flag("--detach-weights", ta.detach, "Treat the modulating weights as constants in the backward pass");
  train->add_option("--out", ta.out, "Output directory")->required();

  std::string gen_text, gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset directory");
  generate->add_option("--synthetic", gen_text, "Synthetic graph spec")->required();
  generate->add_option("--out", gen_out, "Output directory")->required();

  app.add_subcommand("presets", "List built-in benchmark presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) return run_train(ta, *train);
    if (*generate) {
      const auto d = hsan::generate_synthetic(hsan::parse_synthetic_spec(gen_text));
      hsan::write_dataset(d, gen_out);
      std::printf("wrote %s: N=%d D=%d edges=%zu C=%d\n", gen_out.c_str(), d.num_nodes(), d.feature_dim(),
                  d.edges.size(), d.num_classes);
      return 0;
    }
    std::printf("%-6s %5s %5s %3s %8s %7s\n", "name", "tau", "beta", "t", "lr", "hidden");
    for (const auto& p : hsan::presets()) {
      std::printf("%-6s %5.2f %5.1f %3d %8.0e %7d\n", p.name.c_str(), p.tau, p.beta, p.t, p.lr, p.hidden);
    }
    return 0;
  } catch (const hsan::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const hsan::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const hsan::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }
}

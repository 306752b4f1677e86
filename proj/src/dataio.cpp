#include "hsan/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

#include "hsan/errors.hpp"
#include "hsan/seed.hpp"

namespace hsan {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != '\t' && line[j] != ' ' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail(const std::string& file, std::size_t line, const std::string& why) {
  std::ostringstream os;
  os << file << ":" << line << ": " << why;
  throw DataError(os.str());
}

double parse_real(std::string_view tok, const std::string& file, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    fail(file, line, "non-numeric token '" + std::string(tok) + "'");
  }
  return v;
}

long long parse_int(std::string_view tok, const std::string& file, std::size_t line) {
  long long v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(file, line, "non-integer token '" + std::string(tok) + "'");
  return v;
}

std::ifstream open_or_fail(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError(p.string() + ": missing or unreadable file");
  return in;
}

void canonicalize_edges(std::vector<Edge>& edges) {
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

bool Dataset::operator==(const Dataset& other) const {
  return name == other.name && num_classes == other.num_classes && labels == other.labels &&
         edges == other.edges && attributes.rows() == other.attributes.rows() &&
         attributes.cols() == other.attributes.cols() && attributes == other.attributes;
}

void validate(const Dataset& d) {
  const int n = d.num_nodes();
  if (d.attributes.cols() < 1) throw DataError(d.name + ": feature dimension must be at least 1");
  if (static_cast<int>(d.labels.size()) != n) throw DataError(d.name + ": label count differs from node count");
  if (d.num_classes < 2) throw DataError(d.name + ": at least two classes are required");
  if (n < d.num_classes) throw DataError(d.name + ": fewer nodes than classes");
  if (!d.attributes.allFinite()) throw DataError(d.name + ": non-finite attribute value");
  std::vector<int> seen(d.num_classes, 0);
  for (int l : d.labels) {
    if (l < 0 || l >= d.num_classes) throw DataError(d.name + ": label out of range");
    seen[l] = 1;
  }
  for (int c = 0; c < d.num_classes; ++c) {
    if (!seen[c]) throw DataError(d.name + ": class " + std::to_string(c) + " has no members");
  }
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    const auto [a, b] = d.edges[i];
    if (a < 0 || b >= n || a >= b) throw DataError(d.name + ": edge not canonical or out of range");
    if (i > 0 && !(d.edges[i - 1] < d.edges[i])) throw DataError(d.name + ": edges not sorted and unique");
  }
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset d;
  d.name = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();

  const auto feat_path = dir / "features.tsv";
  const auto edge_path = dir / "edges.tsv";
  const auto label_path = dir / "labels.tsv";
  const std::string feat_name = feat_path.string();
  const std::string edge_name = edge_path.string();
  const std::string label_name = label_path.string();

  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t rows = 0;
  {
    auto in = open_or_fail(feat_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto fields = split_fields(line);
      if (fields.empty()) continue;
      if (rows == 0) dim = fields.size();
      if (fields.size() != dim) {
        fail(feat_name, lineno, "expected " + std::to_string(dim) + " columns, found " +
                                    std::to_string(fields.size()));
      }
      for (auto tok : fields) values.push_back(parse_real(tok, feat_name, lineno));
      ++rows;
    }
  }
  if (rows == 0) throw DataError(feat_name + ": no feature rows");
  d.attributes.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), d.attributes.data());
  const auto n = static_cast<long long>(rows);

  {
    auto in = open_or_fail(label_path);
    std::string line;
    std::size_t lineno = 0;
    int max_label = -1;
    while (std::getline(in, line)) {
      ++lineno;
      const auto fields = split_fields(line);
      if (fields.empty()) continue;
      if (fields.size() != 1) fail(label_name, lineno, "expected one label per line");
      const long long v = parse_int(fields[0], label_name, lineno);
      if (v < 0 || v >= n) fail(label_name, lineno, "label " + std::to_string(v) + " out of range");
      if (static_cast<long long>(d.labels.size()) >= n) {
        fail(label_name, lineno, "more labels than feature rows (" + std::to_string(n) + ")");
      }
      d.labels.push_back(static_cast<int>(v));
      max_label = std::max(max_label, static_cast<int>(v));
    }
    if (static_cast<long long>(d.labels.size()) != n) {
      fail(label_name, lineno, "row-count mismatch: " + std::to_string(d.labels.size()) + " labels for " +
                                   std::to_string(n) + " feature rows");
    }
    d.num_classes = max_label + 1;
  }

  {
    auto in = open_or_fail(edge_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto fields = split_fields(line);
      if (fields.empty()) continue;
      if (fields.size() != 2) fail(edge_name, lineno, "expected two node ids");
      const long long a = parse_int(fields[0], edge_name, lineno);
      const long long b = parse_int(fields[1], edge_name, lineno);
      if (a < 0 || a >= n || b < 0 || b >= n) {
        fail(edge_name, lineno, "edge id out of range [0, " + std::to_string(n) + ")");
      }
      d.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  canonicalize_edges(d.edges);
  validate(d);
  return d;
}

void write_dataset(const Dataset& d, const std::filesystem::path& dir) {
  validate(d);
  std::filesystem::create_directories(dir);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw DataError(p.string() + ": cannot open for writing");
    return out;
  };
  {
    auto out = open(dir / "features.tsv");
    char buf[40];
    for (Eigen::Index i = 0; i < d.attributes.rows(); ++i) {
      for (Eigen::Index j = 0; j < d.attributes.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", d.attributes(i, j));
        if (j) out << '\t';
        out << buf;
      }
      out << '\n';
    }
  }
  {
    auto out = open(dir / "edges.tsv");
    for (const auto& [a, b] : d.edges) out << a << '\t' << b << '\n';
  }
  {
    auto out = open(dir / "labels.tsv");
    for (int l : d.labels) out << l << '\n';
  }
}

Dataset generate_synthetic(const SyntheticSpec& s) {
  if (s.n_per_cluster < 1 || s.num_clusters < 2 || s.feature_dim < 1) {
    throw std::invalid_argument("generate_synthetic: need n_per_cluster >= 1, num_clusters >= 2, feature_dim >= 1");
  }
  if (!(s.intra_edge_prob >= 0.0 && s.intra_edge_prob <= 1.0 && s.inter_edge_prob >= 0.0 &&
        s.inter_edge_prob <= 1.0 && s.intra_edge_prob >= s.inter_edge_prob)) {
    throw std::invalid_argument("generate_synthetic: need 0 <= inter_edge_prob <= intra_edge_prob <= 1");
  }
  if (!(s.feature_separation >= 0.0)) throw std::invalid_argument("generate_synthetic: negative separation");

  std::mt19937_64 rng(derive_seed(s.seed, SeedStream::kSynthetic));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int n = s.n_per_cluster * s.num_clusters;
  const int dim = s.feature_dim;

  // One-hot means when there are enough axes, random unit directions otherwise.
  Dense means = Dense::Zero(s.num_clusters, dim);
  for (int c = 0; c < s.num_clusters; ++c) {
    if (s.num_clusters <= dim) {
      means(c, c) = s.feature_separation;
    } else {
      for (int j = 0; j < dim; ++j) means(c, j) = normal(rng);
      const double norm = means.row(c).norm();
      if (norm > 0.0) means.row(c) *= s.feature_separation / norm;
    }
  }

  Dataset d;
  d.name = "synthetic";
  d.num_classes = s.num_clusters;
  d.labels.resize(n);
  d.attributes.resize(n, dim);
  for (int i = 0; i < n; ++i) {
    const int c = i / s.n_per_cluster;
    d.labels[i] = c;
    for (int j = 0; j < dim; ++j) d.attributes(i, j) = means(c, j) + normal(rng);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = d.labels[i] == d.labels[j] ? s.intra_edge_prob : s.inter_edge_prob;
      // Always draw so the stream layout does not depend on the probabilities.
      const double u = unit(rng);
      if (u < p) d.edges.emplace_back(i, j);
    }
  }
  validate(d);
  return d;
}

SyntheticSpec parse_synthetic_spec(const std::string& text) {
  SyntheticSpec s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("synthetic spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      auto as_int = [&] {
        const long long v = std::stoll(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        return v;
      };
      auto as_real = [&] {
        const double v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        return v;
      };
      if (key == "n") s.n_per_cluster = static_cast<int>(as_int());
      else if (key == "k") s.num_clusters = static_cast<int>(as_int());
      else if (key == "dim") s.feature_dim = static_cast<int>(as_int());
      else if (key == "pin") s.intra_edge_prob = as_real();
      else if (key == "pout") s.inter_edge_prob = as_real();
      else if (key == "sep") s.feature_separation = as_real();
      else if (key == "seed") s.seed = static_cast<std::uint64_t>(as_int());
      else throw ConfigError("synthetic spec: unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("synthetic spec: bad value for '" + key + "': '" + val + "'");
    }
  }
  return s;
}

}  // namespace hsan

#include "betagos/core.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace betagos {

void PairingLabels::validate() const {
  for (int i = 0; i < size(); ++i)
    if (c[i] < 0 || c[i] > i)
      throw std::domain_error("pairing label out of range at index " + std::to_string(i));
}

int Partition::size() const {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  return n;
}

std::vector<int> Partition::assignments() const {
  std::vector<int> out(static_cast<std::size_t>(size()), -1);
  for (int k = 0; k < block_count(); ++k)
    for (int i : blocks[static_cast<std::size_t>(k)]) out[static_cast<std::size_t>(i)] = k;
  return out;
}

Partition Partition::from_assignments(std::span<const int> block_of) {
  // Canonical order: blocks sorted by smallest member = order of first appearance
  // after relabeling.
  std::vector<int> relabel(block_of.size(), -1);
  int next = 0;
  Partition out;
  for (std::size_t i = 0; i < block_of.size(); ++i) {
    int b = block_of[i];
    if (b < 0) throw std::domain_error("negative block id");
    if (relabel[static_cast<std::size_t>(b)] < 0) {
      relabel[static_cast<std::size_t>(b)] = next++;
      out.blocks.emplace_back();
    }
    out.blocks[static_cast<std::size_t>(relabel[static_cast<std::size_t>(b)])].push_back(
        static_cast<int>(i));
  }
  return out;
}

LatentWeights sample_weights(const BetaSchedule& s, int n, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("sample_weights: n must be >= 0");
  LatentWeights w(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) w[static_cast<std::size_t>(i - 1)] = s.sample_weight(i, rng);
  return w;
}

PredictiveWeights predictive_weights(const LatentWeights& w) {
  const std::size_t n = w.size();
  for (double v : w)
    if (!(v > 0.0) || !(v < 1.0))
      throw std::domain_error("latent weight outside (0,1)");

  PredictiveWeights pw;
  pw.p.assign(n, 0.0);
  // Suffix products in linear space keep the simplex identity tight: the only
  // loss is the (already negligible) mass of entries that underflow.
  double suffix = 1.0;
  double log_r = 0.0, comp = 0.0;  // Kahan-compensated log r
  for (std::size_t j = n; j-- > 0;) {
    pw.p[j] = (1.0 - w[j]) * suffix;
    suffix *= w[j];
    double y = std::log(w[j]) - comp;
    double t = log_r + y;
    comp = (t - log_r) - y;
    log_r = t;
  }
  pw.log_r = log_r;
  pw.r = std::exp(log_r);

  double total = pw.r;
  for (double v : pw.p) total += v;
  if (std::abs(total - 1.0) > 1e-12 && total > 0.0) {
    double scale = (1.0 - pw.r) / (total - pw.r);
    for (double& v : pw.p) v *= scale;
  }
  return pw;
}

int sample_pairing(const PredictiveWeights& pw, RngStream& rng) {
  const std::size_t n = pw.p.size();
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += pw.p[j];
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(n);  // new block; also absorbs rounding leftovers
}

int sample_pairing_backward(const LatentWeights& w, RngStream& rng) {
  // Pair with the last observation w.p. 1-W_n, with the one before w.p.
  // W_n(1-W_{n-1}), ...; surviving every step means a new block (prob r_n).
  for (std::size_t j = w.size(); j-- > 0;) {
    if (rng.uniform() >= w[j]) return static_cast<int>(j);
  }
  return static_cast<int>(w.size());
}

Partition partition_of(const PairingLabels& labels) {
  labels.validate();
  const int n = labels.size();
  std::vector<int> root(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int ci = labels.c[static_cast<std::size_t>(i)];
    root[static_cast<std::size_t>(i)] = (ci == i) ? i : root[static_cast<std::size_t>(ci)];
  }
  return Partition::from_assignments(root);
}

SequenceSample simulate_sequence(const BetaSchedule& s, double mu0, double sigma0,
                                 int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_sequence: n must be >= 1");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("simulate_sequence: sigma0 must be > 0");

  SequenceSample out;
  out.seed = rng.seed();
  out.tags.reserve(static_cast<std::size_t>(n));
  out.labels.c.reserve(static_cast<std::size_t>(n));
  out.weights.reserve(static_cast<std::size_t>(n));

  out.labels.c.push_back(0);
  out.tags.push_back(rng.normal(mu0, sigma0));
  out.weights.push_back(s.sample_weight(1, rng));
  for (int i = 1; i < n; ++i) {
    int c = sample_pairing_backward(out.weights, rng);
    out.labels.c.push_back(c);
    if (c == i)
      out.tags.push_back(rng.normal(mu0, sigma0));
    else
      out.tags.push_back(out.tags[static_cast<std::size_t>(c)]);
    out.weights.push_back(s.sample_weight(i + 1, rng));
  }
  out.partition = partition_of(out.labels);
  return out;
}

int simulate_block_count(const BetaSchedule& s, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_block_count: n must be >= 1");
  int k = 1;
  double log_r = 0.0;
  for (int i = 1; i < n; ++i) {
    log_r += std::log(s.sample_weight(i, rng));
    if (std::log(rng.uniform()) < log_r) ++k;  // opens block i+1 w.p. r_i
  }
  return k;
}

std::string SequenceSample::to_json() const {
  nlohmann::json j;
  j["tags"] = tags;
  std::vector<int> one_based(labels.c.size());
  for (std::size_t i = 0; i < labels.c.size(); ++i) one_based[i] = labels.c[i] + 1;
  j["labels"] = one_based;
  j["weights"] = weights;
  j["seed"] = seed;
  return j.dump();
}

SequenceSample SequenceSample::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SequenceSample out;
  out.tags = j.at("tags").get<std::vector<double>>();
  auto one_based = j.at("labels").get<std::vector<int>>();
  out.labels.c.resize(one_based.size());
  for (std::size_t i = 0; i < one_based.size(); ++i) out.labels.c[i] = one_based[i] - 1;
  out.weights = j.at("weights").get<std::vector<double>>();
  out.seed = j.at("seed").get<std::uint64_t>();
  out.labels.validate();
  out.partition = partition_of(out.labels);
  return out;
}

void SequenceSample::write_csv(std::ostream& os) const {
  os << "index,tag,label\n";
  os.precision(17);
  for (std::size_t i = 0; i < tags.size(); ++i)
    os << (i + 1) << "," << tags[i] << "," << (labels.c[i] + 1) << "\n";
}

}  // namespace betagos

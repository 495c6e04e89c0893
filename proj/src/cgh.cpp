#include "betagos/cgh.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "betagos/csv.hpp"

namespace betagos {

std::vector<double> CloneSeries::ratios() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.log2_ratio);
  return out;
}

void CloneSeries::validate() const {
  if (records.empty()) throw std::invalid_argument("CloneSeries: empty");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].chromosome != records[i - 1].chromosome) continue;
    if (records[i].kb_start < records[i - 1].kb_start)
      throw std::invalid_argument("CloneSeries: positions decrease at clone " +
                                  records[i].clone_id);
  }
  for (const auto& r : records)
    if (!std::isfinite(r.log2_ratio))
      throw std::invalid_argument("CloneSeries: non-finite ratio at clone " + r.clone_id);
}

CloneSeries CloneSeries::read_csv(std::istream& is) {
  CloneSeries out;
  CsvReader reader(is);
  std::vector<std::string> f;
  bool first = true;
  while (reader.next(f)) {
    if (f.size() != 5) reader.fail_columns(5, f.size());
    if (first) {
      first = false;
      if (f[0] == "clone_id") continue;  // header
    }
    CloneRecord rec;
    rec.clone_id = f[0];
    rec.chromosome = f[1];
    rec.kb_start = reader.as_double(f[2], "kb_start");
    rec.kb_end = reader.as_double(f[3], "kb_end");
    rec.log2_ratio = reader.as_double(f[4], "log2_ratio");
    out.records.push_back(std::move(rec));
  }
  out.validate();
  return out;
}

void CallConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("CallConfig: epsilon must be positive");
  if (!(call_freq > 0.0) || call_freq > 1.0)
    throw std::invalid_argument("CallConfig: call_freq must be in (0,1]");
  if (!(fdr_level > 0.0) || !(fdr_level < 1.0))
    throw std::invalid_argument("CallConfig: fdr_level must be in (0,1)");
  if (epsilon < 0.05 || epsilon > 0.15)
    std::cerr << "warning: epsilon " << epsilon
              << " outside the sensitivity band [0.05, 0.15]\n";
}

const char* to_string(CloneStatus s) {
  switch (s) {
    case CloneStatus::kLoss: return "loss";
    case CloneStatus::kNeutral: return "neutral";
    case CloneStatus::kGain: return "gain";
    case CloneStatus::kHighAmp: return "high_amp";
  }
  return "?";
}

std::vector<CloneStatus> classify_iteration(std::span<const double> block_means,
                                            double epsilon, double amp_sd_mult) {
  if (block_means.empty()) throw std::invalid_argument("classify_iteration: no blocks");
  std::size_t ref = 0;
  for (std::size_t j = 1; j < block_means.size(); ++j)
    if (std::abs(block_means[j]) < std::abs(block_means[ref])) ref = j;
  const double base = block_means[ref];
  std::vector<CloneStatus> out(block_means.size(), CloneStatus::kNeutral);
  std::vector<double> gains;
  for (std::size_t j = 0; j < block_means.size(); ++j) {
    double d = block_means[j] - base;
    if (std::abs(d) > epsilon) {
      out[j] = d > 0 ? CloneStatus::kGain : CloneStatus::kLoss;
      if (out[j] == CloneStatus::kGain) gains.push_back(block_means[j]);
    }
  }
  if (gains.size() >= 2) {
    double mean = std::accumulate(gains.begin(), gains.end(), 0.0) / gains.size();
    double ss = 0.0;
    for (double g : gains) ss += (g - mean) * (g - mean);
    double sd = std::sqrt(ss / (gains.size() - 1));
    double cutoff = mean + amp_sd_mult * sd;
    for (std::size_t j = 0; j < block_means.size(); ++j)
      if (out[j] == CloneStatus::kGain && block_means[j] > cutoff)
        out[j] = CloneStatus::kHighAmp;
  }
  return out;
}

CallResult call_clones(const Trace& trace, const CloneSeries& series,
                       const CallConfig& cfg) {
  cfg.validate();
  if (trace.entries.empty()) throw std::invalid_argument("call_clones: empty trace");
  const int m = series.size();
  if (trace.m != m) throw std::invalid_argument("call_clones: trace/series length mismatch");
  CallResult out;
  out.clones.assign(static_cast<std::size_t>(m), CloneCall{});
  const double inv = 1.0 / trace.entries.size();
  for (const auto& e : trace.entries) {
    auto status = classify_iteration(e.means, cfg.epsilon, cfg.amp_sd_mult);
    for (int i = 0; i < m; ++i) {
      CloneStatus s = status[static_cast<std::size_t>(e.assignments[static_cast<std::size_t>(i)])];
      auto& call = out.clones[static_cast<std::size_t>(i)];
      switch (s) {
        case CloneStatus::kGain: call.freq_gain += inv; break;
        case CloneStatus::kHighAmp: call.freq_gain += inv; call.freq_high += inv; break;
        case CloneStatus::kLoss: call.freq_loss += inv; break;
        case CloneStatus::kNeutral: break;
      }
    }
  }
  for (auto& call : out.clones) {
    if (call.freq_high > cfg.call_freq) {
      call.status = CloneStatus::kHighAmp;
      call.call_frequency = call.freq_high;
    } else if (call.freq_gain > cfg.call_freq) {
      call.status = CloneStatus::kGain;
      call.call_frequency = call.freq_gain;
    } else if (call.freq_loss > cfg.call_freq) {
      call.status = CloneStatus::kLoss;
      call.call_frequency = call.freq_loss;
    } else {
      call.status = CloneStatus::kNeutral;
      call.call_frequency = 1.0 - call.freq_gain - call.freq_loss;
    }
  }
  return out;
}

void region_fdr(const Trace& trace, const CloneSeries& series, CallResult& calls,
                const CallConfig& cfg) {
  const int m = series.size();
  if (static_cast<int>(calls.clones.size()) != m)
    throw std::invalid_argument("region_fdr: calls/series length mismatch");
  calls.regions.clear();
  // Maximal same-status non-neutral runs, broken at chromosome boundaries.
  int i = 0;
  while (i < m) {
    CloneStatus s = calls.clones[static_cast<std::size_t>(i)].status;
    if (s == CloneStatus::kNeutral) { ++i; continue; }
    int j = i;
    while (j + 1 < m &&
           calls.clones[static_cast<std::size_t>(j + 1)].status == s &&
           series.records[static_cast<std::size_t>(j + 1)].chromosome ==
               series.records[static_cast<std::size_t>(i)].chromosome)
      ++j;
    Region reg;
    reg.first = i;
    reg.last = j;
    reg.status = s;
    reg.p_null = 0.0;
    calls.regions.push_back(reg);
    i = j + 1;
  }
  if (calls.regions.empty()) return;

  // Posterior null probability per region.
  const double inv = 1.0 / trace.entries.size();
  for (const auto& e : trace.entries) {
    auto status = classify_iteration(e.means, cfg.epsilon, cfg.amp_sd_mult);
    for (auto& reg : calls.regions) {
      if (cfg.per_clone_null) {
        double frac = 0.0;
        for (int c = reg.first; c <= reg.last; ++c)
          if (status[static_cast<std::size_t>(
                  e.assignments[static_cast<std::size_t>(c)])] == CloneStatus::kNeutral)
            frac += 1.0;
        reg.p_null += inv * frac / (reg.last - reg.first + 1);
      } else {
        bool all_neutral = true;
        for (int c = reg.first; c <= reg.last && all_neutral; ++c)
          all_neutral = status[static_cast<std::size_t>(
                            e.assignments[static_cast<std::size_t>(c)])] ==
                        CloneStatus::kNeutral;
        if (all_neutral) reg.p_null += inv;
      }
    }
  }
  // q-values: running mean over ascending p_null.
  std::vector<std::size_t> order(calls.regions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return calls.regions[a].p_null < calls.regions[b].p_null;
  });
  double acc = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    acc += calls.regions[order[k]].p_null;
    calls.regions[order[k]].q = acc / (k + 1);
    calls.regions[order[k]].significant = calls.regions[order[k]].q <= cfg.fdr_level;
  }
}

ModelConfig cgh_default_model() {
  ModelConfig cfg;
  cfg.schedule = BetaSchedule::theta_linear(1.0, 1.0);
  cfg.mu0 = 0.0;
  cfg.sigma0 = 10.0;
  cfg.a0 = 2.01;
  cfg.b0 = 0.0101;  // tau^2 prior mean 0.01 = 0.1^2
  return cfg;
}

CallResult run_cgh_series(const CloneSeries& series, const CallConfig& cfg,
                          const ModelConfig& model, int iters, int burnin, int thin,
                          std::uint64_t seed) {
  series.validate();
  auto y = series.ratios();
  Trace trace = run_chain(y, model, iters, burnin, thin, seed);
  CallResult calls = call_clones(trace, series, cfg);
  region_fdr(trace, series, calls, cfg);
  return calls;
}

std::vector<CloneFrequency> aberration_frequency(std::span<const CallResult> results) {
  if (results.empty()) throw std::invalid_argument("aberration_frequency: no samples");
  const std::size_t m = results.front().clones.size();
  for (const auto& r : results)
    if (r.clones.size() != m)
      throw std::invalid_argument("aberration_frequency: clone sets differ across samples");
  std::vector<CloneFrequency> out(m);
  const double inv = 1.0 / results.size();
  for (const auto& r : results)
    for (std::size_t i = 0; i < m; ++i) {
      switch (r.clones[i].status) {
        case CloneStatus::kGain: out[i].gain += inv; break;
        case CloneStatus::kHighAmp: out[i].gain += inv; out[i].high_amp += inv; break;
        case CloneStatus::kLoss: out[i].loss += inv; break;
        case CloneStatus::kNeutral: break;
      }
    }
  return out;
}

}  // namespace betagos

#ifndef BETAGOS_CGH_HPP
#define BETAGOS_CGH_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "betagos/gibbs.hpp"

namespace betagos {

// One array clone: genomic coordinates plus the observed log2 intensity ratio.
struct CloneRecord {
  std::string clone_id;
  std::string chromosome;
  double kb_start = 0.0;
  double kb_end = 0.0;
  double log2_ratio = 0.0;
};

// Position-sorted clones, usually one chromosome of one sample.
struct CloneSeries {
  std::vector<CloneRecord> records;

  int size() const { return static_cast<int>(records.size()); }
  std::vector<double> ratios() const;
  void validate() const;  // positions non-decreasing within each chromosome

  // clone_id,chromosome,kb_start,kb_end,log2_ratio (header optional).
  static CloneSeries read_csv(std::istream& is);
};

struct CallConfig {
  double epsilon = 0.1;     // aberrance threshold on |mean - neutral mean|
  double call_freq = 0.7;   // fraction of iterations needed to call a status
  double amp_sd_mult = 2.0; // gains above mean + mult*sd are high-amplification
  double fdr_level = 0.05;
  bool per_clone_null = false;  // region p-hat: per-clone average instead of
                                // the all-clones-neutral indicator

  void validate() const;  // throws; warns to stderr when epsilon leaves [0.05, 0.15]
};

enum class CloneStatus { kLoss, kNeutral, kGain, kHighAmp };

const char* to_string(CloneStatus s);

// Status per block given the block means of one iteration: the block with the
// smallest |mean| is the neutral reference; others are aberrant when farther
// than epsilon from it; gains beyond mean(gains) + amp_sd_mult*sd(gains) are
// high-amplification (needs >= 2 gains to estimate the sd).
std::vector<CloneStatus> classify_iteration(std::span<const double> block_means,
                                            double epsilon, double amp_sd_mult);

struct CloneCall {
  CloneStatus status = CloneStatus::kNeutral;
  double freq_gain = 0.0;  // includes high-amplification iterations
  double freq_loss = 0.0;
  double freq_high = 0.0;
  double call_frequency = 0.0;  // frequency of the final status
};

struct Region {
  int first = 0;  // clone indices, inclusive
  int last = 0;
  CloneStatus status = CloneStatus::kNeutral;
  double p_null = 1.0;  // posterior probability the region is neutral
  double q = 1.0;
  bool significant = false;
};

struct CallResult {
  std::vector<CloneCall> clones;
  std::vector<Region> regions;  // genomic order
};

// Per-clone status frequencies across the trace plus thresholded final calls.
// high-amplification dominates gain when both pass call_freq.
CallResult call_clones(const Trace& trace, const CloneSeries& series,
                       const CallConfig& cfg);

// Forms maximal same-status non-neutral runs (within a chromosome), computes
// each region's posterior null probability from the trace, and assigns
// q-values by the running mean over regions sorted by p_null ascending.
void region_fdr(const Trace& trace, const CloneSeries& series, CallResult& calls,
                const CallConfig& cfg);

// Default fit configuration for log2-ratio series: theta-linear schedule,
// diffuse base measure, tau^2 prior centered near 0.1^2.
ModelConfig cgh_default_model();

// Fit one series and run the calling pipeline end to end.
CallResult run_cgh_series(const CloneSeries& series, const CallConfig& cfg,
                          const ModelConfig& model, int iters, int burnin, int thin,
                          std::uint64_t seed);

struct CloneFrequency {
  double gain = 0.0;  // includes high_amp calls
  double loss = 0.0;
  double high_amp = 0.0;
};

// Fraction of samples carrying each call, per clone. All results must cover
// the same clone set.
std::vector<CloneFrequency> aberration_frequency(std::span<const CallResult> results);

}  // namespace betagos

#endif  // BETAGOS_CGH_HPP

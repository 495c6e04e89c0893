#ifndef BETAGOS_GIBBS_HPP
#define BETAGOS_GIBBS_HPP

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "betagos/core.hpp"
#include "betagos/rng.hpp"
#include "betagos/schedule.hpp"

namespace betagos {

// How tau^2 is refreshed each sweep. kPooledEm draws a per-block variance and
// pools the draws into one size-weighted estimate; kGlobalConjugate is the
// exact single-site conjugate draw (required for validity checks such as the
// Geweke test, since the pooled estimate is not a Gibbs transition).
enum class Tau2Mode { kPooledEm, kGlobalConjugate };

struct ModelConfig {
  double mu0 = 0.0;
  double sigma0 = 10.0;  // base-measure std dev
  double a0 = 2.004;     // inverse-gamma shape for tau^2
  double b0 = 0.0063;    // inverse-gamma scale for tau^2
  BetaSchedule schedule = BetaSchedule::theta_linear(1.0, 1.0);
  Tau2Mode tau2_mode = Tau2Mode::kPooledEm;
  bool random_scan = false;   // permute label-update order each sweep
  bool all_new_init = false;  // start from all-singletons instead of a prior draw

  void validate() const;  // throws std::invalid_argument
};

// Sampler state. weights stays empty for deterministic schedules; means is
// aligned with partition_of(labels).blocks (canonical order) and is refreshed
// by means_update, so it is only meaningful right after a sweep.
struct GibbsState {
  PairingLabels labels;
  LatentWeights weights;
  double tau2 = 1.0;
  std::vector<double> means;
};

// Sufficient statistics of one block.
struct BlockStats {
  int n = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double y) { ++n; sum += y; sumsq += y * y; }
};

// log integral prod_l N(y_l | mu, tau2) N(mu | mu0, sigma0^2) dmu, with all
// Gaussian constants kept so values are comparable across partitions of
// different sizes.
double log_marginal_block(const BlockStats& st, const ModelConfig& cfg, double tau2);
double log_marginal_block(std::span<const double> y_block, const ModelConfig& cfg,
                          double tau2);

// Full conditional P{c_i = j | c_{-i}, W, tau2, y} for j = 0..i (0-based;
// j == i opens a block), as normalized probabilities. Block means are
// integrated out.
std::vector<double> label_full_conditional(int i, const GibbsState& state,
                                           std::span<const double> y,
                                           const ModelConfig& cfg);

// Posterior Beta parameters for W_{i+1} (0-based i) given the labels:
//   A = alpha + #{j > i : c_j < i or c_j == j},  B = beta + #{j > i : c_j == i}.
struct BetaParams {
  double a = 0.0;
  double b = 0.0;
};
BetaParams weight_full_conditional(int i, const PairingLabels& labels,
                                   const BetaSchedule& s);

// Draw mu*_j for every block of partition_of(state.labels), canonical order.
std::vector<double> means_update(const GibbsState& state, std::span<const double> y,
                                 const ModelConfig& cfg, RngStream& rng);

// Refresh tau^2; state.means must be current. Falls back to the global draw
// under kPooledEm when every block is a singleton.
double tau2_update(const GibbsState& state, std::span<const double> y,
                   const ModelConfig& cfg, RngStream& rng, Tau2Mode mode);

// One systematic sweep: labels 0..m-1 (or a random permutation), then weights
// (skipped for deterministic schedules), then means, then tau^2.
void gibbs_sweep(GibbsState& state, std::span<const double> y, const ModelConfig& cfg,
                 RngStream& rng);

// Prior draw of a full state for m observations (labels via the backward walk,
// tau2 from its inverse-gamma prior; means left empty).
GibbsState init_state(int m, const ModelConfig& cfg, RngStream& rng);

// Draw y_{m+1}: pair into an existing block (emitting from its mu*) or open a
// new one (mu fresh from the base measure). state.means must be current.
double predict_next(const GibbsState& state, std::span<const double> y,
                    const ModelConfig& cfg, RngStream& rng);

struct TraceEntry {
  int iter = 0;  // 1-based sweep index
  int K = 0;
  std::vector<int> assignments;  // block index per observation, canonical order
  double tau2 = 0.0;
  std::vector<double> means;
  double log_marginal = 0.0;  // sum of block marginals at this tau2
  double y_pred = 0.0;        // one predictive draw recorded per kept state
};

struct Trace {
  std::vector<TraceEntry> entries;
  int m = 0;
  int iters = 0;
  int burnin = 0;
  int thin = 1;
  std::uint64_t seed = 0;
};

// Run one chain: init_state, `iters` sweeps, keep every thin-th state after
// burnin. Throws std::invalid_argument for non-finite data or if no post-burnin
// draw would be kept.
Trace run_chain(std::span<const double> y, const ModelConfig& cfg, int iters,
                int burnin, int thin, std::uint64_t seed);

// Least-squares co-clustering point estimate: the kept partition minimizing
// squared distance to the mean co-assignment matrix (earliest iteration wins
// ties).
Partition point_partition(const Trace& trace);

// Mean pairwise co-assignment matrix (m x m, row-major).
std::vector<double> coclustering_matrix(const Trace& trace);

struct AccuracyPair {
  double pairwise = 0.0;  // Rand index
  double matched = 0.0;   // greedy maximum-overlap matching, then hit rate
};
AccuracyPair accuracy(const Partition& est, const Partition& truth);

struct FitSummary {
  Partition point_estimate;
  double mean_K = 0.0;
  double tau_posterior_mean = 0.0;  // mean of sqrt(tau2) over the trace
  double predictive_bias = std::numeric_limits<double>::quiet_NaN();
  double acc_pairwise = std::numeric_limits<double>::quiet_NaN();
  double acc_matched = std::numeric_limits<double>::quiet_NaN();
};

// Summarize a trace; holdout (if finite) yields predictive_bias =
// mean |holdout - y_pred|; truth (if non-null) yields the accuracy fields.
FitSummary fit_summary(const Trace& trace,
                       double holdout = std::numeric_limits<double>::quiet_NaN(),
                       const Partition* truth = nullptr);

std::string trace_to_json(const Trace& trace);

}  // namespace betagos

#endif  // BETAGOS_GIBBS_HPP

#ifndef BETAGOS_BENCHMARK_HPP
#define BETAGOS_BENCHMARK_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "betagos/generators.hpp"
#include "betagos/gibbs.hpp"

namespace betagos {

// A named model to fit in the benchmark grid. "betagos:<schedule>" uses the
// sampler with random weights; "dp:<theta>" is the deterministic-weight
// special case.
struct FitterSpec {
  std::string name;
  ModelConfig model;

  static FitterSpec parse(const std::string& text);
};

struct BenchmarkConfig {
  std::vector<GeneratorSpec> generators;
  std::vector<FitterSpec> fitters;
  int replicates = 50;
  int n_fit = 100;  // generate n_fit + 1, hold the last out for prediction
  int iters = 5000;
  int burnin = 1000;
  int thin = 4;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

// One fitted replicate (one generator x fitter x dataset).
struct ReplicateResult {
  double mean_K = 0.0;
  double acc_matched = 0.0;
  double acc_pairwise = 0.0;
  double bias = 0.0;
  double tau = 0.0;
};

struct CellStats {
  std::string generator;
  std::string fitter;
  int replicates = 0;
  double k_mean = 0.0, k_sd = 0.0;
  double acc_mean = 0.0, acc_sd = 0.0;
  double pair_mean = 0.0, pair_sd = 0.0;
  double bias_mean = 0.0, bias_sd = 0.0;
  double tau_mean = 0.0, tau_sd = 0.0;
};

struct BenchmarkReport {
  std::vector<CellStats> cells;                       // generator-major order
  std::vector<std::vector<ReplicateResult>> raw;      // [cell][replicate]
  int replicates = 0, n_fit = 0, iters = 0, burnin = 0, thin = 0;
  std::uint64_t seed = 0;

  // Deterministic serializations: thread count and wall time never appear.
  std::string to_json() const;
  void write_summary_csv(std::ostream& os) const;
  void write_raw_csv(std::ostream& os) const;
};

// Runs the full grid. Every replicate r of generator g uses the data
// substream split(g*R + r) of the master seed, and fitter f fits with chain
// seed split(g*R + r).split(f + 1); results land in preassigned slots, so the
// report is bit-identical for any thread count.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

}  // namespace betagos

#endif  // BETAGOS_BENCHMARK_HPP

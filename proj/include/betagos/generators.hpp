#ifndef BETAGOS_GENERATORS_HPP
#define BETAGOS_GENERATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "betagos/core.hpp"
#include "betagos/rng.hpp"
#include "betagos/schedule.hpp"

namespace betagos {

// A synthetic series with its ground-truth partition; states carries the
// hidden path for the HMM design (empty otherwise).
struct LabeledSeries {
  std::vector<double> y;
  Partition truth;
  std::vector<int> states;
};

// i.i.d. draws from a finite Normal mixture. Component means are drawn once
// from N(mu0, sigma0^2); emissions add N(0, tau^2) noise; truth is the
// component identity. pi must sum to 1 within 1e-12.
LabeledSeries gen_mixture(const std::vector<double>& pi, double mu0, double sigma0,
                          double tau, int n, RngStream& rng);

// Truncated Polya urn: the next tag copies the tag of one of the last k_lag
// observations (p_recent[0] = weight of the most recent, and so on) or is
// drawn fresh from N(mu0, sigma0^2) with probability p_new; emissions add
// N(0, tau^2) noise. While fewer than k_lag observations exist, the weight of
// each unavailable lag is folded into p_new. A block whose last member is
// more than k_lag positions back can never recur.
LabeledSeries gen_truncated_urn(int k_lag, double p_new,
                                const std::vector<double>& p_recent, double mu0,
                                double sigma0, double tau, int n, RngStream& rng);

// Time-inhomogeneous hidden Markov chain: rows1 governs steps before
// switch_at, rows2 after (both row-stochastic, S x S flattened row-major).
// The initial state is uniform. state_means may be empty, in which case S
// means are drawn from N(mu0, sigma0^2). Emissions are N(mean_state, tau^2).
LabeledSeries gen_hmm_two_regime(const std::vector<double>& rows1,
                                 const std::vector<double>& rows2, int n_states,
                                 int switch_at, std::vector<double> state_means,
                                 double mu0, double sigma0, double tau, int n,
                                 RngStream& rng);

// Species-sampling data: tags from the Beta-GOS forward simulation (atoms
// from N(mu0, sigma0^2)), emissions add N(0, tau^2) noise.
LabeledSeries gen_betagos(const BetaSchedule& s, double mu0, double sigma0,
                          double tau, int n, RngStream& rng);

// Simulation designs from the reference study, with their default parameters.
std::vector<double> default_mixture_pi();                    // (.2,.35,.15,.1,.2)
std::vector<double> default_hmm_sticky(int n_states);        // 0.91 diag / 0.03 off
std::vector<double> default_hmm_switching();                 // 4-state block matrix

enum class GeneratorKind { kMixture, kTruncatedUrn, kHmmTwoRegime, kBetaGos, kDp };

// Declarative generator description, usable from the CLI and the benchmark
// harness. Unused fields are ignored by kinds that do not need them.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kBetaGos;
  int n = 100;
  double mu0 = 0.0;
  double sigma0 = 10.0;
  double tau = 0.25;
  std::vector<double> pi;           // mixture; empty = published default
  int k_lag = 3;                    // urn
  double p_new = 0.2;               // urn
  std::vector<double> p_recent;     // urn; empty = (2/5, 1/5, 1/5)
  int n_states = 4;                 // hmm
  int switch_at = 50;               // hmm
  BetaSchedule schedule = BetaSchedule::theta_linear(1.0, 1.0);  // betagos / dp

  // "mixture" | "urn" | "hmm" | "betagos:<schedule>" | "dp:<theta>"
  static GeneratorSpec parse(const std::string& text);
  std::string label() const;
  void validate() const;  // throws std::invalid_argument
};

LabeledSeries generate(const GeneratorSpec& spec, RngStream& rng);

}  // namespace betagos

#endif  // BETAGOS_GENERATORS_HPP

#ifndef BETAGOS_CORE_HPP
#define BETAGOS_CORE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "betagos/rng.hpp"
#include "betagos/schedule.hpp"

namespace betagos {

// Latent reinforcements W_1..W_n, each strictly inside (0,1).
using LatentWeights = std::vector<double>;

// One-step predictive weights induced by the latent reinforcements:
//   p[j] = (1 - W_{j+1}) * prod_{i>j+1} W_i   (0-based j pairs with obs j)
//   r    = prod_i W_i                          (new-cluster mass)
// p and r live on the simplex: sum(p) + r == 1 up to rounding. log_r is kept
// alongside because r itself underflows for long sequences.
struct PredictiveWeights {
  std::vector<double> p;
  double r = 1.0;
  double log_r = 0.0;
};

// Pairing labels c_0..c_{n-1} with c[i] in [0..i]; c[i] == i opens a block.
// (Files and logs use the 1-based convention; in-memory they are 0-based.)
struct PairingLabels {
  std::vector<int> c;

  int size() const { return static_cast<int>(c.size()); }
  void validate() const;
};

// Set partition of {0..n-1}; blocks are disjoint, cover the range, and are
// canonically ordered by smallest member (members ascending) so two
// partitions compare bit-exactly.
struct Partition {
  std::vector<std::vector<int>> blocks;

  int size() const;
  int block_count() const { return static_cast<int>(blocks.size()); }
  // block index of each element
  std::vector<int> assignments() const;
  static Partition from_assignments(std::span<const int> block_of);

  bool operator==(const Partition&) const = default;
};

// A simulated Beta-GOS draw: tags, the pairing labels that produced them,
// the latent weights, and the induced partition.
struct SequenceSample {
  std::vector<double> tags;
  PairingLabels labels;
  LatentWeights weights;
  Partition partition;
  std::uint64_t seed = 0;

  std::string to_json() const;
  static SequenceSample from_json(const std::string& text);
  void write_csv(std::ostream& os) const;  // index,tag,label (1-based)
};

// n independent draws W_i from the schedule (deterministic for DP).
LatentWeights sample_weights(const BetaSchedule& s, int n, RngStream& rng);

// Predictive weights for the next observation given W; length 0 gives r = 1.
// Throws std::domain_error if any weight is outside (0,1).
PredictiveWeights predictive_weights(const LatentWeights& w);

// Draw the pairing for observation n: returns j in [0..n-1] with probability
// p[j], or n (a new block) with probability r.
int sample_pairing(const PredictiveWeights& pw, RngStream& rng);

// Same distribution as sample_pairing(predictive_weights(w), rng) but walks
// backwards through the weights, so no weight products are formed. Consumes a
// variable number of uniforms.
int sample_pairing_backward(const LatentWeights& w, RngStream& rng);

// Connected components of the pairing graph (i linked to c[i] when c[i] != i).
Partition partition_of(const PairingLabels& labels);

// Forward simulation of the species sampling sequence with base measure
// N(mu0, sigma0^2).
SequenceSample simulate_sequence(const BetaSchedule& s, double mu0, double sigma0,
                                 int n, RngStream& rng);

// Number of blocks K_n only, in O(n): block openings are Bernoulli(r_{i-1})
// given the weights, so the tags and pairings never need to be materialized.
int simulate_block_count(const BetaSchedule& s, int n, RngStream& rng);

}  // namespace betagos

#endif  // BETAGOS_CORE_HPP

#ifndef BETAGOS_SCHEDULE_HPP
#define BETAGOS_SCHEDULE_HPP

#include <string>
#include <utility>
#include <vector>

#include "betagos/rng.hpp"

namespace betagos {

enum class ScheduleFamily { kConstant, kThetaLinear, kExplicit, kDpDeterministic };

// Rule producing the Beta(alpha_i, beta_i) parameters of the latent
// reinforcements, indexed from i = 1.
//
//   Constant(a,b)       alpha_i = a, beta_i = b
//   ThetaLinear(theta,beta)  alpha_i = i + theta - 1, beta_i = beta
//   Explicit(list)      parameters looked up per index
//   DpDeterministic(theta)   degenerate weights W_i = (theta+i-1)/(theta+i),
//                            reproducing the Blackwell-MacQueen urn.
class BetaSchedule {
 public:
  static BetaSchedule constant(double a, double b);
  static BetaSchedule theta_linear(double theta, double beta);
  static BetaSchedule explicit_params(std::vector<std::pair<double, double>> params);
  static BetaSchedule dp(double theta);

  // Parse a CLI-style spec: "const:A,B", "theta:T" or "theta:T,B", "dp:T".
  static BetaSchedule parse(const std::string& spec);

  ScheduleFamily family() const { return family_; }
  bool deterministic() const { return family_ == ScheduleFamily::kDpDeterministic; }

  // (alpha_i, beta_i) for i >= 1. Throws std::domain_error for the DP family
  // (its weights are not Beta distributed) and std::out_of_range past the end
  // of an Explicit list.
  std::pair<double, double> params(int i) const;

  double deterministic_weight(int i) const;

  // E[W_i].
  double mean_weight(int i) const;

  // E[W_i^k]; for Beta weights this is prod_{t=0..k-1} (alpha+t)/(alpha+beta+t).
  double power_moment(int i, int k) const;

  double sample_weight(int i, RngStream& rng) const;

  std::string label() const;

 private:
  BetaSchedule() = default;

  ScheduleFamily family_ = ScheduleFamily::kConstant;
  double a_ = 1.0, b_ = 1.0;      // Constant
  double theta_ = 1.0, beta_ = 1.0;  // ThetaLinear / DpDeterministic
  std::vector<std::pair<double, double>> explicit_;
};

}  // namespace betagos

#endif  // BETAGOS_SCHEDULE_HPP

#include "betagos/schedule.hpp"

#include <sstream>
#include <stdexcept>

namespace betagos {

BetaSchedule BetaSchedule::constant(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("Constant schedule requires a > 0 and b > 0");
  BetaSchedule s;
  s.family_ = ScheduleFamily::kConstant;
  s.a_ = a;
  s.b_ = b;
  return s;
}

BetaSchedule BetaSchedule::theta_linear(double theta, double beta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("ThetaLinear schedule requires theta > 0");
  if (!(beta >= 1.0))
    throw std::invalid_argument("ThetaLinear schedule requires beta >= 1");
  BetaSchedule s;
  s.family_ = ScheduleFamily::kThetaLinear;
  s.theta_ = theta;
  s.beta_ = beta;
  return s;
}

BetaSchedule BetaSchedule::explicit_params(std::vector<std::pair<double, double>> params) {
  for (const auto& [a, b] : params)
    if (!(a > 0.0) || !(b > 0.0))
      throw std::invalid_argument("Explicit schedule entries must be positive");
  BetaSchedule s;
  s.family_ = ScheduleFamily::kExplicit;
  s.explicit_ = std::move(params);
  return s;
}

BetaSchedule BetaSchedule::dp(double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("DP schedule requires theta > 0");
  BetaSchedule s;
  s.family_ = ScheduleFamily::kDpDeterministic;
  s.theta_ = theta;
  return s;
}

BetaSchedule BetaSchedule::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto nums = [&rest]() {
    std::vector<double> out;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
  };
  if (head == "const") {
    auto v = nums();
    if (v.size() != 2) throw std::invalid_argument("const schedule needs const:A,B");
    return constant(v[0], v[1]);
  }
  if (head == "theta") {
    auto v = nums();
    if (v.size() == 1) return theta_linear(v[0], 1.0);
    if (v.size() == 2) return theta_linear(v[0], v[1]);
    throw std::invalid_argument("theta schedule needs theta:T or theta:T,B");
  }
  if (head == "dp") {
    auto v = nums();
    if (v.size() != 1) throw std::invalid_argument("dp schedule needs dp:THETA");
    return dp(v[0]);
  }
  throw std::invalid_argument("unknown schedule spec: " + spec);
}

std::pair<double, double> BetaSchedule::params(int i) const {
  if (i < 1) throw std::domain_error("schedule index must be >= 1");
  switch (family_) {
    case ScheduleFamily::kConstant:
      return {a_, b_};
    case ScheduleFamily::kThetaLinear:
      return {static_cast<double>(i) + theta_ - 1.0, beta_};
    case ScheduleFamily::kExplicit:
      if (static_cast<std::size_t>(i) > explicit_.size())
        throw std::out_of_range("Explicit schedule has no entry for index " + std::to_string(i));
      return explicit_[static_cast<std::size_t>(i) - 1];
    case ScheduleFamily::kDpDeterministic:
      throw std::domain_error("DP schedule weights are deterministic, not Beta");
  }
  throw std::logic_error("unreachable");
}

double BetaSchedule::deterministic_weight(int i) const {
  if (family_ != ScheduleFamily::kDpDeterministic)
    throw std::domain_error("deterministic_weight is defined only for the DP schedule");
  if (i < 1) throw std::domain_error("schedule index must be >= 1");
  return (theta_ + i - 1.0) / (theta_ + i);
}

double BetaSchedule::mean_weight(int i) const {
  if (deterministic()) return deterministic_weight(i);
  auto [a, b] = params(i);
  return a / (a + b);
}

double BetaSchedule::power_moment(int i, int k) const {
  if (k < 0) throw std::domain_error("power_moment: k must be >= 0");
  if (k == 0) return 1.0;
  if (deterministic()) {
    double w = deterministic_weight(i);
    double out = 1.0;
    for (int t = 0; t < k; ++t) out *= w;
    return out;
  }
  auto [a, b] = params(i);
  double out = 1.0;
  for (int t = 0; t < k; ++t) out *= (a + t) / (a + b + t);
  return out;
}

double BetaSchedule::sample_weight(int i, RngStream& rng) const {
  if (deterministic()) return deterministic_weight(i);
  auto [a, b] = params(i);
  return rng.beta(a, b);
}

std::string BetaSchedule::label() const {
  std::ostringstream os;
  switch (family_) {
    case ScheduleFamily::kConstant:
      os << "const:" << a_ << "," << b_;
      break;
    case ScheduleFamily::kThetaLinear:
      os << "theta:" << theta_;
      if (beta_ != 1.0) os << "," << beta_;
      break;
    case ScheduleFamily::kExplicit:
      os << "explicit[" << explicit_.size() << "]";
      break;
    case ScheduleFamily::kDpDeterministic:
      os << "dp:" << theta_;
      break;
  }
  return os.str();
}

}  // namespace betagos

#include "betagos/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace betagos {

namespace {

// Kahan-compensated sum of log mean weights over j = lo..hi.
double log_mean_weight_sum(const BetaSchedule& s, int lo, int hi) {
  double sum = 0.0, comp = 0.0;
  for (int j = lo; j <= hi; ++j) {
    double y = std::log(s.mean_weight(j)) - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Fills pw[k] = E[W_i^k] for k = 0..kmax.
void power_moments_at(const BetaSchedule& s, int i, int kmax, std::vector<double>& pw) {
  pw[0] = 1.0;
  if (s.deterministic()) {
    double w = s.deterministic_weight(i);
    for (int k = 1; k <= kmax; ++k) pw[static_cast<std::size_t>(k)] = pw[static_cast<std::size_t>(k - 1)] * w;
  } else {
    auto [a, b] = s.params(i);
    for (int k = 1; k <= kmax; ++k)
      pw[static_cast<std::size_t>(k)] =
          pw[static_cast<std::size_t>(k - 1)] * (a + k - 1.0) / (a + b + k - 1.0);
  }
}

}  // namespace

double expected_r(const BetaSchedule& s, int n) {
  if (n < 0) throw std::domain_error("expected_r: n must be >= 0");
  if (n == 0) return 1.0;
  return std::exp(log_mean_weight_sum(s, 1, n));
}

double expected_p(const BetaSchedule& s, int n, int k) {
  if (k < 1 || k > n) throw std::domain_error("expected_p: need 1 <= k <= n");
  double one_minus_mean = 1.0 - s.mean_weight(k);
  return one_minus_mean * std::exp(log_mean_weight_sum(s, k + 1, n));
}

double expected_K(const BetaSchedule& s, int n) {
  if (n < 1) throw std::domain_error("expected_K: n must be >= 1");
  double k = 1.0, comp = 0.0;
  double log_r = 0.0;
  for (int j = 1; j <= n - 1; ++j) {
    log_r += std::log(s.mean_weight(j));
    double y = std::exp(log_r) - comp;
    double t = k + y;
    comp = (t - k) - y;
    k = t;
  }
  return k;
}

std::vector<double> phi_row(const BetaSchedule& s, int n, int max_m) {
  if (n < 0 || max_m < 0) throw std::domain_error("phi_row: need n >= 0, max_m >= 0");
  const int M = max_m;
  // Right-to-left pass. h[u] = sum over u-subsets S of {t..n} of
  // prod_{i=t..n} E[W_i^{#(S cap [i,n])}]; the recursion
  //   h[u] <- (h[u] + h[u-1]) * E[W_t^u]
  // covers "t not in S" and "t in S" at once, so one sweep yields phi_{n,u}
  // = final h[u] for every u <= M simultaneously.
  std::vector<double> h(static_cast<std::size_t>(M) + 1, 0.0);
  h[0] = 1.0;
  std::vector<double> pw(static_cast<std::size_t>(M) + 1, 1.0);
  for (int t = n; t >= 1; --t) {
    int top = std::min(M, n - t + 1);
    power_moments_at(s, t, top, pw);
    for (int u = top; u >= 1; --u)
      h[static_cast<std::size_t>(u)] =
          (h[static_cast<std::size_t>(u)] + h[static_cast<std::size_t>(u - 1)]) *
          pw[static_cast<std::size_t>(u)];
  }
  return h;
}

double phi(const BetaSchedule& s, int n, int m) {
  if (m < 0) throw std::domain_error("phi: m must be >= 0");
  if (m == 0) return 1.0;
  if (m > n) return 0.0;
  return phi_row(s, n, m)[static_cast<std::size_t>(m)];
}

double falling_factorial_moment(const BetaSchedule& s, int n, int m) {
  if (m < 1) throw std::domain_error("falling_factorial_moment: m must be >= 1");
  double mf = 1.0;
  for (int j = 2; j <= m; ++j) mf *= j;
  return mf * phi(s, n, m);
}

std::vector<std::vector<double>> stirling2_table(int kmax) {
  std::vector<std::vector<double>> S(static_cast<std::size_t>(kmax) + 1,
                                     std::vector<double>(static_cast<std::size_t>(kmax) + 1, 0.0));
  S[0][0] = 1.0;
  for (int k = 1; k <= kmax; ++k)
    for (int m = 1; m <= k; ++m)
      S[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] =
          m * S[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m)] +
          S[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(m - 1)];
  return S;
}

double raw_moment_km1(const BetaSchedule& s, int n, int k) {
  if (k < 1) throw std::domain_error("raw_moment_km1: k must be >= 1");
  auto S = stirling2_table(k);
  auto phis = phi_row(s, n, std::min(k, n));
  double out = 0.0;
  double mf = 1.0;
  for (int m = 1; m <= std::min(k, n); ++m) {
    mf *= m;
    out += mf * S[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] *
           phis[static_cast<std::size_t>(m)];
  }
  return out;
}

double mgf_K(const BetaSchedule& s, int n, double t) {
  if (n < 0) throw std::domain_error("mgf_K: n must be >= 0");
  auto phis = phi_row(s, n, n);
  double x = std::exp(-t) - 1.0;
  double sum = 0.0, pow_x = 1.0;
  for (int m = 0; m <= n; ++m) {
    sum += pow_x * phis[static_cast<std::size_t>(m)];
    pow_x *= x;
  }
  return std::exp(-t) * sum;
}

namespace {

// Advances rho from (a)^(j-1)/(a+b)^(j-1) to (a)^(j)/(a+b)^(j) and returns
// (a)^(j) / ((a+b)^(j) - (a)^(j)) = rho / (1 - rho).
double limit_phi_factor(double a, double b, int j, double& rho) {
  rho *= (a + j - 1.0) / (a + b + j - 1.0);
  return rho / (1.0 - rho);
}

}  // namespace

double limit_factorial_moment(double a, double b, int m) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("limit_factorial_moment: need a,b > 0");
  if (m < 1) throw std::domain_error("limit_factorial_moment: m must be >= 1");
  double rho = 1.0;
  double out = 1.0;
  for (int j = 1; j <= m; ++j) out *= j * limit_phi_factor(a, b, j, rho);
  return out;
}

MgfLimit limit_mgf(double a, double b, double t, int max_terms) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("limit_mgf: need a,b > 0");
  if (!(t > 0.0)) throw std::domain_error("limit_mgf: t must be > 0");
  if (max_terms < 1) throw std::domain_error("limit_mgf: max_terms must be >= 1");
  double x = std::exp(-t) - 1.0;  // in (-1, 0): alternating, shrinking terms
  MgfLimit out;
  double rho = 1.0;
  double term = 1.0;
  double sum = 1.0;  // m = 0 term
  int used = 1;
  for (int m = 1; m <= max_terms; ++m) {
    term *= x * limit_phi_factor(a, b, m, rho);
    if (std::abs(term) < 1e-14) {
      out.truncation_bound = std::exp(-t) * std::abs(term);
      out.value = std::exp(-t) * sum;
      out.terms_used = used;
      return out;
    }
    sum += term;
    ++used;
  }
  double rho_next = rho;
  double omitted = term * x * limit_phi_factor(a, b, max_terms + 1, rho_next);
  out.value = std::exp(-t) * sum;
  out.truncation_bound = std::exp(-t) * std::abs(omitted);
  out.terms_used = used;
  return out;
}

double gamma_limit_moment(double theta, int k) {
  if (!(theta > 0.0)) throw std::domain_error("gamma_limit_moment: theta must be > 0");
  if (k < 1) throw std::domain_error("gamma_limit_moment: k must be >= 1");
  double out = 1.0;
  for (int j = 0; j < k; ++j) out *= theta + j;
  return out;
}

MomentTable moment_table(const BetaSchedule& s, int n, int max_m) {
  if (n < 0 || max_m < 1) throw std::domain_error("moment_table: need n >= 0, max_m >= 1");
  MomentTable out;
  out.n = n;
  int top = std::min(max_m, n);
  out.phi = phi_row(s, n, top);
  double mf = 1.0;
  for (int m = 1; m <= top; ++m) {
    mf *= m;
    out.falling_moments.push_back(mf * out.phi[static_cast<std::size_t>(m)]);
  }
  auto S = stirling2_table(max_m);
  for (int k = 1; k <= max_m; ++k) {
    double raw = 0.0;
    double jf = 1.0;
    for (int m = 1; m <= std::min(k, top); ++m) {
      jf *= m;
      raw += jf * S[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] *
             out.phi[static_cast<std::size_t>(m)];
    }
    out.raw_moments.push_back(raw);
  }
  return out;
}

LimitSummary limit_summary(const BetaSchedule& s, int max_order) {
  LimitSummary out;
  switch (s.family()) {
    case ScheduleFamily::kConstant: {
      auto [a, b] = s.params(1);
      out.family = "constant";
      for (int m = 1; m <= max_order; ++m) out.values[m] = limit_factorial_moment(a, b, m);
      break;
    }
    case ScheduleFamily::kThetaLinear: {
      auto [a1, beta] = s.params(1);
      double theta = a1;  // alpha_1 = 1 + theta - 1
      if (beta == 1.0) {
        out.family = "theta_linear";
        for (int k = 1; k <= max_order; ++k) out.values[k] = gamma_limit_moment(theta, k);
      } else {
        out.family = "theta_linear_beta_gt1";  // K_n converges a.s.; no closed moments here
      }
      break;
    }
    case ScheduleFamily::kDpDeterministic: {
      double w1 = s.deterministic_weight(1);
      out.family = "dp";
      out.values[1] = w1 / (1.0 - w1);  // theta = a.s. limit of K_n / log n
      break;
    }
    case ScheduleFamily::kExplicit:
      out.family = "explicit";
      break;
  }
  return out;
}

int elicit_recent_window(const BetaSchedule& s, int n, double gamma) {
  if (n < 1) throw std::domain_error("elicit_recent_window: n must be >= 1");
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw std::domain_error("elicit_recent_window: gamma must be in (0,1)");
  double suffix = 1.0;  // prod_{i>k} E[W_i] for the current k = n - j
  double acc = 0.0;
  for (int j = 0; j <= n - 1; ++j) {
    int k = n - j;
    acc += (1.0 - s.mean_weight(k)) * suffix;
    if (acc >= gamma) return j;
    suffix *= s.mean_weight(k);
  }
  return -1;
}

}  // namespace betagos

#ifndef BETAGOS_MOMENTS_HPP
#define BETAGOS_MOMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "betagos/schedule.hpp"

namespace betagos {

// E[r_n] = prod_{j<=n} alpha_j/(alpha_j+beta_j); n = 0 gives 1.
double expected_r(const BetaSchedule& s, int n);

// E[p_{n,k}] for 1 <= k <= n.
double expected_p(const BetaSchedule& s, int n, int k);

// E[K_n] = 1 + sum_{j=1..n-1} E[r_j].
double expected_K(const BetaSchedule& s, int n);

// phi_{n,m}: sum over ordered m-subsets l_1<...<l_m of E[r_{l_1}...r_{l_m}],
// evaluated with the independent-weight factorization
//   phi_{n,m} = sum prod_j prod_{i=l_{j-1}+1..l_j} E[W_i^{m+1-j}]
// by an O(n*m) recursion over (index, drops-so-far). m > n gives 0.
double phi(const BetaSchedule& s, int n, int m);

// phi_{n,m} for m = 0..max_m in one pass.
std::vector<double> phi_row(const BetaSchedule& s, int n, int max_m);

// E[(K_{n+1}-1)_(m)] = m! * phi_{n,m}  (falling factorial).
double falling_factorial_moment(const BetaSchedule& s, int n, int m);

// E[(K_{n+1}-1)^k] = sum_m m! S(k,m) phi_{n,m} with Stirling numbers of the
// second kind.
double raw_moment_km1(const BetaSchedule& s, int n, int k);

// M_{n+1}(t) = E[e^{-t K_{n+1}}] = e^{-t} sum_{m=0..n} (e^{-t}-1)^m phi_{n,m}.
double mgf_K(const BetaSchedule& s, int n, double t);

// Stirling numbers of the second kind S(k,m) for k,m <= kmax (triangular
// recurrence; exact in doubles up to kmax ~ 30).
std::vector<std::vector<double>> stirling2_table(int kmax);

// Constant(a,b) limits: E[(K_inf - 1)_(m)] = m! prod_{j<=m} (a)^(j) /
// ((a+b)^(j) - (a)^(j)) with rising factorials (t)^(j).
double limit_factorial_moment(double a, double b, int m);

struct MgfLimit {
  double value = 0.0;
  double truncation_bound = 0.0;  // magnitude of the first omitted term
  int terms_used = 0;
};

// Truncated series for E[e^{-t K_inf}] under Constant(a,b); stops at
// max_terms or when a term drops below 1e-14. Requires t > 0.
MgfLimit limit_mgf(double a, double b, double t, int max_terms);

// k-th moment Gamma(theta+k)/Gamma(theta) of the Gamma(theta,1) limit of
// K_n / log n under ThetaLinear(theta, 1).
double gamma_limit_moment(double theta, int k);

// phi row plus derived falling-factorial and raw moments, for reporting.
struct MomentTable {
  int n = 0;
  std::vector<double> phi;               // index m
  std::vector<double> falling_moments;   // m = 1..M
  std::vector<double> raw_moments;       // k = 1..M, moments of K_{n+1}-1
};

MomentTable moment_table(const BetaSchedule& s, int n, int max_m);

// Limiting quantities per schedule family, for reporting.
struct LimitSummary {
  std::string family;
  std::map<int, double> values;  // Constant: m -> limit factorial moment;
                                 // ThetaLinear(beta=1): k -> Gamma moment
};

LimitSummary limit_summary(const BetaSchedule& s, int max_order);

// Smallest J with sum_{j=0..J} E[p_{n,n-j}] >= gamma, or -1 if even the full
// sum (1 - E[r_n]) stays below gamma. Prior-elicitation helper.
int elicit_recent_window(const BetaSchedule& s, int n, double gamma);

}  // namespace betagos

#endif  // BETAGOS_MOMENTS_HPP

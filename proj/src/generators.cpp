#include "betagos/generators.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace betagos {

namespace {

void check_simplex(const std::vector<double>& p, const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty probability vector");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": negative or non-finite probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(what) + ": probabilities do not sum to 1");
}

void check_rows(const std::vector<double>& rows, int S, const char* what) {
  if (static_cast<int>(rows.size()) != S * S)
    throw std::invalid_argument(std::string(what) + ": matrix size mismatch");
  for (int r = 0; r < S; ++r) {
    double total = 0.0;
    for (int c = 0; c < S; ++c) {
      double v = rows[static_cast<std::size_t>(r) * S + c];
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(what) + ": negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument(std::string(what) + ": row does not sum to 1");
  }
}

}  // namespace

LabeledSeries gen_mixture(const std::vector<double>& pi, double mu0, double sigma0,
                          double tau, int n, RngStream& rng) {
  check_simplex(pi, "gen_mixture");
  if (n < 1) throw std::invalid_argument("gen_mixture: n must be >= 1");
  const int S = static_cast<int>(pi.size());
  std::vector<double> means(static_cast<std::size_t>(S));
  for (double& m : means) m = rng.normal(mu0, sigma0);
  LabeledSeries out;
  out.y.reserve(static_cast<std::size_t>(n));
  std::vector<int> comp(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int k = rng.categorical(pi);
    comp[static_cast<std::size_t>(i)] = k;
    out.y.push_back(rng.normal(means[static_cast<std::size_t>(k)], tau));
  }
  out.truth = Partition::from_assignments(comp);
  return out;
}

LabeledSeries gen_truncated_urn(int k_lag, double p_new,
                                const std::vector<double>& p_recent, double mu0,
                                double sigma0, double tau, int n, RngStream& rng) {
  if (k_lag < 1) throw std::invalid_argument("gen_truncated_urn: k_lag must be >= 1");
  if (static_cast<int>(p_recent.size()) != k_lag)
    throw std::invalid_argument("gen_truncated_urn: need one lag weight per lag");
  if (n < 1) throw std::invalid_argument("gen_truncated_urn: n must be >= 1");
  std::vector<double> all(p_recent);
  all.push_back(p_new);
  check_simplex(all, "gen_truncated_urn");

  LabeledSeries out;
  out.y.reserve(static_cast<std::size_t>(n));
  std::vector<double> tags(static_cast<std::size_t>(n));
  std::vector<int> block(static_cast<std::size_t>(n));
  int next_block = 0;
  std::vector<double> w(static_cast<std::size_t>(k_lag) + 1);
  for (int i = 0; i < n; ++i) {
    // w[l] = copy the (l+1)-th most recent; w[k_lag] = fresh draw, absorbing
    // the mass of lags that do not exist yet.
    double fresh = p_new;
    for (int l = 0; l < k_lag; ++l) {
      if (l < i) {
        w[static_cast<std::size_t>(l)] = p_recent[static_cast<std::size_t>(l)];
      } else {
        w[static_cast<std::size_t>(l)] = 0.0;
        fresh += p_recent[static_cast<std::size_t>(l)];
      }
    }
    w[static_cast<std::size_t>(k_lag)] = fresh;
    int pick = rng.categorical(w);
    if (pick == k_lag) {
      tags[static_cast<std::size_t>(i)] = rng.normal(mu0, sigma0);
      block[static_cast<std::size_t>(i)] = next_block++;
    } else {
      int src = i - 1 - pick;
      tags[static_cast<std::size_t>(i)] = tags[static_cast<std::size_t>(src)];
      block[static_cast<std::size_t>(i)] = block[static_cast<std::size_t>(src)];
    }
    out.y.push_back(rng.normal(tags[static_cast<std::size_t>(i)], tau));
  }
  out.truth = Partition::from_assignments(block);
  return out;
}

LabeledSeries gen_hmm_two_regime(const std::vector<double>& rows1,
                                 const std::vector<double>& rows2, int n_states,
                                 int switch_at, std::vector<double> state_means,
                                 double mu0, double sigma0, double tau, int n,
                                 RngStream& rng) {
  if (n_states < 1) throw std::invalid_argument("gen_hmm_two_regime: need >= 1 state");
  if (n < 1) throw std::invalid_argument("gen_hmm_two_regime: n must be >= 1");
  check_rows(rows1, n_states, "gen_hmm_two_regime: regime 1");
  check_rows(rows2, n_states, "gen_hmm_two_regime: regime 2");
  if (state_means.empty()) {
    state_means.resize(static_cast<std::size_t>(n_states));
    for (double& m : state_means) m = rng.normal(mu0, sigma0);
  } else if (static_cast<int>(state_means.size()) != n_states) {
    throw std::invalid_argument("gen_hmm_two_regime: state_means size mismatch");
  }
  LabeledSeries out;
  out.y.reserve(static_cast<std::size_t>(n));
  out.states.reserve(static_cast<std::size_t>(n));
  std::vector<double> unif(static_cast<std::size_t>(n_states), 1.0 / n_states);
  int s = rng.categorical(unif);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      const auto& rows = i < switch_at ? rows1 : rows2;
      std::span<const double> row(rows.data() + static_cast<std::size_t>(s) * n_states,
                                  static_cast<std::size_t>(n_states));
      s = rng.categorical(row);
    }
    out.states.push_back(s);
    out.y.push_back(rng.normal(state_means[static_cast<std::size_t>(s)], tau));
  }
  out.truth = Partition::from_assignments(out.states);
  return out;
}

LabeledSeries gen_betagos(const BetaSchedule& s, double mu0, double sigma0,
                          double tau, int n, RngStream& rng) {
  SequenceSample seq = simulate_sequence(s, mu0, sigma0, n, rng);
  LabeledSeries out;
  out.y.reserve(static_cast<std::size_t>(n));
  for (double tag : seq.tags) out.y.push_back(rng.normal(tag, tau));
  out.truth = std::move(seq.partition);
  return out;
}

std::vector<double> default_mixture_pi() { return {0.2, 0.35, 0.15, 0.1, 0.2}; }

std::vector<double> default_hmm_sticky(int n_states) {
  std::vector<double> rows(static_cast<std::size_t>(n_states) * n_states, 0.03);
  for (int i = 0; i < n_states; ++i)
    rows[static_cast<std::size_t>(i) * n_states + i] = 1.0 - 0.03 * (n_states - 1);
  return rows;
}

std::vector<double> default_hmm_switching() {
  // Listed column vectors (.4,.4,.1,.1) twice then (.1,.1,.4,.4) twice; the
  // matrix is symmetric, so the row- and column-stochastic readings coincide.
  return {0.4, 0.4, 0.1, 0.1,
          0.4, 0.4, 0.1, 0.1,
          0.1, 0.1, 0.4, 0.4,
          0.1, 0.1, 0.4, 0.4};
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  GeneratorSpec spec;
  if (text == "mixture") {
    spec.kind = GeneratorKind::kMixture;
  } else if (text == "urn") {
    spec.kind = GeneratorKind::kTruncatedUrn;
  } else if (text == "hmm") {
    spec.kind = GeneratorKind::kHmmTwoRegime;
  } else if (text.rfind("betagos:", 0) == 0) {
    spec.kind = GeneratorKind::kBetaGos;
    spec.schedule = BetaSchedule::parse(text.substr(8));
  } else if (text.rfind("dp:", 0) == 0) {
    spec.kind = GeneratorKind::kDp;
    spec.schedule = BetaSchedule::parse(text);
  } else {
    throw std::invalid_argument("unknown generator kind: " + text);
  }
  return spec;
}

std::string GeneratorSpec::label() const {
  switch (kind) {
    case GeneratorKind::kMixture: return "mixture";
    case GeneratorKind::kTruncatedUrn: return "urn";
    case GeneratorKind::kHmmTwoRegime: return "hmm";
    case GeneratorKind::kBetaGos: return "betagos:" + schedule.label();
    case GeneratorKind::kDp: return schedule.label();
  }
  return "unknown";
}

void GeneratorSpec::validate() const {
  if (n < 1) throw std::invalid_argument("GeneratorSpec: n must be >= 1");
  if (!(tau > 0.0) || !(sigma0 > 0.0))
    throw std::invalid_argument("GeneratorSpec: tau and sigma0 must be positive");
  if (kind == GeneratorKind::kMixture && !pi.empty()) check_simplex(pi, "GeneratorSpec");
}

LabeledSeries generate(const GeneratorSpec& spec, RngStream& rng) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::kMixture:
      return gen_mixture(spec.pi.empty() ? default_mixture_pi() : spec.pi, spec.mu0,
                         spec.sigma0, spec.tau, spec.n, rng);
    case GeneratorKind::kTruncatedUrn: {
      std::vector<double> lags = spec.p_recent.empty()
                                     ? std::vector<double>{0.4, 0.2, 0.2}
                                     : spec.p_recent;
      return gen_truncated_urn(spec.k_lag, spec.p_new, lags, spec.mu0, spec.sigma0,
                               spec.tau, spec.n, rng);
    }
    case GeneratorKind::kHmmTwoRegime:
      if (spec.n_states != 4)
        throw std::invalid_argument("GeneratorSpec: built-in switching matrix is 4-state");
      return gen_hmm_two_regime(default_hmm_sticky(spec.n_states),
                                default_hmm_switching(), spec.n_states, spec.switch_at,
                                {}, spec.mu0, spec.sigma0, spec.tau, spec.n, rng);
    case GeneratorKind::kBetaGos:
    case GeneratorKind::kDp:
      return gen_betagos(spec.schedule, spec.mu0, spec.sigma0, spec.tau, spec.n, rng);
  }
  throw std::logic_error("generate: unreachable");
}

}  // namespace betagos

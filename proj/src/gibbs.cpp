#include "betagos/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace betagos {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2*pi)/2

double weight_at(const GibbsState& st, const ModelConfig& cfg, int l) {
  if (st.weights.empty())
    return cfg.schedule.deterministic_weight(l + 1);
  return st.weights[static_cast<std::size_t>(l)];
}

// Workspace reused across the m label updates of one sweep.
struct LabelScratch {
  std::vector<int> root;
  std::vector<BlockStats> stats;
  std::vector<double> delta;     // per root: logML(B + T) - logML(B) - logML(T)
  std::vector<int> touched;      // roots with live stats
  std::vector<double> logprior;  // over candidates 0..i
  std::vector<double> prob;

  void resize(int m) {
    root.resize(static_cast<std::size_t>(m));
    stats.resize(static_cast<std::size_t>(m));
    delta.resize(static_cast<std::size_t>(m));
    logprior.resize(static_cast<std::size_t>(m) + 1);
    prob.resize(static_cast<std::size_t>(m) + 1);
  }
};

// Unnormalized log weights for c_i = 0..i written into scratch.logprior /
// scratch.prob; returns the count i+1. Blocks are formed with i detached, so
// the candidate j < i merges i's subtree into j's block.
int label_log_weights(int i, const GibbsState& st, std::span<const double> y,
                      const ModelConfig& cfg, LabelScratch& sc, std::vector<double>& logw) {
  const int m = static_cast<int>(y.size());
  // Prior over candidates given W (suffix scan of log weights).
  double suf = 0.0;
  for (int j = i - 1; j >= 0; --j) {
    double w = weight_at(st, cfg, j);
    sc.logprior[static_cast<std::size_t>(j)] = std::log1p(-w) + suf;
    suf += std::log(w);
  }
  sc.logprior[static_cast<std::size_t>(i)] = suf;

  // Components with i detached; i's subtree keeps root i.
  for (int r : sc.touched) sc.stats[static_cast<std::size_t>(r)] = BlockStats{};
  sc.touched.clear();
  for (int j = 0; j < m; ++j) {
    int cj = st.labels.c[static_cast<std::size_t>(j)];
    sc.root[static_cast<std::size_t>(j)] = (j == i || cj == j) ? j : sc.root[static_cast<std::size_t>(cj)];
    int r = sc.root[static_cast<std::size_t>(j)];
    if (sc.stats[static_cast<std::size_t>(r)].n == 0) sc.touched.push_back(r);
    sc.stats[static_cast<std::size_t>(r)].add(y[static_cast<std::size_t>(j)]);
  }

  const double ml_tree = log_marginal_block(sc.stats[static_cast<std::size_t>(i)], cfg, st.tau2);
  for (int r : sc.touched) {
    if (r == i) continue;
    BlockStats merged = sc.stats[static_cast<std::size_t>(r)];
    const BlockStats& tr = sc.stats[static_cast<std::size_t>(i)];
    merged.n += tr.n;
    merged.sum += tr.sum;
    merged.sumsq += tr.sumsq;
    sc.delta[static_cast<std::size_t>(r)] =
        log_marginal_block(merged, cfg, st.tau2) -
        log_marginal_block(sc.stats[static_cast<std::size_t>(r)], cfg, st.tau2) - ml_tree;
  }

  logw.resize(static_cast<std::size_t>(i) + 1);
  for (int j = 0; j < i; ++j)
    logw[static_cast<std::size_t>(j)] = sc.logprior[static_cast<std::size_t>(j)] +
                                        sc.delta[static_cast<std::size_t>(sc.root[static_cast<std::size_t>(j)])];
  logw[static_cast<std::size_t>(i)] = sc.logprior[static_cast<std::size_t>(i)];
  return i + 1;
}

void update_label(int i, GibbsState& st, std::span<const double> y, const ModelConfig& cfg,
                  LabelScratch& sc, std::vector<double>& logw, RngStream& rng) {
  if (i == 0) {
    st.labels.c[0] = 0;
    return;
  }
  int k = label_log_weights(i, st, y, cfg, sc, logw);
  double mx = logw[0];
  for (int j = 1; j < k; ++j) mx = std::max(mx, logw[static_cast<std::size_t>(j)]);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    sc.prob[static_cast<std::size_t>(j)] = std::exp(logw[static_cast<std::size_t>(j)] - mx);
    total += sc.prob[static_cast<std::size_t>(j)];
  }
  double u = rng.uniform() * total;
  int pick = k - 1;
  double acc = 0.0;
  for (int j = 0; j < k; ++j) {
    acc += sc.prob[static_cast<std::size_t>(j)];
    if (u < acc) { pick = j; break; }
  }
  st.labels.c[static_cast<std::size_t>(i)] = pick;
}

std::vector<BlockStats> block_stats(const Partition& part, std::span<const double> y) {
  std::vector<BlockStats> out(part.blocks.size());
  for (std::size_t b = 0; b < part.blocks.size(); ++b)
    for (int idx : part.blocks[b]) out[b].add(y[static_cast<std::size_t>(idx)]);
  return out;
}

}  // namespace

void ModelConfig::validate() const {
  if (!std::isfinite(mu0)) throw std::invalid_argument("ModelConfig: mu0 must be finite");
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
    throw std::invalid_argument("ModelConfig: sigma0 must be positive");
  if (!(a0 > 0.0) || !(b0 > 0.0))
    throw std::invalid_argument("ModelConfig: a0 and b0 must be positive");
}

double log_marginal_block(const BlockStats& st, const ModelConfig& cfg, double tau2) {
  if (st.n < 1) throw std::domain_error("log_marginal_block: empty block");
  if (!(tau2 > 0.0)) throw std::domain_error("log_marginal_block: tau2 must be positive");
  const double s02 = cfg.sigma0 * cfg.sigma0;
  const double prec = 1.0 / s02 + st.n / tau2;
  const double m1 = cfg.mu0 / s02 + st.sum / tau2;
  return -st.n * kHalfLog2Pi - 0.5 * st.n * std::log(tau2) -
         0.5 * std::log1p(st.n * s02 / tau2) - st.sumsq / (2.0 * tau2) -
         cfg.mu0 * cfg.mu0 / (2.0 * s02) + m1 * m1 / (2.0 * prec);
}

double log_marginal_block(std::span<const double> y_block, const ModelConfig& cfg,
                          double tau2) {
  BlockStats st;
  for (double v : y_block) st.add(v);
  return log_marginal_block(st, cfg, tau2);
}

std::vector<double> label_full_conditional(int i, const GibbsState& state,
                                           std::span<const double> y,
                                           const ModelConfig& cfg) {
  const int m = static_cast<int>(y.size());
  if (i < 0 || i >= m) throw std::invalid_argument("label_full_conditional: index out of range");
  if (i == 0) return {1.0};
  LabelScratch sc;
  sc.resize(m);
  std::vector<double> logw;
  int k = label_log_weights(i, state, y, cfg, sc, logw);
  double mx = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& v : logw) { v = std::exp(v - mx); total += v; }
  for (double& v : logw) v /= total;
  logw.resize(static_cast<std::size_t>(k));
  return logw;
}

BetaParams weight_full_conditional(int i, const PairingLabels& labels,
                                   const BetaSchedule& s) {
  const int m = labels.size();
  if (i < 0 || i >= m) throw std::invalid_argument("weight_full_conditional: index out of range");
  auto [a, b] = s.params(i + 1);
  int survivals = 0, hits = 0;
  for (int j = i + 1; j < m; ++j) {
    int cj = labels.c[static_cast<std::size_t>(j)];
    if (cj < i || cj == j) ++survivals;
    else if (cj == i) ++hits;
  }
  return {a + survivals, b + hits};
}

std::vector<double> means_update(const GibbsState& state, std::span<const double> y,
                                 const ModelConfig& cfg, RngStream& rng) {
  Partition part = partition_of(state.labels);
  auto stats = block_stats(part, y);
  const double s02 = cfg.sigma0 * cfg.sigma0;
  std::vector<double> out(stats.size());
  for (std::size_t b = 0; b < stats.size(); ++b) {
    double prec = 1.0 / s02 + stats[b].n / state.tau2;
    double m1 = cfg.mu0 / s02 + stats[b].sum / state.tau2;
    out[b] = rng.normal(m1 / prec, std::sqrt(1.0 / prec));
  }
  return out;
}

double tau2_update(const GibbsState& state, std::span<const double> y,
                   const ModelConfig& cfg, RngStream& rng, Tau2Mode mode) {
  Partition part = partition_of(state.labels);
  const std::size_t J = part.blocks.size();
  if (state.means.size() != J)
    throw std::logic_error("tau2_update: means not aligned with partition");
  const int N = static_cast<int>(y.size());
  if (mode == Tau2Mode::kPooledEm && N > static_cast<int>(J)) {
    double pooled = 0.0;
    for (std::size_t b = 0; b < J; ++b) {
      double rss = 0.0;
      for (int idx : part.blocks[b]) {
        double d = y[static_cast<std::size_t>(idx)] - state.means[b];
        rss += d * d;
      }
      int nb = static_cast<int>(part.blocks[b].size());
      double tb = rng.inv_gamma(cfg.a0 + 0.5 * nb, cfg.b0 + 0.5 * rss);
      pooled += (nb - 1) * tb;
    }
    return pooled / (N - static_cast<int>(J));
  }
  double rss = 0.0;
  for (std::size_t b = 0; b < J; ++b)
    for (int idx : part.blocks[b]) {
      double d = y[static_cast<std::size_t>(idx)] - state.means[b];
      rss += d * d;
    }
  return rng.inv_gamma(cfg.a0 + 0.5 * N, cfg.b0 + 0.5 * rss);
}

void gibbs_sweep(GibbsState& state, std::span<const double> y, const ModelConfig& cfg,
                 RngStream& rng) {
  const int m = static_cast<int>(y.size());
  if (state.labels.size() != m) throw std::invalid_argument("gibbs_sweep: state/data size mismatch");
  LabelScratch sc;
  sc.resize(m);
  std::vector<double> logw;
  if (cfg.random_scan) {
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    for (int i = m - 1; i >= 1; --i) {
      int j = std::min(i, static_cast<int>(rng.uniform() * (i + 1)));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (int i : order) update_label(i, state, y, cfg, sc, logw, rng);
  } else {
    for (int i = 0; i < m; ++i) update_label(i, state, y, cfg, sc, logw, rng);
  }
  if (!cfg.schedule.deterministic()) {
    state.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      BetaParams bp = weight_full_conditional(i, state.labels, cfg.schedule);
      state.weights[static_cast<std::size_t>(i)] = rng.beta(bp.a, bp.b);
    }
  }
  state.means = means_update(state, y, cfg, rng);
  state.tau2 = tau2_update(state, y, cfg, rng, cfg.tau2_mode);
}

GibbsState init_state(int m, const ModelConfig& cfg, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("init_state: m must be >= 1");
  cfg.validate();
  GibbsState st;
  if (!cfg.schedule.deterministic()) st.weights = sample_weights(cfg.schedule, m, rng);
  st.labels.c.assign(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    if (cfg.all_new_init) {
      st.labels.c[static_cast<std::size_t>(i)] = i;
      continue;
    }
    int pick = i;
    for (int l = i - 1; l >= 0; --l)
      if (!rng.bernoulli(weight_at(st, cfg, l))) { pick = l; break; }
    st.labels.c[static_cast<std::size_t>(i)] = pick;
  }
  st.tau2 = rng.inv_gamma(cfg.a0, cfg.b0);
  return st;
}

double predict_next(const GibbsState& state, std::span<const double> y,
                    const ModelConfig& cfg, RngStream& rng) {
  const int m = static_cast<int>(y.size());
  if (state.labels.size() != m) throw std::invalid_argument("predict_next: state/data size mismatch");
  const double tau = std::sqrt(state.tau2);
  int pick = m;
  for (int l = m - 1; l >= 0; --l)
    if (!rng.bernoulli(weight_at(state, cfg, l))) { pick = l; break; }
  if (pick == m) {
    double mu = rng.normal(cfg.mu0, cfg.sigma0);
    return rng.normal(mu, tau);
  }
  Partition part = partition_of(state.labels);
  if (state.means.size() != part.blocks.size())
    throw std::logic_error("predict_next: means not aligned with partition");
  auto ass = part.assignments();
  return rng.normal(state.means[static_cast<std::size_t>(ass[static_cast<std::size_t>(pick)])], tau);
}

Trace run_chain(std::span<const double> y, const ModelConfig& cfg, int iters,
                int burnin, int thin, std::uint64_t seed) {
  cfg.validate();
  if (y.empty()) throw std::invalid_argument("run_chain: empty data");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("run_chain: non-finite observation");
  if (burnin < 0 || thin < 1) throw std::invalid_argument("run_chain: bad burnin/thin");
  if (iters <= burnin) throw std::invalid_argument("run_chain: no post-burnin draws");
  const int m = static_cast<int>(y.size());
  RngStream rng(seed);
  GibbsState state = init_state(m, cfg, rng);
  Trace trace;
  trace.m = m;
  trace.iters = iters;
  trace.burnin = burnin;
  trace.thin = thin;
  trace.seed = seed;
  trace.entries.reserve(static_cast<std::size_t>((iters - burnin + thin - 1) / thin));
  for (int it = 1; it <= iters; ++it) {
    gibbs_sweep(state, y, cfg, rng);
    if (it > burnin && (it - burnin - 1) % thin == 0) {
      Partition part = partition_of(state.labels);
      auto stats = block_stats(part, y);
      double lm = 0.0;
      for (const auto& st : stats) lm += log_marginal_block(st, cfg, state.tau2);
      TraceEntry e;
      e.iter = it;
      e.K = part.block_count();
      e.assignments = part.assignments();
      e.tau2 = state.tau2;
      e.means = state.means;
      e.log_marginal = lm;
      e.y_pred = predict_next(state, y, cfg, rng);
      trace.entries.push_back(std::move(e));
    }
  }
  return trace;
}

std::vector<double> coclustering_matrix(const Trace& trace) {
  const int m = trace.m;
  std::vector<double> cm(static_cast<std::size_t>(m) * m, 0.0);
  for (const auto& e : trace.entries)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b)
        if (e.assignments[static_cast<std::size_t>(a)] == e.assignments[static_cast<std::size_t>(b)]) {
          cm[static_cast<std::size_t>(a) * m + b] += 1.0;
          if (a != b) cm[static_cast<std::size_t>(b) * m + a] += 1.0;
        }
  double inv = trace.entries.empty() ? 0.0 : 1.0 / trace.entries.size();
  for (double& v : cm) v *= inv;
  return cm;
}

Partition point_partition(const Trace& trace) {
  if (trace.entries.empty()) throw std::invalid_argument("point_partition: empty trace");
  const int m = trace.m;
  auto cm = coclustering_matrix(trace);
  double best = 0.0;
  const TraceEntry* pick = nullptr;
  for (const auto& e : trace.entries) {
    double score = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        double same = e.assignments[static_cast<std::size_t>(a)] ==
                              e.assignments[static_cast<std::size_t>(b)]
                          ? 1.0
                          : 0.0;
        double d = same - cm[static_cast<std::size_t>(a) * m + b];
        score += d * d;
      }
    if (pick == nullptr || score < best) {
      best = score;
      pick = &e;
    }
  }
  return Partition::from_assignments(pick->assignments);
}

AccuracyPair accuracy(const Partition& est, const Partition& truth) {
  const int n = est.size();
  if (n != truth.size()) throw std::invalid_argument("accuracy: size mismatch");
  auto ae = est.assignments();
  auto at = truth.assignments();
  AccuracyPair out;
  if (n < 2) {
    out.pairwise = 1.0;
  } else {
    long long concordant = 0, pairs = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        ++pairs;
        bool se = ae[static_cast<std::size_t>(a)] == ae[static_cast<std::size_t>(b)];
        bool st = at[static_cast<std::size_t>(a)] == at[static_cast<std::size_t>(b)];
        if (se == st) ++concordant;
      }
    out.pairwise = static_cast<double>(concordant) / static_cast<double>(pairs);
  }
  // Greedy maximum-overlap matching of estimated to true blocks.
  const int E = est.block_count(), T = truth.block_count();
  struct Cell { int count, e, t; };
  std::vector<Cell> cells;
  std::vector<std::vector<int>> overlap(static_cast<std::size_t>(E),
                                        std::vector<int>(static_cast<std::size_t>(T), 0));
  for (int idx = 0; idx < n; ++idx)
    ++overlap[static_cast<std::size_t>(ae[static_cast<std::size_t>(idx)])]
             [static_cast<std::size_t>(at[static_cast<std::size_t>(idx)])];
  for (int e = 0; e < E; ++e)
    for (int t = 0; t < T; ++t)
      if (overlap[static_cast<std::size_t>(e)][static_cast<std::size_t>(t)] > 0)
        cells.push_back({overlap[static_cast<std::size_t>(e)][static_cast<std::size_t>(t)], e, t});
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    if (x.count != y.count) return x.count > y.count;
    if (x.e != y.e) return x.e < y.e;
    return x.t < y.t;
  });
  std::vector<char> eu(static_cast<std::size_t>(E), 0), tu(static_cast<std::size_t>(T), 0);
  long long hit = 0;
  for (const auto& c : cells) {
    if (eu[static_cast<std::size_t>(c.e)] || tu[static_cast<std::size_t>(c.t)]) continue;
    eu[static_cast<std::size_t>(c.e)] = tu[static_cast<std::size_t>(c.t)] = 1;
    hit += c.count;
  }
  out.matched = static_cast<double>(hit) / static_cast<double>(n);
  return out;
}

FitSummary fit_summary(const Trace& trace, double holdout, const Partition* truth) {
  if (trace.entries.empty()) throw std::invalid_argument("fit_summary: empty trace");
  FitSummary out;
  out.point_estimate = point_partition(trace);
  double ksum = 0.0, tsum = 0.0, bias = 0.0;
  for (const auto& e : trace.entries) {
    ksum += e.K;
    tsum += std::sqrt(e.tau2);
    bias += std::abs(holdout - e.y_pred);
  }
  const double inv = 1.0 / trace.entries.size();
  out.mean_K = ksum * inv;
  out.tau_posterior_mean = tsum * inv;
  if (std::isfinite(holdout)) out.predictive_bias = bias * inv;
  if (truth != nullptr) {
    auto acc = accuracy(out.point_estimate, *truth);
    out.acc_pairwise = acc.pairwise;
    out.acc_matched = acc.matched;
  }
  return out;
}

std::string trace_to_json(const Trace& trace) {
  nlohmann::json j;
  j["m"] = trace.m;
  j["iters"] = trace.iters;
  j["burnin"] = trace.burnin;
  j["thin"] = trace.thin;
  j["seed"] = trace.seed;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : trace.entries) {
    nlohmann::json je;
    je["iter"] = e.iter;
    je["K"] = e.K;
    je["assignments"] = e.assignments;
    je["tau2"] = e.tau2;
    je["means"] = e.means;
    je["log_marginal"] = e.log_marginal;
    je["y_pred"] = e.y_pred;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j.dump(2);
}

}  // namespace betagos

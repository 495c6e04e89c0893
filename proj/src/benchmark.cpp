#include "betagos/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace betagos {

namespace {

struct MeanSd {
  double mean = 0.0, sd = 0.0;
};

MeanSd mean_sd(const std::vector<ReplicateResult>& rows, double ReplicateResult::*field) {
  MeanSd out;
  if (rows.empty()) return out;
  for (const auto& r : rows) out.mean += r.*field;
  out.mean /= rows.size();
  if (rows.size() > 1) {
    double ss = 0.0;
    for (const auto& r : rows) {
      double d = r.*field - out.mean;
      ss += d * d;
    }
    out.sd = std::sqrt(ss / (rows.size() - 1));
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FitterSpec FitterSpec::parse(const std::string& text) {
  FitterSpec out;
  out.name = text;
  if (text.rfind("betagos:", 0) == 0) {
    out.model.schedule = BetaSchedule::parse(text.substr(8));
  } else if (text.rfind("dp:", 0) == 0) {
    out.model.schedule = BetaSchedule::parse(text);
  } else {
    // bare schedule string
    out.model.schedule = BetaSchedule::parse(text);
  }
  return out;
}

void BenchmarkConfig::validate() const {
  if (generators.empty() || fitters.empty())
    throw std::invalid_argument("benchmark: need at least one generator and one fitter");
  if (replicates < 1) throw std::invalid_argument("benchmark: replicates must be >= 1");
  if (n_fit < 2) throw std::invalid_argument("benchmark: n_fit must be >= 2");
  if (iters <= burnin || burnin < 0 || thin < 1)
    throw std::invalid_argument("benchmark: bad iters/burnin/thin");
  if (threads < 1) throw std::invalid_argument("benchmark: threads must be >= 1");
  for (const auto& g : generators) g.validate();
  for (const auto& f : fitters) f.model.validate();
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  cfg.validate();
  const int G = static_cast<int>(cfg.generators.size());
  const int F = static_cast<int>(cfg.fitters.size());
  const int R = cfg.replicates;
  BenchmarkReport report;
  report.replicates = R;
  report.n_fit = cfg.n_fit;
  report.iters = cfg.iters;
  report.burnin = cfg.burnin;
  report.thin = cfg.thin;
  report.seed = cfg.seed;
  report.raw.assign(static_cast<std::size_t>(G) * F,
                    std::vector<ReplicateResult>(static_cast<std::size_t>(R)));

  const RngStream master(cfg.seed);
  // One work item = one dataset (generator x replicate), fitted by every
  // fitter so the per-replicate comparisons are paired.
  std::atomic<int> next{0};
  const int items = G * R;
  auto worker = [&] {
    for (;;) {
      int item = next.fetch_add(1);
      if (item >= items) return;
      const int g = item / R;
      const int r = item % R;
      GeneratorSpec gen = cfg.generators[static_cast<std::size_t>(g)];
      gen.n = cfg.n_fit + 1;
      RngStream data_rng = master.split(static_cast<std::uint64_t>(g) * R + r);
      LabeledSeries series = generate(gen, data_rng);
      std::span<const double> yfit(series.y.data(), static_cast<std::size_t>(cfg.n_fit));
      const double holdout = series.y[static_cast<std::size_t>(cfg.n_fit)];
      auto truth_ass = series.truth.assignments();
      Partition truth = Partition::from_assignments(
          std::span<const int>(truth_ass.data(), static_cast<std::size_t>(cfg.n_fit)));
      for (int f = 0; f < F; ++f) {
        std::uint64_t chain_seed =
            master.split(static_cast<std::uint64_t>(g) * R + r).split(static_cast<std::uint64_t>(f) + 1).seed();
        Trace trace = run_chain(yfit, cfg.fitters[static_cast<std::size_t>(f)].model,
                                cfg.iters, cfg.burnin, cfg.thin, chain_seed);
        FitSummary fs = fit_summary(trace, holdout, &truth);
        ReplicateResult& slot = report.raw[static_cast<std::size_t>(g) * F + f]
                                          [static_cast<std::size_t>(r)];
        slot.mean_K = fs.mean_K;
        slot.acc_matched = fs.acc_matched;
        slot.acc_pairwise = fs.acc_pairwise;
        slot.bias = fs.predictive_bias;
        slot.tau = fs.tau_posterior_mean;
      }
    }
  };
  if (cfg.threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(cfg.threads));
    for (int t = 0; t < cfg.threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  report.cells.reserve(static_cast<std::size_t>(G) * F);
  for (int g = 0; g < G; ++g)
    for (int f = 0; f < F; ++f) {
      const auto& rows = report.raw[static_cast<std::size_t>(g) * F + f];
      CellStats cell;
      cell.generator = cfg.generators[static_cast<std::size_t>(g)].label();
      cell.fitter = cfg.fitters[static_cast<std::size_t>(f)].name;
      cell.replicates = R;
      MeanSd k = mean_sd(rows, &ReplicateResult::mean_K);
      MeanSd a = mean_sd(rows, &ReplicateResult::acc_matched);
      MeanSd p = mean_sd(rows, &ReplicateResult::acc_pairwise);
      MeanSd b = mean_sd(rows, &ReplicateResult::bias);
      MeanSd t = mean_sd(rows, &ReplicateResult::tau);
      cell.k_mean = k.mean; cell.k_sd = k.sd;
      cell.acc_mean = a.mean; cell.acc_sd = a.sd;
      cell.pair_mean = p.mean; cell.pair_sd = p.sd;
      cell.bias_mean = b.mean; cell.bias_sd = b.sd;
      cell.tau_mean = t.mean; cell.tau_sd = t.sd;
      report.cells.push_back(std::move(cell));
    }
  return report;
}

std::string BenchmarkReport::to_json() const {
  nlohmann::json j;
  j["replicates"] = replicates;
  j["n_fit"] = n_fit;
  j["iters"] = iters;
  j["burnin"] = burnin;
  j["thin"] = thin;
  j["seed"] = seed;
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json jc;
    jc["generator"] = c.generator;
    jc["fitter"] = c.fitter;
    jc["replicates"] = c.replicates;
    jc["K"] = {{"mean", c.k_mean}, {"sd", c.k_sd}};
    jc["acc_matched"] = {{"mean", c.acc_mean}, {"sd", c.acc_sd}};
    jc["acc_pairwise"] = {{"mean", c.pair_mean}, {"sd", c.pair_sd}};
    jc["pred_bias"] = {{"mean", c.bias_mean}, {"sd", c.bias_sd}};
    jc["tau"] = {{"mean", c.tau_mean}, {"sd", c.tau_sd}};
    cells_json.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells_json);
  return j.dump(2);
}

void BenchmarkReport::write_summary_csv(std::ostream& os) const {
  os << "generator,fitter,replicates,k_mean,k_sd,acc_matched_mean,acc_matched_sd,"
        "acc_pairwise_mean,acc_pairwise_sd,pred_bias_mean,pred_bias_sd,tau_mean,tau_sd\n";
  for (const auto& c : cells)
    os << c.generator << ',' << c.fitter << ',' << c.replicates << ',' << fmt(c.k_mean)
       << ',' << fmt(c.k_sd) << ',' << fmt(c.acc_mean) << ',' << fmt(c.acc_sd) << ','
       << fmt(c.pair_mean) << ',' << fmt(c.pair_sd) << ',' << fmt(c.bias_mean) << ','
       << fmt(c.bias_sd) << ',' << fmt(c.tau_mean) << ',' << fmt(c.tau_sd) << '\n';
}

void BenchmarkReport::write_raw_csv(std::ostream& os) const {
  os << "cell,replicate,mean_K,acc_matched,acc_pairwise,pred_bias,tau\n";
  for (std::size_t cell = 0; cell < raw.size(); ++cell)
    for (std::size_t r = 0; r < raw[cell].size(); ++r) {
      const auto& row = raw[cell][r];
      os << cell << ',' << r << ',' << fmt(row.mean_K) << ',' << fmt(row.acc_matched)
         << ',' << fmt(row.acc_pairwise) << ',' << fmt(row.bias) << ',' << fmt(row.tau)
         << '\n';
    }
}

}  // namespace betagos

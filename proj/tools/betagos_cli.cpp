// Command-line surface: simulate | fit | moments | call | benchmark.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "betagos/benchmark.hpp"
#include "betagos/cgh.hpp"
#include "betagos/core.hpp"
#include "betagos/csv.hpp"
#include "betagos/generators.hpp"
#include "betagos/gibbs.hpp"
#include "betagos/manifest.hpp"
#include "betagos/moments.hpp"

namespace fs = std::filesystem;
using namespace betagos;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = resolve from env / hardware
  std::string out_dir = ".";
  std::string format = "both";  // csv | json | both
};

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("BETAGOS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

bool want_csv(const GlobalOpts& g) { return g.format != "json"; }
bool want_json(const GlobalOpts& g) { return g.format != "csv"; }

fs::path out_path(const GlobalOpts& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

void write_file(const fs::path& p, const std::string& content, RunManifest& man) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
  os.close();
  man.output_digests[p.filename().string()] = fnv1a_hex(content);
}

void finish_manifest(const GlobalOpts& g, RunManifest& man) {
  std::ofstream os(out_path(g, "manifest_" + man.subcommand + ".json"), std::ios::binary);
  os << man.to_json() << '\n';
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> read_observations(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  CsvReader reader(is);
  std::vector<std::string> f;
  std::vector<double> y;
  bool first = true;
  while (reader.next(f)) {
    if (f.size() > 2) reader.fail_columns(2, f.size());
    const std::string& field = f.back();
    if (first) {
      first = false;
      // tolerate a header row
      char* end = nullptr;
      std::strtod(field.c_str(), &end);
      if (end == field.c_str()) continue;
    }
    y.push_back(reader.as_double(field, "observation"));
  }
  if (y.empty()) throw std::runtime_error("no observations in " + path.string());
  return y;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const GlobalOpts& g, const std::string& kind, int n, int replicates,
                 double mu0, double sigma0, double tau, const std::vector<double>& pi,
                 int k_lag, double p_new, const std::vector<double>& p_recent,
                 int switch_at) {
  GeneratorSpec spec = GeneratorSpec::parse(kind);
  spec.n = n;
  spec.mu0 = mu0;
  spec.sigma0 = sigma0;
  spec.tau = tau;
  if (!pi.empty()) spec.pi = pi;
  spec.k_lag = k_lag;
  spec.p_new = p_new;
  if (!p_recent.empty()) spec.p_recent = p_recent;
  spec.switch_at = switch_at;
  spec.validate();

  RunManifest man;
  man.subcommand = "simulate";
  man.seed = g.seed;
  man.config = {{"kind", spec.label()}, {"n", n},     {"replicates", replicates},
                {"mu0", mu0},          {"sigma0", sigma0}, {"tau", tau},
                {"format", g.format}};

  RngStream master(g.seed);
  nlohmann::json truth_json = nlohmann::json::array();
  for (int r = 0; r < replicates; ++r) {
    RngStream rng = master.split(static_cast<std::uint64_t>(r));
    man.substreams["replicate_" + std::to_string(r)] = rng.seed();
    LabeledSeries series = generate(spec, rng);
    auto truth = series.truth.assignments();
    if (want_csv(g)) {
      std::ostringstream os;
      os << (series.states.empty() ? "index,y,truth\n" : "index,y,truth,state\n");
      for (int i = 0; i < spec.n; ++i) {
        os << (i + 1) << ',' << fmt17(series.y[static_cast<std::size_t>(i)]) << ','
           << (truth[static_cast<std::size_t>(i)] + 1);
        if (!series.states.empty()) os << ',' << (series.states[static_cast<std::size_t>(i)] + 1);
        os << '\n';
      }
      write_file(out_path(g, "sim_r" + std::to_string(r) + ".csv"), os.str(), man);
    }
    nlohmann::json jr;
    jr["replicate"] = r;
    for (auto& t : truth) ++t;  // 1-based in files
    jr["truth"] = truth;
    truth_json.push_back(std::move(jr));
  }
  if (want_json(g)) {
    nlohmann::json j;
    j["kind"] = spec.label();
    j["n"] = n;
    j["replicates"] = truth_json;
    write_file(out_path(g, "sim_truth.json"), j.dump(2) + "\n", man);
  }
  finish_manifest(g, man);
  return 0;
}

// --------------------------------------------------------------------- fit

int cmd_fit(const GlobalOpts& g, const std::string& input, const std::string& schedule,
            double mu0, double sigma0, double a0, double b0, int iters, int burnin,
            int thin, int chains, const std::string& tau2_mode, bool full_trace) {
  ModelConfig cfg;
  cfg.schedule = BetaSchedule::parse(schedule);
  cfg.mu0 = mu0;
  cfg.sigma0 = sigma0;
  cfg.a0 = a0;
  cfg.b0 = b0;
  if (tau2_mode == "pooled_em") cfg.tau2_mode = Tau2Mode::kPooledEm;
  else if (tau2_mode == "global_conjugate") cfg.tau2_mode = Tau2Mode::kGlobalConjugate;
  else throw std::invalid_argument("unknown --tau2-mode: " + tau2_mode);
  cfg.validate();
  if (chains < 1) throw std::invalid_argument("--chains must be >= 1");

  auto y = read_observations(input);

  RunManifest man;
  man.subcommand = "fit";
  man.seed = g.seed;
  man.config = {{"input", input},   {"schedule", cfg.schedule.label()},
                {"mu0", mu0},       {"sigma0", sigma0},
                {"a0", a0},         {"b0", b0},
                {"iters", iters},   {"burnin", burnin},
                {"thin", thin},     {"chains", chains},
                {"tau2_mode", tau2_mode}, {"format", g.format}};
  man.input_digests[fs::path(input).filename().string()] = fnv1a_file_hex(input);

  RngStream master(g.seed);
  Trace merged;
  std::vector<Trace> traces;
  for (int c = 0; c < chains; ++c) {
    std::uint64_t s = master.split(static_cast<std::uint64_t>(c)).seed();
    man.substreams["chain_" + std::to_string(c)] = s;
    traces.push_back(run_chain(y, cfg, iters, burnin, thin, s));
  }
  merged = traces.front();
  for (int c = 1; c < chains; ++c)
    merged.entries.insert(merged.entries.end(), traces[static_cast<std::size_t>(c)].entries.begin(),
                          traces[static_cast<std::size_t>(c)].entries.end());

  FitSummary fsy = fit_summary(merged);
  if (want_json(g)) {
    nlohmann::json j;
    j["n"] = merged.m;
    j["chains"] = chains;
    j["mean_K"] = fsy.mean_K;
    j["tau_posterior_mean"] = fsy.tau_posterior_mean;
    j["point_partition_K"] = fsy.point_estimate.block_count();
    auto ass = fsy.point_estimate.assignments();
    for (auto& a : ass) ++a;
    j["point_partition"] = ass;
    write_file(out_path(g, "fit_summary.json"), j.dump(2) + "\n", man);
    if (full_trace) write_file(out_path(g, "fit_trace.json"), trace_to_json(merged) + "\n", man);
  }
  if (want_csv(g)) {
    auto cm = coclustering_matrix(merged);
    std::ostringstream os;
    for (int a = 0; a < merged.m; ++a) {
      for (int b = 0; b < merged.m; ++b) {
        if (b) os << ',';
        os << fmt17(cm[static_cast<std::size_t>(a) * merged.m + b]);
      }
      os << '\n';
    }
    write_file(out_path(g, "fit_coclustering.csv"), os.str(), man);
  }
  finish_manifest(g, man);
  return 0;
}

// ----------------------------------------------------------------- moments

int cmd_moments(const GlobalOpts& g, const std::string& schedule, int n, int max_m,
                double gamma, std::vector<double> mgf_t) {
  BetaSchedule s = BetaSchedule::parse(schedule);
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  if (max_m < 1) throw std::invalid_argument("--max-m must be >= 1");

  RunManifest man;
  man.subcommand = "moments";
  man.seed = g.seed;
  man.config = {{"schedule", s.label()}, {"n", n}, {"max_m", max_m}, {"gamma", gamma},
                {"format", g.format}};

  if (want_csv(g)) {
    std::ostringstream os;
    os << "n,expected_r,expected_K\n";
    for (int j = 1; j <= n; ++j)
      os << j << ',' << fmt17(expected_r(s, j)) << ',' << fmt17(expected_K(s, j)) << '\n';
    write_file(out_path(g, "moments_growth.csv"), os.str(), man);

    MomentTable table = moment_table(s, n, max_m);
    std::ostringstream os2;
    os2 << "m,phi,falling_moment,raw_moment\n";
    for (int m = 1; m <= max_m; ++m) {
      os2 << m << ',';
      if (m < static_cast<int>(table.phi.size()))
        os2 << fmt17(table.phi[static_cast<std::size_t>(m)]);
      os2 << ',';
      if (m <= static_cast<int>(table.falling_moments.size()))
        os2 << fmt17(table.falling_moments[static_cast<std::size_t>(m - 1)]);
      os2 << ',' << fmt17(table.raw_moments[static_cast<std::size_t>(m - 1)]) << '\n';
    }
    write_file(out_path(g, "moments_table.csv"), os2.str(), man);
  }
  if (want_json(g)) {
    nlohmann::json j;
    j["schedule"] = s.label();
    j["n"] = n;
    LimitSummary lim = limit_summary(s, max_m);
    j["limit_family"] = lim.family;
    nlohmann::json vals = nlohmann::json::object();
    for (auto [k, v] : lim.values) vals[std::to_string(k)] = v;
    j["limit_moments"] = vals;
    if (gamma > 0.0 && gamma < 1.0) {
      j["recent_window_gamma"] = gamma;
      j["recent_window"] = elicit_recent_window(s, n, gamma);
    }
    if (!mgf_t.empty() && s.family() == ScheduleFamily::kConstant) {
      auto [a, b] = s.params(1);
      nlohmann::json mg = nlohmann::json::array();
      for (double t : mgf_t) {
        MgfLimit lm = limit_mgf(a, b, t, 400);
        mg.push_back({{"t", t},
                      {"value", lm.value},
                      {"truncation_bound", lm.truncation_bound},
                      {"terms", lm.terms_used}});
      }
      j["limit_mgf"] = mg;
    }
    write_file(out_path(g, "moments_limits.json"), j.dump(2) + "\n", man);
  }
  finish_manifest(g, man);
  return 0;
}

// -------------------------------------------------------------------- call

struct SampleChromosome {
  std::string sample;
  std::string chromosome;
  CloneSeries series;
};

std::vector<SampleChromosome> read_cgh_long(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  CsvReader reader(is);
  std::vector<std::string> f;
  bool first = true;
  bool has_sample = false;
  std::vector<SampleChromosome> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  while (reader.next(f)) {
    if (first) {
      first = false;
      if (f.size() != 5 && f.size() != 6) reader.fail_columns(5, f.size());
      has_sample = f.size() == 6;
      if (f[0] == "clone_id" || f[0] == "sample_id") continue;
    }
    if (f.size() != (has_sample ? 6u : 5u)) reader.fail_columns(has_sample ? 6 : 5, f.size());
    std::size_t off = has_sample ? 1 : 0;
    std::string sample = has_sample ? f[0] : "sample1";
    CloneRecord rec;
    rec.clone_id = f[off + 0];
    rec.chromosome = f[off + 1];
    rec.kb_start = reader.as_double(f[off + 2], "kb_start");
    rec.kb_end = reader.as_double(f[off + 3], "kb_end");
    rec.log2_ratio = reader.as_double(f[off + 4], "log2_ratio");
    auto key = std::make_pair(sample, rec.chromosome);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, groups.size());
      groups.push_back({sample, rec.chromosome, {}});
      it = index.find(key);
    }
    groups[it->second].series.records.push_back(std::move(rec));
  }
  if (groups.empty()) throw std::runtime_error("no clone records in " + path.string());
  for (auto& grp : groups) grp.series.validate();
  return groups;
}

int cmd_call(const GlobalOpts& g, const std::string& input, double epsilon,
             double call_freq, double amp_sd_mult, double fdr, int iters, int burnin,
             int thin, const std::string& schedule, double sigma0, double a0, double b0,
             bool per_clone_null) {
  CallConfig ccfg;
  ccfg.epsilon = epsilon;
  ccfg.call_freq = call_freq;
  ccfg.amp_sd_mult = amp_sd_mult;
  ccfg.fdr_level = fdr;
  ccfg.per_clone_null = per_clone_null;
  ccfg.validate();
  ModelConfig model = cgh_default_model();
  model.schedule = BetaSchedule::parse(schedule);
  model.sigma0 = sigma0;
  model.a0 = a0;
  model.b0 = b0;
  model.validate();

  auto groups = read_cgh_long(input);

  RunManifest man;
  man.subcommand = "call";
  man.seed = g.seed;
  man.config = {{"input", input},        {"epsilon", epsilon},
                {"call_freq", call_freq}, {"amp_sd_mult", amp_sd_mult},
                {"fdr", fdr},            {"iters", iters},
                {"burnin", burnin},      {"thin", thin},
                {"schedule", model.schedule.label()}, {"sigma0", sigma0},
                {"a0", a0},              {"b0", b0},
                {"per_clone_null", per_clone_null}, {"format", g.format}};
  man.input_digests[fs::path(input).filename().string()] = fnv1a_file_hex(input);

  RngStream master(g.seed);
  std::ostringstream calls_csv, regions_csv;
  calls_csv << "sample_id,clone_id,chromosome,kb_start,kb_end,status,call_frequency,"
               "freq_gain,freq_loss,freq_high\n";
  regions_csv << "sample_id,chromosome,first_clone,last_clone,kb_start,kb_end,status,"
                 "p_null,q,significant\n";
  std::map<std::string, std::vector<CallResult>> per_sample;
  std::vector<std::string> sample_order;
  const CloneSeries* layout = nullptr;
  bool same_layout = true;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& grp = groups[gi];
    std::uint64_t s = master.split(gi).seed();
    man.substreams[grp.sample + "_chr" + grp.chromosome] = s;
    CallResult res = run_cgh_series(grp.series, ccfg, model, iters, burnin, thin, s);
    for (int i = 0; i < grp.series.size(); ++i) {
      const auto& rec = grp.series.records[static_cast<std::size_t>(i)];
      const auto& call = res.clones[static_cast<std::size_t>(i)];
      calls_csv << grp.sample << ',' << rec.clone_id << ',' << rec.chromosome << ','
                << fmt17(rec.kb_start) << ',' << fmt17(rec.kb_end) << ','
                << to_string(call.status) << ',' << fmt17(call.call_frequency) << ','
                << fmt17(call.freq_gain) << ',' << fmt17(call.freq_loss) << ','
                << fmt17(call.freq_high) << '\n';
    }
    for (const auto& reg : res.regions) {
      const auto& a = grp.series.records[static_cast<std::size_t>(reg.first)];
      const auto& b = grp.series.records[static_cast<std::size_t>(reg.last)];
      regions_csv << grp.sample << ',' << grp.chromosome << ',' << a.clone_id << ','
                  << b.clone_id << ',' << fmt17(a.kb_start) << ',' << fmt17(b.kb_end)
                  << ',' << to_string(reg.status) << ',' << fmt17(reg.p_null) << ','
                  << fmt17(reg.q) << ',' << (reg.significant ? 1 : 0) << '\n';
    }
    if (per_sample.find(grp.sample) == per_sample.end()) sample_order.push_back(grp.sample);
    per_sample[grp.sample].push_back(std::move(res));
    if (layout == nullptr) layout = &grp.series;
    else if (grp.series.size() != layout->size()) same_layout = false;
  }
  if (want_csv(g)) {
    write_file(out_path(g, "cgh_calls.csv"), calls_csv.str(), man);
    write_file(out_path(g, "cgh_regions.csv"), regions_csv.str(), man);
    // Genome-wide frequencies need every sample to cover the same clones.
    if (sample_order.size() >= 1 && same_layout &&
        per_sample.begin()->second.size() * sample_order.size() == groups.size()) {
      std::vector<CallResult> flat;
      bool aligned = true;
      for (const auto& name : sample_order) {
        const auto& results = per_sample[name];
        if (results.size() != per_sample[sample_order.front()].size()) { aligned = false; break; }
        CallResult joined;
        for (const auto& r : results)
          joined.clones.insert(joined.clones.end(), r.clones.begin(), r.clones.end());
        flat.push_back(std::move(joined));
      }
      if (aligned) {
        std::size_t len = flat.front().clones.size();
        for (const auto& r : flat) aligned = aligned && r.clones.size() == len;
        if (aligned) {
          auto freq = aberration_frequency(flat);
          std::ostringstream os;
          os << "clone_index,freq_gain,freq_loss,freq_high\n";
          for (std::size_t i = 0; i < freq.size(); ++i)
            os << (i + 1) << ',' << fmt17(freq[i].gain) << ',' << fmt17(freq[i].loss)
               << ',' << fmt17(freq[i].high_amp) << '\n';
          write_file(out_path(g, "cgh_frequencies.csv"), os.str(), man);
        }
      }
    }
  }
  finish_manifest(g, man);
  return 0;
}

// --------------------------------------------------------------- benchmark

int cmd_benchmark(const GlobalOpts& g, const std::vector<std::string>& generators,
                  const std::vector<std::string>& fitters, int replicates, int n_fit,
                  int iters, int burnin, int thin, int threads) {
  BenchmarkConfig cfg;
  for (const auto& gen : generators) cfg.generators.push_back(GeneratorSpec::parse(gen));
  for (const auto& f : fitters) cfg.fitters.push_back(FitterSpec::parse(f));
  cfg.replicates = replicates;
  cfg.n_fit = n_fit;
  cfg.iters = iters;
  cfg.burnin = burnin;
  cfg.thin = thin;
  cfg.seed = g.seed;
  cfg.threads = resolve_threads(threads);
  cfg.validate();

  RunManifest man;
  man.subcommand = "benchmark";
  man.seed = g.seed;
  nlohmann::json gens = nlohmann::json::array(), fits = nlohmann::json::array();
  for (const auto& gen : cfg.generators) gens.push_back(gen.label());
  for (const auto& f : cfg.fitters) fits.push_back(f.name);
  man.config = {{"generators", gens}, {"fitters", fits}, {"replicates", replicates},
                {"n_fit", n_fit},     {"iters", iters},  {"burnin", burnin},
                {"thin", thin},       {"format", g.format}};

  BenchmarkReport report = run_benchmark(cfg);
  if (want_json(g)) write_file(out_path(g, "benchmark.json"), report.to_json() + "\n", man);
  if (want_csv(g)) {
    std::ostringstream os1, os2;
    report.write_summary_csv(os1);
    report.write_raw_csv(os2);
    write_file(out_path(g, "benchmark_summary.csv"), os1.str(), man);
    write_file(out_path(g, "benchmark_raw.csv"), os2.str(), man);
  }
  finish_manifest(g, man);
  report.write_summary_csv(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beta-GOS species-sampling toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master RNG seed")->capture_default_str();
  int threads_flag = 0;
  app.add_option("--threads", threads_flag, "worker threads (env BETAGOS_THREADS, then cores)");
  app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", g.format, "csv | json | both")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw synthetic datasets");
  std::string sim_kind = "betagos:theta:1";
  int sim_n = 100, sim_reps = 1, sim_klag = 3, sim_switch = 50;
  double sim_mu0 = 0.0, sim_sigma0 = 10.0, sim_tau = 0.25, sim_pnew = 0.2;
  std::vector<double> sim_pi, sim_precent;
  sim->add_option("--kind", sim_kind, "mixture | urn | hmm | betagos:<sched> | dp:<theta>")
      ->capture_default_str();
  sim->add_option("--n", sim_n)->capture_default_str();
  sim->add_option("--replicates", sim_reps)->capture_default_str();
  sim->add_option("--mu0", sim_mu0)->capture_default_str();
  sim->add_option("--sigma0", sim_sigma0)->capture_default_str();
  sim->add_option("--tau", sim_tau)->capture_default_str();
  sim->add_option("--pi", sim_pi, "mixture weights")->delimiter(',');
  sim->add_option("--k-lag", sim_klag)->capture_default_str();
  sim->add_option("--p-new", sim_pnew)->capture_default_str();
  sim->add_option("--p-recent", sim_precent, "urn lag weights, most recent first")->delimiter(',');
  sim->add_option("--switch-at", sim_switch)->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "collapsed Gibbs fit of one series");
  std::string fit_input, fit_schedule = "theta:1", fit_tau2_mode = "pooled_em";
  double fit_mu0 = 0.0, fit_sigma0 = 10.0, fit_a0 = 2.004, fit_b0 = 0.0063;
  int fit_iters = 5000, fit_burnin = 1000, fit_thin = 4, fit_chains = 1;
  bool fit_full_trace = false;
  fit->add_option("--input", fit_input, "CSV, one observation per row")->required();
  fit->add_option("--schedule", fit_schedule)->capture_default_str();
  fit->add_option("--mu0", fit_mu0)->capture_default_str();
  fit->add_option("--sigma0", fit_sigma0)->capture_default_str();
  fit->add_option("--a0", fit_a0)->capture_default_str();
  fit->add_option("--b0", fit_b0)->capture_default_str();
  fit->add_option("--iters", fit_iters)->capture_default_str();
  fit->add_option("--burnin", fit_burnin)->capture_default_str();
  fit->add_option("--thin", fit_thin)->capture_default_str();
  fit->add_option("--chains", fit_chains)->capture_default_str();
  fit->add_option("--tau2-mode", fit_tau2_mode, "pooled_em | global_conjugate")
      ->capture_default_str();
  fit->add_flag("--full-trace", fit_full_trace, "also write the complete trace");

  // moments
  auto* mom = app.add_subcommand("moments", "exact partition moments and limits");
  std::string mom_schedule = "const:1,1";
  int mom_n = 100, mom_maxm = 6;
  double mom_gamma = 0.0;
  std::vector<double> mom_t;
  mom->add_option("--schedule", mom_schedule)->capture_default_str();
  mom->add_option("--n", mom_n)->capture_default_str();
  mom->add_option("--max-m", mom_maxm)->capture_default_str();
  mom->add_option("--gamma", mom_gamma, "recent-window elicitation mass");
  mom->add_option("--mgf-t", mom_t, "limit MGF evaluation points")->delimiter(',');

  // call
  auto* call = app.add_subcommand("call", "CGH aberration calling");
  std::string call_input, call_schedule = "theta:1";
  double call_eps = 0.1, call_freq = 0.7, call_amp = 2.0, call_fdr = 0.05;
  double call_sigma0 = 10.0, call_a0 = 2.01, call_b0 = 0.0101;
  int call_iters = 3000, call_burnin = 1000, call_thin = 2;
  bool call_pcn = false;
  call->add_option("--input", call_input, "CSV: [sample_id,]clone_id,chromosome,kb_start,kb_end,log2_ratio")
      ->required();
  call->add_option("--epsilon", call_eps)->capture_default_str();
  call->add_option("--call-freq", call_freq)->capture_default_str();
  call->add_option("--amp-sd-mult", call_amp)->capture_default_str();
  call->add_option("--fdr", call_fdr)->capture_default_str();
  call->add_option("--iters", call_iters)->capture_default_str();
  call->add_option("--burnin", call_burnin)->capture_default_str();
  call->add_option("--thin", call_thin)->capture_default_str();
  call->add_option("--schedule", call_schedule)->capture_default_str();
  call->add_option("--sigma0", call_sigma0)->capture_default_str();
  call->add_option("--a0", call_a0)->capture_default_str();
  call->add_option("--b0", call_b0)->capture_default_str();
  call->add_flag("--per-clone-null", call_pcn, "per-clone-average region null probability");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "generator x fitter comparison grid");
  std::vector<std::string> bench_gens{"betagos:theta:1"}, bench_fits{"betagos:theta:1", "dp:1"};
  int bench_reps = 50, bench_nfit = 100, bench_iters = 5000, bench_burnin = 1000,
      bench_thin = 4;
  bench->add_option("--generators", bench_gens)->delimiter(',')->capture_default_str();
  bench->add_option("--fitters", bench_fits)->delimiter(',')->capture_default_str();
  bench->add_option("--replicates", bench_reps)->capture_default_str();
  bench->add_option("--n-fit", bench_nfit)->capture_default_str();
  bench->add_option("--iters", bench_iters)->capture_default_str();
  bench->add_option("--burnin", bench_burnin)->capture_default_str();
  bench->add_option("--thin", bench_thin)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(g, sim_kind, sim_n, sim_reps, sim_mu0, sim_sigma0, sim_tau,
                          sim_pi, sim_klag, sim_pnew, sim_precent, sim_switch);
    if (fit->parsed())
      return cmd_fit(g, fit_input, fit_schedule, fit_mu0, fit_sigma0, fit_a0, fit_b0,
                     fit_iters, fit_burnin, fit_thin, fit_chains, fit_tau2_mode,
                     fit_full_trace);
    if (mom->parsed())
      return cmd_moments(g, mom_schedule, mom_n, mom_maxm, mom_gamma, mom_t);
    if (call->parsed())
      return cmd_call(g, call_input, call_eps, call_freq, call_amp, call_fdr, call_iters,
                      call_burnin, call_thin, call_schedule, call_sigma0, call_a0,
                      call_b0, call_pcn);
    if (bench->parsed())
      return cmd_benchmark(g, bench_gens, bench_fits, bench_reps, bench_nfit,
                           bench_iters, bench_burnin, bench_thin, threads_flag);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

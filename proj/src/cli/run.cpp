#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "chernoff/anticonc.hpp"
#include "chernoff/cli.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/experiments.hpp"
#include "chernoff/limits.hpp"
#include "chernoff/oracle.hpp"
#include "chernoff/stats.hpp"

namespace chernoff::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kReferenceTag = 0x7265666572656e63ULL;

struct Artifact {
  std::string name;
  std::string content;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string comment_line(const RunConfig& cfg, const std::string& hash) {
  return std::string("# ") + kToolName + " " + kToolVersion + " experiment=" + to_string(cfg.experiment) +
         " spec_hash=" + hash + " seed=" + std::to_string(cfg.seed) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw IoError("write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path.string() + ": " + ec.message());
}

void log(const RunOptions& opts, const std::string& msg) {
  if (opts.log) *opts.log << msg << std::endl;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cdf_table_csv(const RunConfig& cfg, const std::string& hash, const EmpiricalCdf& table) {
  std::string out = comment_line(cfg, hash) + "t,prob,n_reps,seed,spec_hash\n";
  for (std::size_t i = 0; i < table.t_grid.size(); ++i) {
    out += fmt(table.t_grid[i]) + "," + fmt(table.probs[i]) + "," + std::to_string(table.n_reps) + "," +
           std::to_string(table.seed) + "," + hash + "\n";
  }
  return out;
}

std::string ecdf_csv(const RunConfig& cfg, const std::string& hash, std::size_t n, const EmpiricalCdf& e) {
  std::string out = comment_line(cfg, hash) + "n,t,prob\n";
  for (std::size_t i = 0; i < e.t_grid.size(); ++i) {
    out += std::to_string(n) + "," + fmt(e.t_grid[i]) + "," + fmt(e.probs[i]) + "\n";
  }
  return out;
}

LimitSpec limit_spec(const RunConfig& cfg) {
  LimitSpec ls;
  if (cfg.d_alpha) {
    const double step = cfg.step.value_or(1e-4);
    ls = d_alpha_spec(*cfg.d_alpha, cfg.truncation.value_or(default_truncation(step, *cfg.d_alpha)), step);
  } else {
    ls = limit_spec_for(cfg.scenario);
    if (cfg.step) ls.step = *cfg.step;
    if (cfg.truncation) {
      ls.trunc1 = *cfg.truncation;
      ls.trunc2 = *cfg.truncation;
    }
  }
  ls.validate();
  return ls;
}

double limit_points(const LimitSpec& ls) { return (ls.right_end() - ls.left_end()) / ls.step + 1.0; }

SamplerFactory limit_factory(const LimitSpec& ls) {
  auto sampler = std::make_shared<const LimitSampler>(ls);
  return [sampler]() -> Sampler {
    auto ws = std::make_shared<LimitSampler::Workspace>();
    return [sampler, ws](Stream& rng) { return sampler->sample(rng, *ws); };
  };
}

EmpiricalCdf simulate_table(const RunConfig& cfg, const LimitSpec& ls, std::size_t reps, std::uint64_t seed,
                            unsigned workers) {
  std::vector<double> draws;
  if (cfg.argmax_sampler) {
    auto sampler = std::make_shared<const ArgmaxSampler>(ls.right_end(), ls.step);
    SamplerFactory f = [sampler]() -> Sampler {
      auto buf = std::make_shared<std::vector<double>>();
      return [sampler, buf](Stream& rng) { return sampler->sample(rng, *buf); };
    };
    draws = parallel_draw(f, reps, seed, workers);
  } else {
    draws = parallel_draw(limit_factory(ls), reps, seed, workers);
  }
  std::sort(draws.begin(), draws.end());
  return ecdf_from_sorted(draws, cfg.t_grid, seed);
}

struct Outcome {
  std::vector<Artifact> files;
  json summary;
  std::ostringstream report;
};

void run_table(const RunConfig& cfg, const std::string& hash, const RunOptions& opts, Outcome& o) {
  const LimitSpec ls = limit_spec(cfg);
  log(opts, "limit " + ls.canonical());
  const EmpiricalCdf table = simulate_table(cfg, ls, cfg.n_reps, cfg.seed, opts.workers);
  table.validate();
  const std::string name = "table_" + hash + ".csv";
  o.files.push_back({name, cdf_table_csv(cfg, hash, table)});
  const double p0 = interpolate_cdf(table, 0.0);
  o.summary["table"] = name;
  o.summary["limit"] = ls.canonical();
  o.summary["sampler"] = cfg.argmax_sampler ? "argmax" : "gcm";
  o.summary["prob_at_0"] = p0;
  o.report << "limit      " << ls.canonical() << "\n"
           << "sampler    " << (cfg.argmax_sampler ? "argmax" : "gcm") << "\n"
           << "grid       " << table.t_grid.size() << " points in [" << table.t_grid.front() << ", "
           << table.t_grid.back() << "]\n"
           << "P(<= 0)    " << p0 << "\n"
           << "table      " << name << "\n";
}

EmpiricalCdf reference_for(const RunConfig& cfg, const std::string& hash, const RunOptions& opts, Outcome& o) {
  if (!cfg.reference_table.empty()) {
    const StoredCdfTable stored = read_cdf_table(cfg.reference_table);
    o.summary["reference"] = {{"table", cfg.reference_table},
                              {"spec_hash", stored.spec_hash},
                              {"n_reps", stored.table.n_reps},
                              {"seed", stored.table.seed}};
    try {
      return restrict_to_grid(stored.table, cfg.t_grid);
    } catch (const InputError& e) {
      throw ConfigError(std::string("reference table does not cover t_grid: ") + e.what());
    }
  }
  const LimitSpec ls = limit_spec(cfg);
  const std::uint64_t seed = derive_seed(cfg.seed, kReferenceTag);
  log(opts, "simulating reference " + ls.canonical());
  EmpiricalCdf ref = simulate_table(cfg, ls, cfg.reference_reps, seed, opts.workers);
  o.files.push_back({"reference_" + hash + ".csv", cdf_table_csv(cfg, hash, ref)});
  o.summary["reference"] = {{"limit", ls.canonical()}, {"n_reps", cfg.reference_reps}, {"seed", seed}};
  return ref;
}

void add_fit(const std::vector<std::pair<double, double>>& pairs, Outcome& o) {
  bool positive = pairs.size() >= 3;
  for (const auto& p : pairs) positive = positive && p.second > 0.0;
  if (!positive) {
    o.summary["slope"] = nullptr;
    o.summary["intercept"] = nullptr;
    return;
  }
  const RateFit fit = fit_rate(pairs);
  o.summary["slope"] = fit.slope;
  o.summary["intercept"] = fit.intercept;
  o.report << "slope      " << fit.slope << "\n";
}

void run_berry_esseen(const RunConfig& cfg, const std::string& hash, const RunOptions& opts, Outcome& o) {
  const EmpiricalCdf ref = reference_for(cfg, hash, opts, o);
  std::vector<std::pair<double, double>> pairs;
  std::string gaps = comment_line(cfg, hash) + "n,E_n\n";
  json seeds = json::array();
  o.report << "        n        E_n\n";
  for (std::size_t n : cfg.n_grid) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = derive_seed(cfg.seed, n);
    const ScenarioSpec spec = cfg.scenario;
    SamplerFactory f = [spec, n]() -> Sampler {
      auto s = std::make_shared<LseStatSampler>(spec, n);
      return [s](Stream& rng) { return (*s)(rng); };
    };
    const EmpiricalCdf e = empirical_cdf(f, cfg.t_grid, cfg.n_reps, seed, opts.workers);
    const double gap = berry_esseen_gap(e, ref);
    pairs.emplace_back(static_cast<double>(n), gap);
    seeds.push_back(seed);
    o.files.push_back({"ecdf_n" + std::to_string(n) + ".csv", ecdf_csv(cfg, hash, n, e)});
    gaps += std::to_string(n) + "," + fmt(gap) + "\n";
    char line[64];
    std::snprintf(line, sizeof line, "%9zu %10.5f\n", n, gap);
    o.report << line;
    log(opts, "n=" + std::to_string(n) + " E_n=" + fmt(gap) + " (" + fmt(elapsed(t0)) + " s)");
  }
  o.files.push_back({"gaps.csv", gaps});
  json ns = json::array(), es = json::array();
  for (const auto& [n, e] : pairs) {
    ns.push_back(static_cast<std::size_t>(n));
    es.push_back(e);
  }
  o.summary["n_grid"] = ns;
  o.summary["E_n"] = es;
  o.summary["seeds"] = seeds;
  o.summary["t_grid"] = cfg.t_grid;
  add_fit(pairs, o);
}

void run_oracle(const RunConfig& cfg, const std::string& hash, const RunOptions& opts, Outcome& o) {
  const DriftSpec Q = drift_Q(cfg.scenario);
  const double sigma = cfg.scenario.sigma, lambda0 = cfg.scenario.lambda0();
  const double h1 = cfg.h1, h2 = cfg.h2;
  auto limit = [&](double t) { return oracle_limit_cdf(t, h1, h2, sigma, lambda0, Q); };
  std::string gaps = comment_line(cfg, hash) + "n,ks,gap\n";
  json ns = json::array(), kss = json::array(), gs = json::array(), seeds = json::array();
  std::vector<std::pair<double, double>> pairs;
  o.report << "        n         KS        gap\n";
  for (std::size_t n : cfg.n_grid) {
    const std::uint64_t seed = derive_seed(cfg.seed, n);
    const ScenarioSpec spec = cfg.scenario;
    SamplerFactory f = [spec, n, h1, h2]() -> Sampler {
      auto s = std::make_shared<OracleStatSampler>(spec, n, h1, h2);
      return [s](Stream& rng) { return (*s)(rng); };
    };
    std::vector<double> draws = parallel_draw(f, cfg.n_reps, seed, opts.workers);
    std::sort(draws.begin(), draws.end());
    const double ks = ks_one_sample(draws, limit);
    const EmpiricalCdf e = ecdf_from_sorted(draws, cfg.t_grid, seed);
    const double gap = berry_esseen_gap(e, limit);
    o.files.push_back({"ecdf_n" + std::to_string(n) + ".csv", ecdf_csv(cfg, hash, n, e)});
    gaps += std::to_string(n) + "," + fmt(ks) + "," + fmt(gap) + "\n";
    ns.push_back(n);
    kss.push_back(ks);
    gs.push_back(gap);
    seeds.push_back(seed);
    pairs.emplace_back(static_cast<double>(n), ks);
    char line[64];
    std::snprintf(line, sizeof line, "%9zu %10.5f %10.5f\n", n, ks, gap);
    o.report << line;
    log(opts, "n=" + std::to_string(n) + " KS=" + fmt(ks));
  }
  o.files.push_back({"gaps.csv", gaps});
  o.summary["n_grid"] = ns;
  o.summary["ks"] = kss;
  o.summary["gap"] = gs;
  o.summary["seeds"] = seeds;
  o.summary["h1"] = h1;
  o.summary["h2"] = h2;
  o.summary["limit_mean"] = (Q(h2) - Q(-h1)) / (h1 + h2);
  o.summary["limit_sd"] = sigma / std::sqrt(lambda0 * (h1 + h2));
  add_fit(pairs, o);
}

void run_anticonc(const RunConfig& cfg, const std::string& hash, const RunOptions& opts, Outcome& o) {
  const double step = cfg.step.value_or(1e-4);
  json drifts = json::array();
  double K = 0.0;
  o.report << "drift                      b      max ratio\n";
  for (std::size_t i = 0; i < cfg.drifts.size(); ++i) {
    const DriftProbe& d = cfg.drifts[i];
    auto sampler = std::make_shared<const SupSampler>(d.poly(), step, cfg.sup_method);
    SamplerFactory f = [sampler]() -> Sampler {
      auto buf = std::make_shared<std::vector<double>>();
      return [sampler, buf](Stream& rng) { return sampler->sample(rng, *buf); };
    };
    const std::uint64_t seed = derive_seed(cfg.seed, i);
    std::vector<double> draws = parallel_draw(f, cfg.n_reps, seed, opts.workers);
    std::sort(draws.begin(), draws.end());
    const ConcentrationProfile p = concentration_profile(draws, cfg.eps_grid, d.lipschitz());
    std::string csv = comment_line(cfg, hash) + "# drift P(h) = " + d.describe() + "\n" +
                      "eps,level,envelope,ratio,n_samples,b\n";
    double worst = 0.0;
    json ratios = json::array();
    for (std::size_t k = 0; k < p.eps_grid.size(); ++k) {
      const double ratio = p.levels[k] / p.envelopes[k];
      worst = std::max(worst, ratio);
      ratios.push_back(ratio);
      csv += fmt(p.eps_grid[k]) + "," + fmt(p.levels[k]) + "," + fmt(p.envelopes[k]) + "," + fmt(ratio) + "," +
             std::to_string(p.n_samples) + "," + fmt(p.b) + "\n";
    }
    K = std::max(K, worst);
    const std::string name = "probe_" + std::to_string(i) + ".csv";
    o.files.push_back({name, csv});
    drifts.push_back({{"drift", d.describe()}, {"b", d.lipschitz()}, {"seed", seed}, {"ratios", ratios},
                      {"max_ratio", worst}, {"file", name}});
    char line[96];
    std::snprintf(line, sizeof line, "%-22s %6.2f %12.5f\n", d.describe().c_str(), d.lipschitz(), worst);
    o.report << line;
    log(opts, "drift " + d.describe() + " max ratio " + fmt(worst));
  }
  o.summary["eps_grid"] = cfg.eps_grid;
  o.summary["step"] = step;
  o.summary["method"] = cfg.sup_method == SupMethod::Grid ? "grid" : "bridge";
  o.summary["drifts"] = drifts;
  o.summary["K"] = K;
  o.report << "K          " << K << "\n";
}

void run_localization(const RunConfig& cfg, const std::string& hash, const RunOptions& opts, Outcome& o) {
  std::string csv =
      comment_line(cfg, hash) + "n,K_t,K_tau,t_n,tau_n,freq_stat_exceeds,freq_touch_exceeds,n_reps\n";
  json rows = json::array();
  o.report << "        n     K      t_n    tau_n  P(stat)  P(touch)\n";
  for (std::size_t n : cfg.n_grid) {
    const std::uint64_t seed = derive_seed(cfg.seed, n);
    const auto draws = lse_draws(cfg.scenario, n, cfg.n_reps, seed, opts.workers);
    for (double K : cfg.K_grid) {
      const DiagnosticsReport r = localization_report(cfg.scenario, n, draws, K, K);
      csv += std::to_string(n) + "," + fmt(r.K_t) + "," + fmt(r.K_tau) + "," + fmt(r.t_n) + "," + fmt(r.tau_n) +
             "," + fmt(r.freq_stat_exceeds) + "," + fmt(r.freq_touch_exceeds) + "," + std::to_string(r.n_reps) +
             "\n";
      rows.push_back({{"n", n},
                      {"K_t", r.K_t},
                      {"K_tau", r.K_tau},
                      {"t_n", r.t_n},
                      {"tau_n", r.tau_n},
                      {"freq_stat_exceeds", r.freq_stat_exceeds},
                      {"freq_touch_exceeds", r.freq_touch_exceeds},
                      {"seed", seed}});
      char line[96];
      std::snprintf(line, sizeof line, "%9zu %5.2f %8.3f %8.3f %8.5f %9.5f\n", n, K, r.t_n, r.tau_n,
                    r.freq_stat_exceeds, r.freq_touch_exceeds);
      o.report << line;
    }
    log(opts, "n=" + std::to_string(n) + " done");
  }
  o.files.push_back({"localization.csv", csv});
  o.summary["rows"] = rows;
}

void run_fit(const RunConfig& cfg, const std::string& hash, Outcome& o) {
  const RateFit fit = fit_rate(cfg.pairs);
  std::string csv = comment_line(cfg, hash) + "n,E_n,fitted,residual\n";
  for (std::size_t i = 0; i < fit.pairs.size(); ++i) {
    const auto [n, e] = fit.pairs[i];
    csv += fmt(n) + "," + fmt(e) + "," + fmt(std::exp(fit.intercept + fit.slope * std::log(n))) + "," +
           fmt(fit.residuals[i]) + "\n";
  }
  o.files.push_back({"fit.csv", csv});
  o.summary["slope"] = fit.slope;
  o.summary["intercept"] = fit.intercept;
  o.summary["residuals"] = fit.residuals;
  o.report << "pairs      " << fit.pairs.size() << "\nslope      " << fit.slope << "\nintercept  "
           << fit.intercept << "\n";
}

}  // namespace

RunConfig resolve(RunConfig cfg, const RunOptions& opts) {
  if (opts.seed_override) cfg.seed = *opts.seed_override;
  if (opts.full_scale && cfg.experiment != ExperimentKind::FitRate) cfg.n_reps = cfg.full_scale_reps;
  if (opts.budget_seconds) cfg.budget_seconds = opts.budget_seconds;
  return cfg;
}

double estimate_seconds(const RunConfig& cfg, unsigned workers) {
  // Measured single-core costs per simulated point.
  constexpr double kLse = 2.5e-8, kGcm = 2.7e-8, kArgmax = 1.1e-8, kWindow = 1.5e-8;
  constexpr double kSupGrid = 1.2e-8, kSupBridge = 3.0e-8;
  const double reps = static_cast<double>(cfg.n_reps);
  double total = 0.0;
  auto table_cost = [&](double n) {
    const LimitSpec ls = limit_spec(cfg);
    return limit_points(ls) * n * (cfg.argmax_sampler ? kArgmax : kGcm);
  };
  switch (cfg.experiment) {
    case ExperimentKind::ChernoffTable:
      total = table_cost(reps);
      break;
    case ExperimentKind::BerryEsseen:
      for (std::size_t n : cfg.n_grid) total += static_cast<double>(n) * reps * kLse;
      if (cfg.reference_table.empty()) total += table_cost(static_cast<double>(cfg.reference_reps));
      break;
    case ExperimentKind::OracleClt:
      for (std::size_t n : cfg.n_grid) total += static_cast<double>(n) * reps * kWindow;
      break;
    case ExperimentKind::AnticoncProbe:
      total = static_cast<double>(cfg.drifts.size()) * reps / cfg.step.value_or(1e-4) *
              (cfg.sup_method == SupMethod::Grid ? kSupGrid : kSupBridge);
      break;
    case ExperimentKind::Localization:
      for (std::size_t n : cfg.n_grid) total += static_cast<double>(n) * reps * kLse;
      break;
    case ExperimentKind::FitRate:
      break;
  }
  return total / std::max(1u, workers);
}

RunResult run(const RunConfig& cfg_in, const RunOptions& opts) {
  const RunConfig cfg = resolve(cfg_in, opts);
  const std::string hash = spec_hash(cfg);
  const unsigned workers = std::max(1u, opts.workers);
  const double estimate = estimate_seconds(cfg, workers);
  RunResult result;
  result.out_dir = opts.out_dir.empty() ? cfg.output_dir : opts.out_dir;
  if (cfg.budget_seconds && estimate > *cfg.budget_seconds) {
    std::ostringstream msg;
    msg << "estimated cost " << estimate << " s exceeds the budget of " << *cfg.budget_seconds << " s";
    throw ConfigError(msg.str());
  }
  json summary;
  summary["tool"] = kToolName;
  summary["version"] = kToolVersion;
  summary["experiment"] = to_string(cfg.experiment);
  summary["spec_hash"] = hash;
  summary["seed"] = cfg.seed;
  summary["n_reps"] = cfg.n_reps;
  summary["estimated_seconds"] = estimate;
  if (opts.dry_run) {
    summary["dry_run"] = true;
    result.summary = summary;
    std::ostringstream r;
    r << to_string(cfg.experiment) << " spec_hash=" << hash << " seed=" << cfg.seed << "\n"
      << "estimated " << estimate << " s on " << workers << " worker(s); nothing written\n";
    result.report = r.str();
    return result;
  }

  RunOptions run_opts = opts;
  run_opts.workers = workers;
  Outcome o;
  o.summary = summary;
  o.report << to_string(cfg.experiment) << "  spec_hash=" << hash << "  seed=" << cfg.seed
           << "  reps=" << cfg.n_reps << "\n";
  const auto t0 = std::chrono::steady_clock::now();
  switch (cfg.experiment) {
    case ExperimentKind::ChernoffTable: run_table(cfg, hash, run_opts, o); break;
    case ExperimentKind::BerryEsseen: run_berry_esseen(cfg, hash, run_opts, o); break;
    case ExperimentKind::OracleClt: run_oracle(cfg, hash, run_opts, o); break;
    case ExperimentKind::AnticoncProbe: run_anticonc(cfg, hash, run_opts, o); break;
    case ExperimentKind::Localization: run_localization(cfg, hash, run_opts, o); break;
    case ExperimentKind::FitRate: run_fit(cfg, hash, o); break;
  }
  o.summary["runtime_seconds"] = elapsed(t0);
  o.report << "runtime    " << elapsed(t0) << " s\n";

  json files = json::array();
  for (const auto& f : o.files) files.push_back(f.name);
  o.summary["files"] = files;

  const std::filesystem::path dir(result.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& f : o.files) {
    write_atomic(dir / f.name, f.content);
    result.artifacts.push_back((dir / f.name).string());
  }
  write_atomic(dir / "config.json", canonical_json(cfg).dump(2) + "\n");
  write_atomic(dir / "summary.json", o.summary.dump(2) + "\n");
  result.artifacts.push_back((dir / "config.json").string());
  result.artifacts.push_back((dir / "summary.json").string());
  result.summary = o.summary;
  result.report = o.report.str();
  return result;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InputError*>(&e) ||
      dynamic_cast<const DomainError*>(&e)) {
    return 3;
  }
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

}  // namespace chernoff::cli

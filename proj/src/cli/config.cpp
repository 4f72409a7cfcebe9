#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "chernoff/cli.hpp"
#include "chernoff/ecdf.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/hash.hpp"

namespace chernoff::cli {

using nlohmann::json;

namespace {

const std::pair<ExperimentKind, const char*> kKinds[] = {
    {ExperimentKind::ChernoffTable, "chernoff-table"},
    {ExperimentKind::BerryEsseen, "berry-esseen"},
    {ExperimentKind::OracleClt, "oracle-clt"},
    {ExperimentKind::AnticoncProbe, "anticonc-probe"},
    {ExperimentKind::Localization, "localization"},
    {ExperimentKind::FitRate, "fit-rate"},
};

// Object reader that remembers which keys were consumed, so leftovers can be
// reported as unknown.
class Obj {
 public:
  Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    return as_number(at(key), path(key));
  }

  std::string string(const char* key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::uint64_t uint(const char* key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    return as_uint(at(key), path(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + ": must be finite");
    return x;
  }

  static std::uint64_t as_uint(const json& v, const std::string& where) {
    if (!v.is_number_unsigned()) throw ConfigError(where + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(Obj::as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> parse_t_grid(const json& v) {
  if (v.is_array()) return number_array(v, "t_grid");
  if (v.is_string()) {
    const std::string preset = v.get<std::string>();
    auto g = default_gap_grid();
    if (preset == "gap") return g;
    if (preset == "symmetric-gap") {
      std::vector<double> out;
      for (auto it = g.rbegin(); it != g.rend(); ++it) out.push_back(-*it);
      out.insert(out.end(), g.begin(), g.end());
      return out;
    }
    throw ConfigError("t_grid: unknown preset '" + preset + "'");
  }
  Obj o(v, "t_grid");
  if (!o.has("lo") || !o.has("hi") || !o.has("step")) {
    throw ConfigError("t_grid: needs lo, hi and step");
  }
  const double lo = o.number("lo", 0), hi = o.number("hi", 0), step = o.number("step", 0);
  o.finish();
  if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("t_grid: need step > 0 and hi >= lo");
  if ((hi - lo) / step > 1e6) throw ConfigError("t_grid: more than 10^6 points");
  return linear_grid(lo, hi, step);
}

ScenarioSpec parse_scenario(const json& v) {
  ScenarioSpec s = canonical_scenario();
  Obj o(v, "scenario");
  s.truth = o.string("truth", s.truth);
  if (o.has("point")) {
    Obj p(o.at("point"), "scenario.point");
    const std::string kind = p.string("kind", "interior");
    if (kind == "interior") {
      s.point = PointSpec::interior(p.number("x0", 0.5));
    } else if (kind == "boundary") {
      if (!p.has("rho")) throw ConfigError("scenario.point: boundary needs rho");
      s.point = PointSpec::boundary_at(p.number("rho", 0.0));
    } else {
      throw ConfigError("scenario.point.kind: expected interior or boundary");
    }
    p.finish();
  }
  if (o.has("design")) {
    Obj d(o.at("design"), "scenario.design");
    const std::string kind = d.string("kind", "fixed");
    if (kind == "fixed") {
      s.design = DesignSpec::fixed(d.number("lambda0", 1.0));
    } else if (kind == "random_uniform") {
      s.design = DesignSpec::random_uniform();
    } else if (kind == "beta_regular") {
      const double beta = d.number("beta", 1.0);
      if (beta != std::floor(beta) || beta < 1 || beta > 64) {
        throw ConfigError("scenario.design.beta: expected an integer in [1, 64]");
      }
      s.design = DesignSpec::beta_regular(static_cast<int>(beta), d.number("kappa", 0.0));
    } else {
      throw ConfigError("scenario.design.kind: expected fixed, random_uniform or beta_regular");
    }
    d.finish();
  }
  if (o.has("error")) {
    const std::string law = o.string("error", "");
    try {
      s.error = parse_error_law(law);
    } catch (const Error&) {
      throw ConfigError("scenario.error: unknown error law '" + law + "'");
    }
  }
  s.sigma = o.number("sigma", s.sigma);
  o.finish();
  s.validate();
  return s;
}

DriftProbe parse_drift(const json& v, const std::string& where) {
  Obj o(v, where);
  DriftProbe d;
  const std::string kind = o.string("kind", "");
  if (kind == "zero") {
    d.kind = DriftProbe::Kind::Zero;
  } else if (kind == "linear") {
    d.kind = DriftProbe::Kind::Linear;
    d.mu = o.number("mu", 0.0);
  } else if (kind == "quadratic") {
    d.kind = DriftProbe::Kind::Quadratic;
    d.b = o.number("b", 0.0);
    d.t = o.number("t", 0.0);
  } else {
    throw ConfigError(where + ".kind: expected zero, linear or quadratic");
  }
  o.finish();
  return d;
}

std::string resolve_path(const std::string& p, const std::string& base) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_absolute()) return p;
  return (std::filesystem::path(base) / path).lexically_normal().string();
}

}  // namespace

const char* to_string(ExperimentKind kind) noexcept {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "?";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kKinds) {
    if (name == n) return k;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

Polynomial DriftProbe::poly() const {
  switch (kind) {
    case Kind::Zero: return Polynomial{{0.0}};
    case Kind::Linear: return Polynomial{{0.0, mu}};
    case Kind::Quadratic: return Polynomial{{0.0, -t, b}};
  }
  return {};
}

double DriftProbe::lipschitz() const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Linear: return std::fabs(mu);
    case Kind::Quadratic: return std::max(std::fabs(t), std::fabs(2.0 * b - t));
  }
  return 0.0;
}

std::string DriftProbe::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Zero: os << "0"; break;
    case Kind::Linear: os << mu << "*h"; break;
    case Kind::Quadratic: os << b << "*h^2-" << t << "*h"; break;
  }
  return os.str();
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  Obj o(root, "config");
  RunConfig c;
  if (!o.has("experiment")) throw ConfigError("config: missing 'experiment'");
  c.experiment = parse_experiment(o.string("experiment", ""));
  if (!o.has("seed")) throw ConfigError("config: missing 'seed' (every run needs an explicit master seed)");
  c.seed = o.uint("seed", 0);
  c.scenario = o.has("scenario") ? parse_scenario(o.at("scenario")) : canonical_scenario();
  if (c.experiment == ExperimentKind::ChernoffTable && !o.has("scenario")) {
    // D_1 is the default table.
    c.d_alpha = 1;
  }

  std::size_t default_reps = 0;
  std::vector<std::size_t> default_n;
  std::vector<double> default_t;
  switch (c.experiment) {
    case ExperimentKind::ChernoffTable:
      default_reps = 100000;
      default_t = linear_grid(-3.0, 3.0, 0.05);
      break;
    case ExperimentKind::BerryEsseen:
      default_reps = 50000;
      for (int k = 7; k <= 13; ++k) default_n.push_back(std::size_t{1} << k);
      default_t = default_gap_grid();
      break;
    case ExperimentKind::OracleClt:
      default_reps = 10000;
      default_n = {100, 1000, 10000};
      default_t = linear_grid(-3.0, 3.0, 0.1);
      break;
    case ExperimentKind::AnticoncProbe:
      default_reps = 100000;
      break;
    case ExperimentKind::Localization:
      default_reps = 10000;
      default_n = {10000};
      break;
    case ExperimentKind::FitRate:
      break;
  }

  c.n_reps = o.uint("n_reps", default_reps);
  c.full_scale_reps = o.uint("full_scale_reps", c.full_scale_reps);
  if (o.has("n_grid")) {
    const json& v = o.at("n_grid");
    if (!v.is_array() || v.empty()) throw ConfigError("n_grid: expected a nonempty array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      c.n_grid.push_back(Obj::as_uint(v[i], "n_grid[" + std::to_string(i) + "]"));
    }
  } else {
    c.n_grid = default_n;
  }
  c.t_grid = o.has("t_grid") ? parse_t_grid(o.at("t_grid")) : default_t;
  c.output_dir = o.has("output_dir") ? resolve_path(o.string("output_dir", ""), base_dir)
                                      : std::string("out/") + to_string(c.experiment);
  if (o.has("budget_seconds")) c.budget_seconds = o.number("budget_seconds", 0.0);

  if (o.has("precision")) {
    Obj p(o.at("precision"), "precision");
    if (p.has("step")) c.step = p.number("step", 0.0);
    if (p.has("truncation")) c.truncation = p.number("truncation", 0.0);
    p.finish();
  }
  if (o.has("limit")) {
    Obj l(o.at("limit"), "limit");
    if (l.has("alpha")) {
      const auto a = l.uint("alpha", 1);
      if (a > 63) throw ConfigError("limit.alpha: too large");
      c.d_alpha = static_cast<int>(a);
    }
    const std::string sampler = l.string("sampler", "gcm");
    if (sampler != "gcm" && sampler != "argmax") throw ConfigError("limit.sampler: expected gcm or argmax");
    c.argmax_sampler = sampler == "argmax";
    l.finish();
  }
  if (o.has("reference")) {
    Obj r(o.at("reference"), "reference");
    c.reference_table = resolve_path(r.string("table", ""), base_dir);
    c.reference_reps = r.uint("reps", c.reference_reps);
    r.finish();
  }
  if (o.has("oracle")) {
    Obj r(o.at("oracle"), "oracle");
    c.h1 = r.number("h1", c.h1);
    c.h2 = r.number("h2", c.h2);
    r.finish();
  }
  if (o.has("anticonc")) {
    Obj a(o.at("anticonc"), "anticonc");
    if (a.has("eps_grid")) c.eps_grid = number_array(a.at("eps_grid"), "anticonc.eps_grid");
    if (a.has("drifts")) {
      const json& d = a.at("drifts");
      if (!d.is_array() || d.empty()) throw ConfigError("anticonc.drifts: expected a nonempty array");
      for (std::size_t i = 0; i < d.size(); ++i) {
        c.drifts.push_back(parse_drift(d[i], "anticonc.drifts[" + std::to_string(i) + "]"));
      }
    }
    const std::string m = a.string("method", "bridge");
    if (m != "bridge" && m != "grid") throw ConfigError("anticonc.method: expected bridge or grid");
    c.sup_method = m == "grid" ? SupMethod::Grid : SupMethod::Bridge;
    a.finish();
  }
  if (o.has("localization")) {
    Obj l(o.at("localization"), "localization");
    if (l.has("K_grid")) c.K_grid = number_array(l.at("K_grid"), "localization.K_grid");
    l.finish();
  }
  if (o.has("fit_rate")) {
    Obj f(o.at("fit_rate"), "fit_rate");
    if (f.has("pairs")) {
      const json& v = f.at("pairs");
      if (!v.is_array()) throw ConfigError("fit_rate.pairs: expected an array of [n, E_n]");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string w = "fit_rate.pairs[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != 2) throw ConfigError(w + ": expected [n, E_n]");
        c.pairs.emplace_back(Obj::as_number(v[i][0], w), Obj::as_number(v[i][1], w));
      }
    }
    if (f.has("input")) {
      const std::string input = resolve_path(f.string("input", ""), base_dir);
      std::ifstream in(input);
      if (!in) throw IoError("cannot open " + input);
      json summary;
      try {
        summary = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ParseError(input + ": " + e.what());
      }
      if (!summary.contains("n_grid") || !summary.contains("E_n")) {
        throw ConfigError(input + ": summary has no n_grid / E_n");
      }
      const auto ns = summary["n_grid"].get<std::vector<double>>();
      const auto es = summary["E_n"].get<std::vector<double>>();
      if (ns.size() != es.size()) throw ConfigError(input + ": n_grid and E_n differ in length");
      for (std::size_t i = 0; i < ns.size(); ++i) c.pairs.emplace_back(ns[i], es[i]);
    }
    f.finish();
  }
  o.finish();

  // Per-experiment validation.
  if (c.argmax_sampler && c.d_alpha != 1) {
    throw ConfigError("limit.sampler: the argmax sampler needs limit.alpha = 1");
  }
  if (c.step && !(*c.step > 0.0 && *c.step <= 0.1)) throw ConfigError("precision.step: expected (0, 0.1]");
  if (c.truncation && !(*c.truncation > 0.0)) throw ConfigError("precision.truncation: must be positive");
  if (c.budget_seconds && !(*c.budget_seconds > 0.0)) throw ConfigError("budget_seconds: must be positive");
  if (c.full_scale_reps == 0) throw ConfigError("full_scale_reps: must be positive");
  for (std::size_t i = 1; i < c.t_grid.size(); ++i) {
    if (!(c.t_grid[i] > c.t_grid[i - 1])) throw ConfigError("t_grid: must be strictly increasing");
  }
  for (std::size_t i = 1; i < c.n_grid.size(); ++i) {
    if (!(c.n_grid[i] > c.n_grid[i - 1])) throw ConfigError("n_grid: must be strictly increasing");
  }
  switch (c.experiment) {
    case ExperimentKind::ChernoffTable:
      if (c.n_reps < 10000) throw ConfigError("n_reps: a limit table needs at least 10^4 replications");
      break;
    case ExperimentKind::BerryEsseen:
    case ExperimentKind::OracleClt:
      if (c.n_reps == 0) throw ConfigError("n_reps: must be positive");
      if (c.n_grid.empty()) throw ConfigError("n_grid: must not be empty");
      for (std::size_t n : c.n_grid) {
        if (n < 10) throw ConfigError("n_grid: every n must be at least 10");
      }
      if (c.experiment == ExperimentKind::OracleClt && !(c.h1 > 0.0 && c.h2 > 0.0)) {
        throw ConfigError("oracle: h1 and h2 must be positive");
      }
      if (c.experiment == ExperimentKind::BerryEsseen && c.reference_table.empty() &&
          c.reference_reps < 10000) {
        throw ConfigError("reference.reps: needs at least 10^4 replications");
      }
      break;
    case ExperimentKind::AnticoncProbe:
      if (c.n_reps == 0) throw ConfigError("n_reps: must be positive");
      if (c.eps_grid.empty()) c.eps_grid = {1e-3, 1e-2, 1e-1};
      if (c.drifts.empty()) c.drifts = {DriftProbe{}};
      for (std::size_t i = 0; i < c.eps_grid.size(); ++i) {
        if (!(c.eps_grid[i] > 0.0)) throw ConfigError("anticonc.eps_grid: entries must be positive");
        if (i > 0 && !(c.eps_grid[i] > c.eps_grid[i - 1])) {
          throw ConfigError("anticonc.eps_grid: must be strictly increasing");
        }
      }
      break;
    case ExperimentKind::Localization:
      if (c.n_reps == 0) throw ConfigError("n_reps: must be positive");
      if (c.n_grid.empty()) throw ConfigError("n_grid: must not be empty");
      for (std::size_t n : c.n_grid) {
        if (n < 10) throw ConfigError("n_grid: every n must be at least 10");
      }
      if (c.K_grid.empty()) c.K_grid = {1.0, 2.0, 3.0, 4.0};
      for (std::size_t i = 0; i < c.K_grid.size(); ++i) {
        if (!(c.K_grid[i] > 0.0)) throw ConfigError("localization.K_grid: entries must be positive");
        if (i > 0 && !(c.K_grid[i] > c.K_grid[i - 1])) {
          throw ConfigError("localization.K_grid: must be strictly increasing");
        }
      }
      break;
    case ExperimentKind::FitRate:
      if (c.pairs.size() < 3) throw ConfigError("fit_rate: needs at least three (n, E_n) pairs");
      for (const auto& [n, e] : c.pairs) {
        if (!(n > 0.0) || !(e > 0.0)) throw ConfigError("fit_rate: n and E_n must be positive");
      }
      break;
  }
  if (c.experiment != ExperimentKind::FitRate && c.t_grid.empty() &&
      (c.experiment == ExperimentKind::ChernoffTable || c.experiment == ExperimentKind::BerryEsseen ||
       c.experiment == ExperimentKind::OracleClt)) {
    throw ConfigError("t_grid: must not be empty");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto base = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), base.empty() ? "." : base.string());
}

json canonical_json(const RunConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["seed"] = c.seed;
  const ScenarioSpec& s = c.scenario;
  j["scenario"] = {
      {"truth", s.truth},
      {"point", s.point.boundary ? json{{"kind", "boundary"}, {"rho", s.point.rho}}
                                 : json{{"kind", "interior"}, {"x0", s.point.x0}}},
      {"error", to_string(s.error)},
      {"sigma", s.sigma},
  };
  switch (s.design.kind) {
    case DesignSpec::Kind::Fixed:
      j["scenario"]["design"] = {{"kind", "fixed"}, {"lambda0", s.design.lambda0}};
      break;
    case DesignSpec::Kind::RandomUniform:
      j["scenario"]["design"] = {{"kind", "random_uniform"}};
      break;
    case DesignSpec::Kind::RandomBetaRegular:
      j["scenario"]["design"] = {{"kind", "beta_regular"}, {"beta", s.design.beta}, {"kappa", s.design.kappa}};
      break;
  }
  j["n_reps"] = c.n_reps;
  j["full_scale_reps"] = c.full_scale_reps;
  j["n_grid"] = c.n_grid;
  j["t_grid"] = c.t_grid;
  json precision = json::object();
  if (c.step) precision["step"] = *c.step;
  if (c.truncation) precision["truncation"] = *c.truncation;
  j["precision"] = precision;
  switch (c.experiment) {
    case ExperimentKind::ChernoffTable:
      j["limit"] = {{"sampler", c.argmax_sampler ? "argmax" : "gcm"}};
      if (c.d_alpha) j["limit"]["alpha"] = *c.d_alpha;
      break;
    case ExperimentKind::BerryEsseen:
      // The table is identified by content hash, not by path.
      j["reference"] = {{"reps", c.reference_reps}};
      if (!c.reference_table.empty()) {
        std::ifstream in(c.reference_table, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        j["reference"] = {{"table_fnv1a64", hex64(fnv1a64(buf.str()))}};
      }
      break;
    case ExperimentKind::OracleClt:
      j["oracle"] = {{"h1", c.h1}, {"h2", c.h2}};
      break;
    case ExperimentKind::AnticoncProbe: {
      json drifts = json::array();
      for (const auto& d : c.drifts) {
        switch (d.kind) {
          case DriftProbe::Kind::Zero: drifts.push_back({{"kind", "zero"}}); break;
          case DriftProbe::Kind::Linear: drifts.push_back({{"kind", "linear"}, {"mu", d.mu}}); break;
          case DriftProbe::Kind::Quadratic:
            drifts.push_back({{"kind", "quadratic"}, {"b", d.b}, {"t", d.t}});
            break;
        }
      }
      j["anticonc"] = {{"eps_grid", c.eps_grid},
                       {"drifts", drifts},
                       {"method", c.sup_method == SupMethod::Grid ? "grid" : "bridge"}};
      break;
    }
    case ExperimentKind::Localization:
      j["localization"] = {{"K_grid", c.K_grid}};
      break;
    case ExperimentKind::FitRate: {
      json pairs = json::array();
      for (const auto& [n, e] : c.pairs) pairs.push_back({n, e});
      j["fit_rate"] = {{"pairs", pairs}};
      break;
    }
  }
  return j;
}

std::string spec_hash(const RunConfig& cfg) { return hex64(fnv1a64(canonical_json(cfg).dump())); }

}  // namespace chernoff::cli

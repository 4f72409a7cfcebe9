#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chernoff/anticonc.hpp"
#include "chernoff/dgp.hpp"
#include "chernoff/drift.hpp"

namespace chernoff::cli {

inline constexpr const char* kToolName = "chernoff-lab";
inline constexpr const char* kToolVersion = "0.1.0";

enum class ExperimentKind { ChernoffTable, BerryEsseen, OracleClt, AnticoncProbe, Localization, FitRate };

const char* to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment(const std::string& name);

/// Drift P on [0, 1] for the anti-concentration probe: 0, mu h or b h^2 - t h.
struct DriftProbe {
  enum class Kind { Zero, Linear, Quadratic };
  Kind kind = Kind::Zero;
  double mu = 0.0;
  double b = 0.0;
  double t = 0.0;

  Polynomial poly() const;
  /// Lipschitz constant of P on [0, 1].
  double lipschitz() const;
  std::string describe() const;
};

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::ChernoffTable;
  std::uint64_t seed = 0;
  ScenarioSpec scenario;
  std::vector<std::size_t> n_grid;
  std::size_t n_reps = 0;
  std::size_t full_scale_reps = 500000;
  std::vector<double> t_grid;
  std::string output_dir;
  std::optional<double> step;
  std::optional<double> truncation;
  std::optional<double> budget_seconds;

  // chernoff-table
  std::optional<int> d_alpha;
  bool argmax_sampler = false;
  // berry-esseen
  std::string reference_table;  // resolved path, empty = simulate
  std::size_t reference_reps = 1000000;
  // oracle-clt
  double h1 = 1.0;
  double h2 = 1.0;
  // anticonc-probe
  std::vector<double> eps_grid;
  std::vector<DriftProbe> drifts;
  SupMethod sup_method = SupMethod::Bridge;
  // localization
  std::vector<double> K_grid;
  // fit-rate
  std::vector<std::pair<double, double>> pairs;
};

/// Parses and validates a JSON config. Unknown keys are rejected. Relative
/// paths are resolved against base_dir. Throws ParseError for unreadable
/// JSON and ConfigError for schema or value violations.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Every field with defaults filled in, output_dir and budget excluded.
nlohmann::json canonical_json(const RunConfig& cfg);
std::string spec_hash(const RunConfig& cfg);

struct RunOptions {
  std::string out_dir;  // overrides cfg.output_dir when nonempty
  unsigned workers = 1;
  std::optional<std::uint64_t> seed_override;
  bool full_scale = false;
  bool dry_run = false;
  std::optional<double> budget_seconds;
  std::ostream* log = nullptr;
};

/// Applies seed override and full-scale replication counts.
RunConfig resolve(RunConfig cfg, const RunOptions& opts);

/// Rough single-core cost in seconds, divided by the worker count.
double estimate_seconds(const RunConfig& cfg, unsigned workers);

struct RunResult {
  std::string out_dir;
  std::vector<std::string> artifacts;
  nlohmann::json summary;
  std::string report;  // human-readable summary table
};

/// Runs the experiment. All artifacts are computed before any is written;
/// each file is written to a temporary name and renamed into place.
RunResult run(const RunConfig& cfg, const RunOptions& opts);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> checked;
  std::vector<std::string> problems;
};

/// Checks a CSV artifact or every artifact in a run directory: header and
/// provenance line, value ranges, monotonicity, and the spec hash against
/// config.json when present. With `against`, the artifacts must also be
/// byte-identical to the same-named files there.
VerifyReport verify(const std::string& path, const std::string& against = {});

/// Exit status for an exception escaping run(): 2 parse, 3 validation, 4 I/O, 1 otherwise.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace chernoff::cli

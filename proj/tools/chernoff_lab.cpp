#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chernoff/cli.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/parallel.hpp"

using namespace chernoff;

int main(int argc, char** argv) {
  CLI::App app{"Berry-Esseen experiments for isotonic regression"};
  app.set_version_flag("--version", std::string(cli::kToolName) + " " + cli::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  unsigned workers = default_workers();
  std::uint64_t seed = 0;
  double budget = 0.0;
  bool full_scale = false, dry_run = false, quiet = false;

  const char* kinds[] = {"chernoff-table", "berry-esseen", "oracle-clt", "anticonc-probe", "localization", "fit-rate"};
  for (const char* kind : kinds) {
    auto* sub = app.add_subcommand(kind, std::string("run a ") + kind + " experiment");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed-override", seed, "replace the config's master seed");
    sub->add_flag("--full-scale", full_scale, "use full_scale_reps replications");
    sub->add_flag("--dry-run", dry_run, "print the cost estimate and exit");
    sub->add_option("--budget", budget, "refuse runs estimated above this many seconds");
    sub->add_flag("--quiet", quiet, "no progress messages");
  }
  std::string artifact, against;
  auto* verify = app.add_subcommand("verify", "check stored artifacts");
  verify->add_option("path", artifact, "CSV file or run directory")->required();
  verify->add_option("--against", against, "require byte-identical twins in this file or directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      const cli::VerifyReport r = cli::verify(artifact, against);
      for (const auto& f : r.checked) std::cout << "checked " << f << "\n";
      for (const auto& p : r.problems) std::cout << "FAIL " << p << "\n";
      std::cout << (r.ok ? "PASS" : "FAIL") << "\n";
      return r.ok ? 0 : 1;
    }
    const std::string kind = app.get_subcommands().front()->get_name();
    cli::RunConfig cfg = cli::load_config(config_path);
    if (cfg.experiment != cli::parse_experiment(kind)) {
      throw ConfigError("config describes a " + std::string(cli::to_string(cfg.experiment)) +
                        " experiment, not " + kind);
    }
    cli::RunOptions opts;
    opts.out_dir = out_dir;
    opts.workers = workers;
    if (app.get_subcommands().front()->count("--seed-override")) opts.seed_override = seed;
    opts.full_scale = full_scale;
    opts.dry_run = dry_run;
    if (budget > 0.0) opts.budget_seconds = budget;
    if (!quiet) opts.log = &std::cerr;
    const cli::RunResult r = cli::run(cfg, opts);
    std::cout << r.report;
    for (const auto& a : r.artifacts) std::cout << "wrote " << a << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "chernoff-lab: " << e.what() << "\n";
    return cli::exit_code_for(e);
  }
}

#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "dunkl/harness/config.hpp"
#include "dunkl/harness/report.hpp"
#include "dunkl/harness/suites.hpp"

namespace h = dunkl::harness;

int main(int argc, char** argv) {
  CLI::App app{"Dunkl heat-kernel bounds harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long long seed = -1;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const std::map<std::string, std::string> help = {
      {"verify-bounds", "two-sided envelope sweep with empirical constants"},
      {"identities", "heat-equation identities, quadrature checks and inequality families"},
      {"lambda-check", "Lambda by DP against brute force, scaling, Lambda_D band"},
      {"pde-run", "dihedral heat solver run with snapshots and diagnostics"},
      {"volume-check", "exact ball volumes against the comparable"},
  };
  for (const auto& [name, desc] : help) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--seed", seed, "random seed (overrides config)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    h::SweepConfig cfg = h::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) cfg.out = out_dir;

    h::SuiteResult r;
    if (cmd == "verify-bounds") r = h::run_verify_bounds(cfg, jobs);
    else if (cmd == "identities") r = h::run_identity_suite(cfg, jobs);
    else if (cmd == "lambda-check") r = h::run_lambda_crosscheck(cfg, jobs);
    else if (cmd == "pde-run") r = h::run_pde(cfg);
    else r = h::run_volume_check(cfg, jobs);

    h::write_outputs(cfg.out, r);
    std::printf("%s: %s (%zu rows) -> %s\n", r.suite.c_str(), r.pass ? "PASS" : "FAIL", r.table.rows.size(),
                cfg.out.c_str());
    for (const auto& [name, ok] : r.checks.items())
      if (!ok.get<bool>()) std::printf("  failed: %s\n", name.c_str());
    return r.pass ? 0 : 1;
  } catch (const dunkl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

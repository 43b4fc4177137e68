#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "atv/acceptance.hpp"
#include "atv/runner.hpp"

namespace {

atv::OracleKind parse_oracle_kind(const std::string& s) {
  if (s == "paraboloid") return atv::OracleKind::paraboloid;
  if (s == "paraboloid_truncated") return atv::OracleKind::paraboloid_truncated;
  if (s == "box_facet") return atv::OracleKind::box_facet;
  if (s == "front") return atv::OracleKind::front;
  throw CLI::ValidationError("oracle", "unknown oracle '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic total-variation flow experiments"};
  app.require_subcommand(1);

  // ---- run ----
  std::string run_config;
  std::string run_out;
  auto* cmd_run = app.add_subcommand("run", "Execute an experiment config");
  cmd_run->add_option("config", run_config, "Path to the experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_run->add_option("--out", run_out,
                      "Override the output root (run dir becomes OUT/<name>)");

  // ---- oracle ----
  std::string or_kind = "box_facet";
  double or_r = 1.0, or_alpha = 1.0, or_depth = 1.0, or_l = 2.0, or_beta = 1.0;
  int or_n = 129;
  double or_hw = 64.0;
  std::vector<double> or_times;
  std::string or_out = "oracle_out";
  auto* cmd_oracle =
      app.add_subcommand("oracle", "Rasterize an exact solution");
  cmd_oracle->add_option("--kind", or_kind,
                         "paraboloid|paraboloid_truncated|box_facet|front");
  cmd_oracle->add_option("--r", or_r, "Paraboloid R / front half-width");
  cmd_oracle->add_option("--alpha", or_alpha, "Box facet half-side");
  cmd_oracle->add_option("--depth", or_depth, "Box pit depth M");
  cmd_oracle->add_option("--domain-half-width", or_l, "Box domain half-width L");
  cmd_oracle->add_option("--beta", or_beta, "Front vertical-speed weight");
  cmd_oracle->add_option("--grid-n", or_n, "Samples per side");
  cmd_oracle->add_option("--grid-half-width", or_hw, "Grid half-width");
  cmd_oracle->add_option("--times", or_times, "Evaluation times")->required();
  cmd_oracle->add_option("--out", or_out, "Output directory");

  // ---- compare ----
  std::string cp_run, cp_kind = "box_facet", cp_metric = "facet_levels";
  double cp_r = 1.0, cp_alpha = 1.0, cp_depth = 1.0, cp_l = 2.0, cp_beta = 1.0;
  double cp_tol = 0.05;
  int cp_band = 0;
  bool cp_force = false;
  auto* cmd_compare = app.add_subcommand(
      "compare", "Compare a run directory against an exact solution");
  cmd_compare->add_option("--run", cp_run, "Run directory")->required();
  cmd_compare->add_option("--oracle", cp_kind,
                          "paraboloid|paraboloid_truncated|box_facet|front");
  cmd_compare->add_option("--r", cp_r, "Paraboloid R / front half-width");
  cmd_compare->add_option("--alpha", cp_alpha, "Box facet half-side");
  cmd_compare->add_option("--depth", cp_depth, "Box pit depth M");
  cmd_compare->add_option("--domain-half-width", cp_l,
                          "Box domain half-width L");
  cmd_compare->add_option("--beta", cp_beta, "Front vertical-speed weight");
  cmd_compare->add_option("--metric", cp_metric, "linf|l2|facet_levels");
  cmd_compare->add_option("--tol", cp_tol, "Pass/fail tolerance");
  cmd_compare->add_option("--seam-band", cp_band,
                          "Cells to exclude around oracle region seams");
  cmd_compare->add_flag("--force", cp_force,
                        "Proceed despite a config hash mismatch");

  // ---- suite ----
  std::string su_configs = "configs", su_out = "suite_out";
  bool su_full = false;
  auto* cmd_suite =
      app.add_subcommand("suite", "Execute the full acceptance battery");
  cmd_suite->add_option("--configs", su_configs, "Bundled config directory");
  cmd_suite->add_option("--out", su_out, "Scratch/output directory");
  cmd_suite->add_flag(
      "--full", su_full,
      "Include the full-size (N=501) reproduction instead of citing it");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_run) {
      const atv::ExperimentConfig config = atv::load_config(run_config);
      const auto base =
          std::filesystem::path(run_config).parent_path();
      const atv::RunResult res = atv::run_experiment(
          config, run_out.empty() ? std::filesystem::path() : run_out, base);
      std::cout << (res.exit_code == 0 ? "ok: " : "error: ") << res.message
                << "\n";
      if (res.exit_code == 0)
        std::cout << "run dir: " << res.run_dir.string() << "\n";
      return res.exit_code;
    }

    if (*cmd_oracle) {
      atv::OracleSpec spec;
      spec.kind = parse_oracle_kind(or_kind);
      spec.r = or_r;
      spec.alpha = or_alpha;
      spec.depth = or_depth;
      spec.half_width = or_l;
      spec.beta = or_beta;
      std::string error;
      const int rc = atv::dump_oracle(spec, atv::GridSpec(or_n, or_hw),
                                      or_times, or_out, error);
      if (rc != 0)
        std::cerr << "error: " << error << "\n";
      else
        std::cout << "wrote " << or_out << "\n";
      return rc;
    }

    if (*cmd_compare) {
      atv::OracleSpec spec;
      spec.kind = parse_oracle_kind(cp_kind);
      spec.r = cp_r;
      spec.alpha = cp_alpha;
      spec.depth = cp_depth;
      spec.half_width = cp_l;
      spec.beta = cp_beta;
      atv::CompareMetric metric;
      if (cp_metric == "linf")
        metric = atv::CompareMetric::linf;
      else if (cp_metric == "l2")
        metric = atv::CompareMetric::l2;
      else if (cp_metric == "facet_levels")
        metric = atv::CompareMetric::facet_levels;
      else
        throw CLI::ValidationError("metric", "unknown metric " + cp_metric);
      const atv::CompareResult res =
          atv::compare_run(cp_run, spec, metric, cp_tol, cp_band, cp_force);
      std::cout << res.report;
      return res.exit_code;
    }

    if (*cmd_suite) {
      atv::BatteryOptions opt;
      opt.configs_dir = su_configs;
      opt.out_dir = su_out;
      opt.full_size = su_full;
      const auto results = atv::run_acceptance_battery(opt);
      bool all_ok = true;
      for (const auto& r : results) {
        std::printf("criterion %2d %-28s %s  %s\n", r.id, r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.detail.c_str());
        all_ok &= r.passed;
      }
      return all_ok ? atv::kExitOk : atv::kExitComparison;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return atv::kExitValidation;
  }
  return 0;
}

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "atv/analysis.hpp"
#include "atv/config.hpp"
#include "atv/oracles.hpp"

namespace atv {

// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitComparison = 3;

/// Builds the initial datum described by the config (shape, image, oracle
/// rasterization or glyph panel, optionally blurred).
ScalarField build_initial(const ExperimentConfig& config,
                          const std::filesystem::path& base_dir = {});

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::filesystem::path run_dir;
  EvolveResult evolution;  // diagnostics plus requested snapshots
};

/// Executes the experiment and writes the requested artifacts plus a
/// line-oriented manifest (config echo, config hash, per-step diagnostics).
/// Identical configs produce byte-identical artifacts.
RunResult run_experiment(const ExperimentConfig& config,
                         const std::filesystem::path& out_root = {},
                         const std::filesystem::path& base_dir = {});

/// Parsed manifest: ordered key/value pairs plus the embedded config echo.
struct Manifest {
  std::map<std::string, std::string> kv;
  std::string config_echo;    // canonical config text reassembled
  std::uint64_t stated_hash = 0;

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
};
Manifest read_manifest(const std::filesystem::path& run_dir);

struct OracleSpec {
  OracleKind kind = OracleKind::box_facet;
  double r = 1.0;              // paraboloid R / front half-width
  double alpha = 1.0;          // box facet half-side
  double depth = 1.0;          // box pit depth M
  double half_width = 2.0;     // box domain half-width L
  double beta = 1.0;           // front vertical-speed weight

  ScalarField rasterize_at(const GridSpec& grid, double t) const;
  /// Samples within `band` cells of an oracle region seam are excluded
  /// from field comparisons (1 = keep, 0 = excluded).
  std::vector<std::uint8_t> seam_mask(const GridSpec& grid, double t,
                                      int band) const;
};

enum class CompareMetric { linf, l2, facet_levels };

struct CompareResult {
  int exit_code = kExitOk;
  std::string report;
  double worst = 0.0;  // worst per-snapshot metric value
};

/// Compares a run directory's snapshot fields against an exact solution at
/// the rescaled times t = beta * dt * m.  facet_levels compares the two
/// dominant value clusters against the closed-form levels.  Refuses a run
/// whose manifest hash does not match its config echo unless force is set.
CompareResult compare_run(const std::filesystem::path& run_dir,
                          const OracleSpec& oracle, CompareMetric metric,
                          double tolerance, int seam_band, bool force = false);

/// Rasterizes an oracle at the given times into field/image files and a
/// value table; returns the directory written.
int dump_oracle(const OracleSpec& oracle, const GridSpec& grid,
                const std::vector<double>& times,
                const std::filesystem::path& out_dir, std::string& error);

}  // namespace atv

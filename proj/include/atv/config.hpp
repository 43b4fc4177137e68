#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atv/analysis.hpp"
#include "atv/flow.hpp"
#include "atv/grid.hpp"
#include "atv/shapes.hpp"

namespace atv {

enum class Equation { anisotropic_tv, diffusive_anisotropic_tv, linear_diffusion };

enum class InitialKind { shape, image, oracle, glyphs };
enum class OracleKind { paraboloid, paraboloid_truncated, box_facet, front };

struct InitialSpec {
  InitialKind kind = InitialKind::shape;
  // kind == shape
  ShapeKind shape = ShapeKind::linf_ball;
  double radius = 1.0;
  double depth = 1.0;
  double center_x1 = 0.0, center_x2 = 0.0;
  // kind == image
  std::string image_path;
  double image_min = -50.0, image_max = 0.0;
  // kind == oracle
  OracleKind oracle = OracleKind::box_facet;
  double oracle_r = 1.0;      // paraboloid R / front half-width
  double oracle_alpha = 1.0;  // box facet half-side
  double oracle_time = 0.0;   // rasterization time
  // kind == glyphs
  bool glyph_corrupted = true;
  std::uint64_t glyph_seed = 1;
  // applied last for any kind
  double blur_sigma = 0.0;
};

struct OutputSpec {
  std::string dir = "out";
  std::vector<int> snapshots;
  bool write_field = true;
  bool write_image = true;
  double image_min = -50.0, image_max = 0.0;
  std::optional<double> contour_level;
  std::optional<std::pair<Axis, double>> cross_section;
  bool facet_report = true;
  bool diagnostics = true;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Equation equation = Equation::anisotropic_tv;
  GridSpec grid{2, 0.5};
  InitialSpec initial;
  FlowParams params;
  OutputSpec outputs;

  /// Field-level validation; throws std::invalid_argument with the
  /// offending key in the message.
  void validate() const;

  /// Deterministic normalized "section.key = value" listing; the config
  /// hash is FNV-1a 64 over this text.
  std::string canonical_text() const;
  std::uint64_t hash() const;
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

const char* to_string(Equation e);
const char* to_string(InitialKind k);
const char* to_string(OracleKind k);
const char* to_string(ShapeKind k);

}  // namespace atv

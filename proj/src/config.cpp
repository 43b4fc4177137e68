#include "atv/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace atv {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct KeyValues {
  std::map<std::string, std::string> kv;  // "section.key" -> value
  std::string origin;

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  std::string get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument(origin + ": missing key [" + key + "]");
    return it->second;
  }
  std::string get_or(const std::string& key, const std::string& dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }
  double get_double(const std::string& key) const {
    const std::string s = get(key);
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (...) {
      throw std::invalid_argument(origin + ": invalid number for [" + key +
                                  "]: '" + s + "'");
    }
  }
  double get_double_or(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
  }
  long get_int(const std::string& key) const {
    const std::string s = get(key);
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (...) {
      throw std::invalid_argument(origin + ": invalid integer for [" + key +
                                  "]: '" + s + "'");
    }
  }
  long get_int_or(const std::string& key, long dflt) const {
    return has(key) ? get_int(key) : dflt;
  }
  bool get_bool_or(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    const std::string s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument(origin + ": invalid boolean for [" + key +
                                "]: '" + s + "'");
  }
};

KeyValues tokenize(const std::string& text, const std::string& origin) {
  KeyValues out;
  out.origin = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || section.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": key outside a [section]");
    out.kv[section + "." + key] = value;
  }
  return out;
}

Equation parse_equation(const std::string& s, const std::string& origin) {
  if (s == "anisotropic_tv") return Equation::anisotropic_tv;
  if (s == "diffusive_anisotropic_tv") return Equation::diffusive_anisotropic_tv;
  if (s == "linear_diffusion") return Equation::linear_diffusion;
  throw std::invalid_argument(origin + ": unknown [experiment.equation] '" + s +
                              "'");
}

ShapeKind parse_shape(const std::string& s, const std::string& origin) {
  if (s == "l1_ball") return ShapeKind::l1_ball;
  if (s == "l2_ball") return ShapeKind::l2_ball;
  if (s == "linf_ball") return ShapeKind::linf_ball;
  if (s == "composite_s4") return ShapeKind::composite_s4;
  throw std::invalid_argument(origin + ": unknown [initial.shape] '" + s + "'");
}

OracleKind parse_oracle(const std::string& s, const std::string& origin) {
  if (s == "paraboloid") return OracleKind::paraboloid;
  if (s == "paraboloid_truncated") return OracleKind::paraboloid_truncated;
  if (s == "box_facet") return OracleKind::box_facet;
  if (s == "front") return OracleKind::front;
  throw std::invalid_argument(origin + ": unknown [initial.oracle] '" + s + "'");
}

}  // namespace

const char* to_string(Equation e) {
  switch (e) {
    case Equation::anisotropic_tv: return "anisotropic_tv";
    case Equation::diffusive_anisotropic_tv: return "diffusive_anisotropic_tv";
    case Equation::linear_diffusion: return "linear_diffusion";
  }
  return "?";
}

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::shape: return "shape";
    case InitialKind::image: return "image";
    case InitialKind::oracle: return "oracle";
    case InitialKind::glyphs: return "glyphs";
  }
  return "?";
}

const char* to_string(OracleKind k) {
  switch (k) {
    case OracleKind::paraboloid: return "paraboloid";
    case OracleKind::paraboloid_truncated: return "paraboloid_truncated";
    case OracleKind::box_facet: return "box_facet";
    case OracleKind::front: return "front";
  }
  return "?";
}

const char* to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::l1_ball: return "l1_ball";
    case ShapeKind::l2_ball: return "l2_ball";
    case ShapeKind::linf_ball: return "linf_ball";
    case ShapeKind::composite_s4: return "composite_s4";
    case ShapeKind::custom_mask: return "custom_mask";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  const KeyValues kv = tokenize(text, origin);
  ExperimentConfig c;
  c.name = kv.get("experiment.name");
  c.equation = parse_equation(kv.get("experiment.equation"), origin);
  c.grid = GridSpec(int(kv.get_int("grid.n")), kv.get_double("grid.half_width"));

  InitialSpec& ini = c.initial;
  const std::string kind = kv.get("initial.kind");
  if (kind == "shape") {
    ini.kind = InitialKind::shape;
    ini.shape = parse_shape(kv.get("initial.shape"), origin);
    ini.radius = kv.get_double("initial.radius");
    ini.depth = kv.get_double("initial.depth");
    ini.center_x1 = kv.get_double_or("initial.center_x1", 0.0);
    ini.center_x2 = kv.get_double_or("initial.center_x2", 0.0);
  } else if (kind == "image") {
    ini.kind = InitialKind::image;
    ini.image_path = kv.get("initial.image");
    ini.image_min = kv.get_double_or("initial.image_min", -50.0);
    ini.image_max = kv.get_double_or("initial.image_max", 0.0);
    ini.depth = kv.get_double_or("initial.depth", -ini.image_min);
  } else if (kind == "oracle") {
    ini.kind = InitialKind::oracle;
    ini.oracle = parse_oracle(kv.get("initial.oracle"), origin);
    ini.oracle_r = kv.get_double_or("initial.oracle_r", 1.0);
    ini.oracle_alpha = kv.get_double_or("initial.oracle_alpha", 1.0);
    ini.oracle_time = kv.get_double_or("initial.oracle_time", 0.0);
    ini.depth = kv.get_double_or("initial.depth", 1.0);
  } else if (kind == "glyphs") {
    ini.kind = InitialKind::glyphs;
    ini.glyph_corrupted = kv.get_or("initial.glyph_variant", "corrupted") ==
                          "corrupted";
    ini.glyph_seed = std::uint64_t(kv.get_int_or("initial.glyph_seed", 1));
    ini.depth = kv.get_double_or("initial.depth", 50.0);
  } else {
    throw std::invalid_argument(origin + ": unknown [initial.kind] '" + kind +
                                "'");
  }
  ini.blur_sigma = kv.get_double_or("initial.blur_sigma", 0.0);

  FlowParams& p = c.params;
  p.gamma = kv.get_double("params.gamma");
  p.beta = kv.get_double("params.beta");
  p.dt = kv.get_double("params.dt");
  p.tau = kv.get_double_or("params.tau", 0.125);
  p.tol = kv.get_double_or("params.tol", 1e-5);
  p.max_inner = int(kv.get_int_or("params.max_inner", 10000));
  p.max_outer = int(kv.get_int("params.max_outer"));

  OutputSpec& o = c.outputs;
  o.dir = kv.get_or("outputs.dir", "out/" + c.name);
  {
    std::istringstream ss(kv.get_or("outputs.snapshots", ""));
    int m;
    while (ss >> m) o.snapshots.push_back(m);
  }
  o.write_field = kv.get_bool_or("outputs.write_field", true);
  o.write_image = kv.get_bool_or("outputs.write_image", true);
  o.image_min = kv.get_double_or("outputs.image_min", -50.0);
  o.image_max = kv.get_double_or("outputs.image_max", 0.0);
  if (kv.has("outputs.contour_level"))
    o.contour_level = kv.get_double("outputs.contour_level");
  if (kv.has("outputs.cross_section_axis")) {
    const std::string axis = kv.get("outputs.cross_section_axis");
    if (axis != "x1" && axis != "x2")
      throw std::invalid_argument(origin +
                                  ": [outputs.cross_section_axis] must be x1 "
                                  "or x2");
    o.cross_section = {axis == "x1" ? Axis::x1 : Axis::x2,
                       kv.get_double_or("outputs.cross_section_coord", 0.0)};
  }
  o.facet_report = kv.get_bool_or("outputs.facet_report", true);
  o.diagnostics = kv.get_bool_or("outputs.diagnostics", true);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

void ExperimentConfig::validate() const {
  const std::string where = "config '" + name + "'";
  params.validate();
  if (equation == Equation::anisotropic_tv) {
    if (params.gamma != 0.0)
      throw std::invalid_argument(where +
                                  ": equation anisotropic_tv forces gamma = 0");
    if (!(params.beta > 0.0))
      throw std::invalid_argument(where + ": anisotropic_tv needs beta > 0");
  } else if (equation == Equation::diffusive_anisotropic_tv) {
    if (!(params.gamma > 0.0))
      throw std::invalid_argument(
          where + ": diffusive_anisotropic_tv needs gamma > 0");
    if (!(params.beta > 0.0))
      throw std::invalid_argument(where +
                                  ": diffusive_anisotropic_tv needs beta > 0");
  } else {
    if (!(params.gamma > 0.0))
      throw std::invalid_argument(where + ": linear_diffusion needs gamma > 0");
    if (params.beta != 0.0)
      throw std::invalid_argument(where +
                                  ": linear_diffusion forces beta = 0");
  }
  int prev = 0;
  for (int m : outputs.snapshots) {
    if (m <= prev)
      throw std::invalid_argument(
          where + ": [outputs.snapshots] must be strictly increasing");
    if (m > params.max_outer)
      throw std::invalid_argument(where +
                                  ": snapshot index exceeds params.max_outer");
    prev = m;
  }
  if (initial.kind == InitialKind::shape &&
      !(initial.radius > 0.0 && initial.radius < grid.half_width))
    throw std::invalid_argument(where +
                                ": [initial.radius] must lie in (0, half_width)");
  if (initial.kind == InitialKind::glyphs && grid.n < 64)
    throw std::invalid_argument(where + ": glyphs need [grid.n] >= 64");
  if (!(initial.blur_sigma >= 0.0))
    throw std::invalid_argument(where + ": [initial.blur_sigma] must be >= 0");
}

std::string ExperimentConfig::canonical_text() const {
  std::string s;
  auto line = [&s](const std::string& key, const std::string& value) {
    s += key + " = " + value + "\n";
  };
  line("experiment.name", name);
  line("experiment.equation", to_string(equation));
  line("grid.n", std::to_string(grid.n));
  line("grid.half_width", fmt(grid.half_width));
  line("initial.kind", to_string(initial.kind));
  switch (initial.kind) {
    case InitialKind::shape:
      line("initial.shape", to_string(initial.shape));
      line("initial.radius", fmt(initial.radius));
      line("initial.depth", fmt(initial.depth));
      line("initial.center_x1", fmt(initial.center_x1));
      line("initial.center_x2", fmt(initial.center_x2));
      break;
    case InitialKind::image:
      line("initial.image", initial.image_path);
      line("initial.image_min", fmt(initial.image_min));
      line("initial.image_max", fmt(initial.image_max));
      break;
    case InitialKind::oracle:
      line("initial.oracle", to_string(initial.oracle));
      line("initial.oracle_r", fmt(initial.oracle_r));
      line("initial.oracle_alpha", fmt(initial.oracle_alpha));
      line("initial.oracle_time", fmt(initial.oracle_time));
      line("initial.depth", fmt(initial.depth));
      break;
    case InitialKind::glyphs:
      line("initial.glyph_variant",
           initial.glyph_corrupted ? "corrupted" : "clean");
      line("initial.glyph_seed", std::to_string(initial.glyph_seed));
      line("initial.depth", fmt(initial.depth));
      break;
  }
  line("initial.blur_sigma", fmt(initial.blur_sigma));
  line("params.gamma", fmt(params.gamma));
  line("params.beta", fmt(params.beta));
  line("params.dt", fmt(params.dt));
  line("params.tau", fmt(params.tau));
  line("params.tol", fmt(params.tol));
  line("params.max_inner", std::to_string(params.max_inner));
  line("params.max_outer", std::to_string(params.max_outer));
  std::string snaps;
  for (int m : outputs.snapshots) {
    if (!snaps.empty()) snaps += " ";
    snaps += std::to_string(m);
  }
  line("outputs.snapshots", snaps);
  line("outputs.write_field", outputs.write_field ? "true" : "false");
  line("outputs.write_image", outputs.write_image ? "true" : "false");
  line("outputs.image_min", fmt(outputs.image_min));
  line("outputs.image_max", fmt(outputs.image_max));
  if (outputs.contour_level)
    line("outputs.contour_level", fmt(*outputs.contour_level));
  if (outputs.cross_section) {
    line("outputs.cross_section_axis",
         outputs.cross_section->first == Axis::x1 ? "x1" : "x2");
    line("outputs.cross_section_coord", fmt(outputs.cross_section->second));
  }
  line("outputs.facet_report", outputs.facet_report ? "true" : "false");
  line("outputs.diagnostics", outputs.diagnostics ? "true" : "false");
  return s;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical_text()); }

}  // namespace atv

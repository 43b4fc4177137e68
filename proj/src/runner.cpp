#include "atv/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "atv/field_ops.hpp"
#include "atv/image_io.hpp"

namespace atv {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string step_prefix(int m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step.%06d.", m);
  return buf;
}

std::string snapshot_name(const char* stem, int m, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_m%06d%s", stem, m, ext);
  return buf;
}

}  // namespace

ScalarField build_initial(const ExperimentConfig& config,
                          const fs::path& base_dir) {
  const InitialSpec& ini = config.initial;
  ScalarField f;
  switch (ini.kind) {
    case InitialKind::shape: {
      ShapeSpec spec;
      spec.kind = ini.shape;
      spec.radius = ini.radius;
      spec.depth = ini.depth;
      spec.center_x1 = ini.center_x1;
      spec.center_x2 = ini.center_x2;
      f = make_shape(spec, config.grid);
      break;
    }
    case InitialKind::image: {
      fs::path p = ini.image_path;
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      ValueMap map{ini.image_min, ini.image_max, -ini.image_min};
      f = read_image(p, map, config.grid.half_width);
      if (f.grid.n != config.grid.n)
        throw std::invalid_argument("initial image size " +
                                    std::to_string(f.grid.n) +
                                    " does not match [grid.n]");
      break;
    }
    case InitialKind::oracle: {
      switch (ini.oracle) {
        case OracleKind::paraboloid:
          f = rasterize(ParaboloidSolution(ini.oracle_r, false), config.grid,
                        ini.oracle_time);
          break;
        case OracleKind::paraboloid_truncated:
          f = rasterize(ParaboloidSolution(ini.oracle_r, true), config.grid,
                        ini.oracle_time);
          break;
        case OracleKind::box_facet:
          f = rasterize(BoxFacetSolution(ini.oracle_alpha,
                                         config.grid.half_width, ini.depth),
                        config.grid, ini.oracle_time);
          break;
        case OracleKind::front:
          f = rasterize(TravelingFront(ini.oracle_alpha, config.params.beta),
                        config.grid, ini.oracle_time);
          break;
      }
      break;
    }
    case InitialKind::glyphs: {
      GlyphPanel panel =
          make_glyph_panel(config.grid, ini.depth, ini.glyph_seed);
      f = ini.glyph_corrupted ? std::move(panel.corrupted)
                              : std::move(panel.clean);
      break;
    }
  }
  if (ini.blur_sigma > 0.0) f = gaussian_blur(f, ini.blur_sigma);
  return f;
}

RunResult run_experiment(const ExperimentConfig& config,
                         const fs::path& out_root, const fs::path& base_dir) {
  RunResult res;
  try {
    config.validate();
  } catch (const std::exception& e) {
    res.exit_code = kExitValidation;
    res.message = e.what();
    return res;
  }

  fs::path run_dir = out_root.empty() ? fs::path(config.outputs.dir)
                                      : out_root / config.name;
  fs::create_directories(run_dir);
  res.run_dir = run_dir;

  ScalarField f;
  try {
    f = build_initial(config, base_dir);
  } catch (const std::exception& e) {
    res.exit_code = kExitValidation;
    res.message = std::string("initial datum: ") + e.what();
    return res;
  }

  const OutputSpec& out = config.outputs;
  const ValueMap image_map{out.image_min, out.image_max,
                           -out.image_min};

  std::ostringstream manifest;
  manifest << "manifest = atv-run-1\n";
  manifest << "config_hash = " << hash_hex(config.hash()) << "\n";
  {
    std::istringstream echo(config.canonical_text());
    std::string line;
    while (std::getline(echo, line)) manifest << "config." << line << "\n";
  }
  manifest << "tau_warning = "
           << (config.params.tau_exceeds_guarantee() ? "1" : "0") << "\n";

  std::ostringstream facet_csv;
  facet_csv << "t,facet_area,strip_area_x1,strip_area_x2,min_level_area,"
               "energy,rate\n";
  std::ostringstream diag_csv;
  diag_csv << "m,t,inner_iterations,final_relative_change,"
              "dual_feasibility_excess,mean_drift,energy,rate\n";

  bool all_converged = true;
  int first_bad_step = 0;

  auto on_step = [&](int m, const ScalarField& u, const StepDiagnostics& d) {
    manifest << step_prefix(m) << "inner_iterations = " << d.inner_iterations
             << "\n";
    manifest << step_prefix(m)
             << "final_relative_change = " << fmt(d.final_relative_change)
             << "\n";
    manifest << step_prefix(m)
             << "dual_feasibility_excess = " << fmt(d.dual_feasibility_excess)
             << "\n";
    manifest << step_prefix(m) << "mean_drift = " << fmt(d.mean_drift) << "\n";
    manifest << step_prefix(m) << "energy = " << fmt(d.energy) << "\n";
    manifest << step_prefix(m) << "rate = " << fmt(d.rate) << "\n";
    if (!d.converged && all_converged) {
      all_converged = false;
      first_bad_step = m;
    }
    if (out.diagnostics) {
      diag_csv << m << "," << fmt(d.time) << "," << d.inner_iterations << ","
               << fmt(d.final_relative_change) << ","
               << fmt(d.dual_feasibility_excess) << "," << fmt(d.mean_drift)
               << "," << fmt(d.energy) << "," << fmt(d.rate) << "\n";
    }
    bool is_snapshot = false;
    for (int s : out.snapshots) is_snapshot |= (s == m);
    if (!is_snapshot) return;

    if (out.write_field) {
      const std::string name = snapshot_name("u", m, ".field");
      write_field(run_dir / name, u);
      manifest << "snapshot." << m << ".field = " << name << "\n";
    }
    if (out.write_image) {
      const std::string name = snapshot_name("u", m, ".pgm");
      write_pgm(run_dir / name, u, image_map, true);
      write_value_map_sidecar(run_dir / (name + ".map"), image_map);
      manifest << "snapshot." << m << ".image = " << name << "\n";
    }
    if (out.contour_level) {
      const ContourSet cs = extract_contours(u, *out.contour_level);
      write_contours_txt(run_dir / snapshot_name("contour", m, ".txt"), cs);
      write_contours_svg(run_dir / snapshot_name("contour", m, ".svg"), cs,
                         u.grid);
    }
    if (out.cross_section) {
      const auto section =
          cross_section(u, out.cross_section->first, out.cross_section->second);
      std::ofstream cs_out(run_dir / snapshot_name("section", m, ".txt"),
                           std::ios::trunc);
      for (const auto& [coord, value] : section)
        cs_out << fmt(coord) << " " << fmt(value) << "\n";
    }
    if (out.facet_report) {
      const FacetReport rep = facet_report(u);
      facet_csv << fmt(d.time) << "," << fmt(rep.facet_area) << ","
                << fmt(rep.strip_area_x1) << "," << fmt(rep.strip_area_x2)
                << "," << fmt(rep.min_level_area) << "," << fmt(d.energy)
                << "," << fmt(d.rate) << "\n";
    }
  };

  try {
    res.evolution = evolve(f, config.params, config.params.max_outer,
                           out.snapshots, on_step);
  } catch (const std::exception& e) {
    res.exit_code = kExitValidation;
    res.message = std::string("solver: ") + e.what();
    return res;
  }

  if (out.facet_report) {
    std::ofstream fr(run_dir / "facet_report.csv", std::ios::trunc);
    fr << facet_csv.str();
  }
  if (out.diagnostics) {
    std::ofstream dg(run_dir / "diagnostics.csv", std::ios::trunc);
    dg << diag_csv.str();
  }
  {
    std::ofstream mf(run_dir / "manifest.txt", std::ios::trunc);
    mf << manifest.str();
  }

  if (!all_converged) {
    res.exit_code = kExitNoConvergence;
    res.message = "inner iteration hit max_inner at outer step " +
                  std::to_string(first_bad_step);
    return res;
  }
  res.message = "ok";
  return res;
}

double Manifest::get_double(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("manifest: missing key " + key);
  return std::stod(it->second);
}

int Manifest::get_int(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("manifest: missing key " + key);
  return int(std::stol(it->second));
}

Manifest read_manifest(const fs::path& run_dir) {
  const fs::path path = run_dir / "manifest.txt";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    m.kv[key] = value;
    if (key.rfind("config.", 0) == 0)
      m.config_echo += key.substr(7) + " = " + value + "\n";
  }
  auto it = m.kv.find("config_hash");
  if (it != m.kv.end())
    m.stated_hash = std::stoull(it->second, nullptr, 16);
  return m;
}

ScalarField OracleSpec::rasterize_at(const GridSpec& grid, double t) const {
  switch (kind) {
    case OracleKind::paraboloid:
      return rasterize(ParaboloidSolution(r, false), grid, t);
    case OracleKind::paraboloid_truncated:
      return rasterize(ParaboloidSolution(r, true), grid, t);
    case OracleKind::box_facet:
      return rasterize(BoxFacetSolution(alpha, half_width, depth), grid, t);
    case OracleKind::front:
      return rasterize(TravelingFront(r, beta), grid, t);
  }
  throw std::logic_error("unreachable");
}

std::vector<std::uint8_t> OracleSpec::seam_mask(const GridSpec& grid, double t,
                                                int band) const {
  const int n = grid.n;
  std::vector<std::uint8_t> keep(std::size_t(n) * n, 1);
  if (band <= 0) return keep;

  // region labels, then erode `band` cells around label changes
  std::vector<int> label(std::size_t(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x1 = grid.x1(j), x2 = grid.x2(i);
      int lab = 0;
      switch (kind) {
        case OracleKind::paraboloid:
        case OracleKind::paraboloid_truncated:
          lab = int(ParaboloidSolution(r, kind == OracleKind::paraboloid_truncated)
                        .region(x1, x2, t));
          break;
        case OracleKind::box_facet:
          lab = (std::abs(x1) <= alpha && std::abs(x2) <= alpha) ? 1 : 0;
          break;
        case OracleKind::front:
          lab = int(TravelingFront(r, beta).region(x1, x2));
          break;
      }
      label[std::size_t(i) * n + j] = lab;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int lab = label[std::size_t(i) * n + j];
      bool boundary = false;
      for (int di = -1; di <= 1 && !boundary; ++di)
        for (int dj = -1; dj <= 1 && !boundary; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          if (label[std::size_t(ii) * n + jj] != lab) boundary = true;
        }
      if (!boundary) continue;
      for (int di = -band; di <= band; ++di)
        for (int dj = -band; dj <= band; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          keep[std::size_t(ii) * n + jj] = 0;
        }
    }
  return keep;
}

CompareResult compare_run(const fs::path& run_dir, const OracleSpec& oracle,
                          CompareMetric metric, double tolerance, int seam_band,
                          bool force) {
  CompareResult res;
  std::ostringstream report;
  Manifest man;
  try {
    man = read_manifest(run_dir);
  } catch (const std::exception& e) {
    res.exit_code = kExitValidation;
    res.report = e.what();
    return res;
  }
  const std::uint64_t recomputed = fnv1a64(man.config_echo);
  if (recomputed != man.stated_hash) {
    if (!force) {
      res.exit_code = kExitValidation;
      res.report = "manifest config hash mismatch (use force to override)";
      return res;
    }
    report << "warning: config hash mismatch overridden\n";
  }

  const double beta = man.get_double("config.params.beta");
  const double dt = man.get_double("config.params.dt");
  const int n = man.get_int("config.grid.n");
  const double hw = man.get_double("config.grid.half_width");
  const GridSpec grid(n, hw);

  std::vector<int> snapshots;
  {
    std::istringstream ss(man.kv.count("config.outputs.snapshots")
                              ? man.kv.at("config.outputs.snapshots")
                              : "");
    int m;
    while (ss >> m) snapshots.push_back(m);
  }
  if (snapshots.empty()) {
    res.exit_code = kExitValidation;
    res.report = "run has no snapshots to compare";
    return res;
  }

  bool ok = true;
  for (int m : snapshots) {
    auto it = man.kv.find("snapshot." + std::to_string(m) + ".field");
    if (it == man.kv.end()) {
      res.exit_code = kExitValidation;
      res.report = "snapshot " + std::to_string(m) + " has no field dump";
      return res;
    }
    const ScalarField u = read_field(run_dir / it->second);
    if (u.grid != grid) {
      res.exit_code = kExitValidation;
      res.report = "snapshot grid does not match the manifest grid";
      return res;
    }
    const double t_exact = beta * dt * m;

    double value = 0.0;
    if (metric == CompareMetric::facet_levels) {
      if (oracle.kind != OracleKind::box_facet) {
        res.exit_code = kExitValidation;
        res.report = "facet_levels metric needs the box_facet oracle";
        return res;
      }
      const BoxFacetSolution sol(oracle.alpha, oracle.half_width, oracle.depth);
      const auto [lo, hi] = two_level_clusters(u);
      const double want_lo =
          std::min(sol.inside_level(t_exact), sol.outside_level(t_exact));
      const double want_hi =
          std::max(sol.inside_level(t_exact), sol.outside_level(t_exact));
      value = std::max(std::abs(lo - want_lo), std::abs(hi - want_hi));
      report << "m=" << m << " t=" << t_exact << " levels (" << fmt(lo) << ", "
             << fmt(hi) << ") vs (" << fmt(want_lo) << ", " << fmt(want_hi)
             << ") err=" << fmt(value) << "\n";
    } else {
      ScalarField ref;
      try {
        ref = oracle.rasterize_at(grid, t_exact);
      } catch (const std::exception& e) {
        res.exit_code = kExitValidation;
        res.report = std::string("oracle: ") + e.what();
        return res;
      }
      const auto keep = oracle.seam_mask(grid, t_exact, seam_band);
      double linf = 0.0, l2 = 0.0;
      long kept = 0;
      for (std::size_t k = 0; k < u.v.size(); ++k) {
        if (!keep[k]) continue;
        const double d = std::abs(u.v[k] - ref.v[k]);
        linf = std::max(linf, d);
        l2 += d * d;
        ++kept;
      }
      value = metric == CompareMetric::linf
                  ? linf
                  : std::sqrt(l2 / std::max(kept, 1L));
      report << "m=" << m << " t=" << t_exact << " "
             << (metric == CompareMetric::linf ? "linf" : "rms") << "="
             << fmt(value) << " over " << kept << " samples\n";
    }
    res.worst = std::max(res.worst, value);
    if (!(value <= tolerance)) ok = false;
  }
  report << "worst = " << fmt(res.worst) << " tolerance = " << fmt(tolerance)
         << " -> " << (ok ? "pass" : "FAIL") << "\n";
  res.report = report.str();
  res.exit_code = ok ? kExitOk : kExitComparison;
  return res;
}

int dump_oracle(const OracleSpec& oracle, const GridSpec& grid,
                const std::vector<double>& times, const fs::path& out_dir,
                std::string& error) {
  try {
    fs::create_directories(out_dir);
    std::ostringstream table;
    table << "t,min,max,low_level,high_level\n";
    int idx = 0;
    for (double t : times) {
      const ScalarField u = oracle.rasterize_at(grid, t);
      char stem[48];
      std::snprintf(stem, sizeof stem, "oracle_%03d", idx++);
      write_field(out_dir / (std::string(stem) + ".field"), u);
      const double lo = min_value(u), hi = max_value(u);
      const ValueMap map{lo < hi ? lo : lo - 1.0, hi > lo ? hi : lo + 1.0,
                         hi - lo};
      write_pgm(out_dir / (std::string(stem) + ".pgm"), u, map, true);
      write_value_map_sidecar(out_dir / (std::string(stem) + ".pgm.map"), map);
      const auto [cl, ch] = two_level_clusters(u);
      table << fmt(t) << "," << fmt(lo) << "," << fmt(hi) << "," << fmt(cl)
            << "," << fmt(ch) << "\n";
    }
    std::ofstream tf(out_dir / "values.csv", std::ios::trunc);
    tf << table.str();
    return kExitOk;
  } catch (const std::exception& e) {
    error = e.what();
    return kExitValidation;
  }
}

}  // namespace atv

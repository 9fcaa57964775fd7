#include "henon/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

#include "henon/brody.hpp"
#include "henon/io.hpp"
#include "henon/mapspec.hpp"
#include "henon/reports.hpp"
#include "henon/selftest.hpp"

namespace henon {

namespace {

void emit_file(const std::string& path, const std::string& content) {
  std::string sum = atomic_write(path, content);
  std::cout << "wrote " << path << " bytes=" << content.size() << " fnv1a64=" << sum
            << "\n";
}

void emit_error_record(const Error& e) {
  nlohmann::json rec;
  rec["code"] = e.code;
  rec["message"] = e.what();
  nlohmann::json ctx = nlohmann::json::object();
  if (std::isfinite(e.value)) ctx["value"] = e.value;
  if (e.index >= 0) ctx["index"] = e.index;
  rec["context"] = ctx;
  std::cerr << rec.dump() << "\n";
}

bool is_usage_code(const std::string& code) {
  return code == "map-parse" || code.rfind("bad-", 0) == 0;
}

unsigned env_precision_bits() {
  const char* v = std::getenv("HENON_PRECISION_BITS");
  if (!v) return 0;
  long bits = std::atol(v);
  return bits > 0 ? unsigned(bits) : 0;
}

struct Common {
  std::string map_text = "p = z^2 - 6; a = 0.5";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--map", c.map_text, "map spec, e.g. \"p = z^2 - 6; a = 0.5\"");
  sub->add_option("--seed", c.seed, "seed for deterministic sampling");
}

struct WindowOpts {
  Window win;
  std::string section_kind = "conj";
  std::string base_z = "0", base_w = "0", dir_z = "1", dir_w = "0";
  long n_max = 200;

  Section section() const {
    Section s;
    s.kind = section_kind == "line" ? Section::Kind::Line : Section::Kind::ConjDiagonal;
    s.base << parse_complex_literal(base_z), parse_complex_literal(base_w);
    s.dir << parse_complex_literal(dir_z), parse_complex_literal(dir_w);
    return s;
  }
};

void add_window(CLI::App* sub, WindowOpts& w) {
  sub->add_option("--section", w.section_kind, "section kind: conj | line")
      ->check(CLI::IsMember({"conj", "line"}));
  sub->add_option("--base-z", w.base_z, "section base point, z coordinate");
  sub->add_option("--base-w", w.base_w, "section base point, w coordinate");
  sub->add_option("--dir-z", w.dir_z, "line section direction, z component");
  sub->add_option("--dir-w", w.dir_w, "line section direction, w component");
  sub->add_option("--re0", w.win.re0, "window: min Re(zeta)");
  sub->add_option("--re1", w.win.re1, "window: max Re(zeta)");
  sub->add_option("--im0", w.win.im0, "window: min Im(zeta)");
  sub->add_option("--im1", w.win.im1, "window: max Im(zeta)");
  sub->add_option("--nx", w.win.nx, "grid columns");
  sub->add_option("--ny", w.win.ny, "grid rows");
  sub->add_option("--n-max", w.n_max, "iteration cap per point");
}

const SaddleOrbit& pick_orbit(const std::vector<SaddleOrbit>& orbits, int index) {
  if (index >= 0) {
    if (size_t(index) >= orbits.size())
      throw Error("bad-orbit-index", "orbit index out of range");
    return orbits[size_t(index)];
  }
  const SaddleOrbit* best = nullptr;
  for (const auto& o : orbits)
    if (o.saddle && (!best || std::abs(o.lambda_u) > std::abs(best->lambda_u))) best = &o;
  if (!best) throw Error("pipeline-failed", "no saddle orbit found");
  return *best;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw Error("bad-list", "empty list '" + text + "'");
  return out;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"numerical toolkit for injective Brody curves in Henon dynamics"};
  app.require_subcommand(1);

  // --- classify ---
  auto* classify_cmd =
      app.add_subcommand("classify", "escape classification of a window, CSV + P5 image");
  Common ccom;
  WindowOpts cwin;
  cwin.win.nx = cwin.win.ny = 128;
  bool skip_green = false;
  std::string classify_csv_path = "classify.csv", classify_pgm_path = "classify.pgm";
  add_common(classify_cmd, ccom);
  add_window(classify_cmd, cwin);
  classify_cmd->add_flag("--skip-green", skip_green, "leave the g_plus column empty");
  classify_cmd->add_option("--csv", classify_csv_path, "output CSV path");
  classify_cmd->add_option("--pgm", classify_pgm_path, "output P5 image path");

  // --- green ---
  auto* green_cmd = app.add_subcommand("green", "Green function g+ on a window or point");
  Common gcom;
  WindowOpts gwin;
  gwin.win.nx = gwin.win.ny = 64;
  std::string green_at, green_at_w = "0", green_csv_path = "green.csv";
  double green_tol = 1e-9;
  add_common(green_cmd, gcom);
  add_window(green_cmd, gwin);
  green_cmd->add_option("--at", green_at, "evaluate at a single point z (with --at-w)");
  green_cmd->add_option("--at-w", green_at_w, "w coordinate for --at");
  green_cmd->add_option("--tol", green_tol, "stabilization tolerance");
  green_cmd->add_option("--csv", green_csv_path, "output CSV path");

  // --- periodic ---
  auto* per_cmd = app.add_subcommand("periodic", "periodic orbits by Newton search");
  Common pcom;
  long per_period = 1;
  long per_depth = 20;
  std::string per_csv_path = "periodic.csv";
  add_common(per_cmd, pcom);
  per_cmd->add_option("--period", per_period, "orbit period N");
  per_cmd->add_option("--depth", per_depth, "hyperbolicity estimate depth (steps)");
  per_cmd->add_option("--csv", per_csv_path, "output CSV path");

  // --- manifold ---
  auto* man_cmd =
      app.add_subcommand("manifold", "stable-manifold samples along rays and circles");
  Common mcom;
  long man_period = 1;
  int man_index = -1, man_order = 20;
  ManifoldSampling msamp;
  std::string man_csv_path = "manifold.csv", man_circles = "0.5,5,50";
  add_common(man_cmd, mcom);
  man_cmd->add_option("--period", man_period, "periodic-point period");
  man_cmd->add_option("--orbit-index", man_index, "orbit index; -1 = largest |lambda_u|");
  man_cmd->add_option("--order", man_order, "series order M");
  man_cmd->add_option("--rays", msamp.rays, "number of rays");
  man_cmd->add_option("--ray-points", msamp.ray_points, "samples per ray");
  man_cmd->add_option("--zmax", msamp.z_max, "largest |Z| on rays");
  man_cmd->add_option("--circles", man_circles, "circle radii, comma separated");
  man_cmd->add_option("--circle-points", msamp.circle_points, "samples per circle");
  man_cmd->add_option("--csv", man_csv_path, "output CSV path");

  // --- reparam ---
  auto* rep_cmd = app.add_subcommand("reparam", "Brody reparametrization pipeline");
  Common rcom;
  PipelineOptions popt;
  bool rep_force = false, rep_no_ladder = false;
  unsigned rep_bits = 0;
  std::string rep_csv_path = "reparam.csv", rep_profiles_dir;
  add_common(rep_cmd, rcom);
  rep_cmd->add_option("--n-max", popt.n_max, "number of pipeline iterates");
  rep_cmd->add_option("--period", popt.period, "periodic-point period");
  rep_cmd->add_option("--orbit-index", popt.orbit_index,
                      "orbit index; -1 = largest |lambda_u|");
  rep_cmd->add_option("--order", popt.series_order, "series order M");
  rep_cmd->add_option("--grid", popt.reparam.grid, "H_n maximization grid (>= 32)");
  rep_cmd->add_option("--injectivity-samples", popt.reparam.injectivity_samples,
                      "samples for the injectivity gap (>= 100)");
  rep_cmd->add_option("--bits", rep_bits, "fixed mantissa bits (overrides the ladder)");
  rep_cmd->add_flag("--no-ladder", rep_no_ladder, "stop instead of raising precision");
  rep_cmd->add_flag("--force", rep_force, "run even when |a| > 1");
  rep_cmd->add_option("--csv", rep_csv_path, "per-iterate CSV path");
  rep_cmd->add_option("--profiles-dir", rep_profiles_dir,
                      "directory for per-n speed-profile CSVs");

  // --- gallery ---
  auto* gal_cmd = app.add_subcommand("gallery", "speed profiles of the example curves");
  Common galcom;
  std::string gal_radii = "1,2,5,10,20,30,50", gal_csv_path = "gallery.csv";
  int gal_grid = 720;
  add_common(gal_cmd, galcom);
  gal_cmd->add_option("--radii", gal_radii, "circle radii, comma separated");
  gal_cmd->add_option("--grid", gal_grid, "angular samples per circle");
  gal_cmd->add_option("--csv", gal_csv_path, "output CSV path");

  // --- selftest ---
  auto* self_cmd = app.add_subcommand("selftest", "run the full acceptance suite");
  SelftestOptions sopt;
  self_cmd->add_option("--map", sopt.map_text, "map spec");
  self_cmd->add_option("--seed", sopt.seed, "seed for deterministic sampling");
  self_cmd->add_option("--out-dir", sopt.out_dir, "artifact directory");
  self_cmd->add_option("--n-max", sopt.pipeline_n_max, "pipeline iterates for criterion 5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*classify_cmd) {
      HenonMapD f = parse_map_spec(ccom.map_text);
      FiltrationRadius fr(f);
      ClassifyOptions copt;
      copt.n_max = cwin.n_max;
      GridClassification grid =
          classify_grid(f, fr, cwin.section(), cwin.win, copt, !skip_green);
      emit_file(classify_csv_path, classify_csv(grid));
      emit_file(classify_pgm_path, classify_pgm(grid));
      return 0;
    }
    if (*green_cmd) {
      HenonMapD f = parse_map_spec(gcom.map_text);
      FiltrationRadius fr(f);
      GreenOptions gopt;
      gopt.n_max = gwin.n_max;
      gopt.tol = green_tol;
      if (!green_at.empty()) {
        Vec2cd x;
        x << parse_complex_literal(green_at), parse_complex_literal(green_at_w);
        std::cout << "g_plus = " << format_double(green_plus(f, fr, x, gopt)) << "\n";
        return 0;
      }
      emit_file(green_csv_path, green_csv(f, fr, gwin.section(), gwin.win, gopt));
      return 0;
    }
    if (*per_cmd) {
      HenonMapD f = parse_map_spec(pcom.map_text);
      FindPeriodicOptions fpo;
      fpo.seed = pcom.seed;
      auto orbits = find_periodic(f, per_period, fpo);
      emit_file(per_csv_path, periodic_csv(orbits));
      for (size_t i = 0; i < orbits.size(); ++i) {
        const auto& o = orbits[i];
        std::cout << "orbit " << i << " period=" << o.period
                  << " saddle=" << (o.saddle ? "yes" : "no")
                  << " lambda_s=" << format_complex(o.lambda_s)
                  << " lambda_u=" << format_complex(o.lambda_u)
                  << " residual=" << format_double(o.residual);
        if (o.saddle) {
          auto est = estimate_hyperbolicity_auto(f, o, per_depth);
          std::cout << " hyperbolicity c=" << format_double(est.c)
                    << " lambda=" << format_double(est.lambda);
        }
        std::cout << "\n";
      }
      return 0;
    }
    if (*man_cmd) {
      HenonMapD f = parse_map_spec(mcom.map_text);
      FindPeriodicOptions fpo;
      fpo.seed = mcom.seed;
      auto orbits = find_periodic(f, man_period, fpo);
      const SaddleOrbit& orb = pick_orbit(orbits, man_index);
      StableChartD chart = build_local_series(f, orb, man_order);
      msamp.circles = parse_double_list(man_circles);
      std::cout << "chart: P=(" << format_complex(orb.points[0][0]) << ", "
                << format_complex(orb.points[0][1])
                << ") lambda_s=" << format_complex(orb.lambda_s) << " rho="
                << format_double(chart.rho) << " normalization ||c_1|| = 1\n";
      emit_file(man_csv_path, manifold_csv(f, chart, msamp));
      return 0;
    }
    if (*rep_cmd) {
      HenonMapD f = parse_map_spec(rcom.map_text);
      if (popt.n_max < 1) {
        std::cerr << "usage error: --n-max must be >= 1\n";
        return 1;
      }
      if (std::abs(f.a()) > 1.0 && !rep_force) {
        std::cerr << "warning: the construction assumes |a| <= 1; "
                     "pass --force to run anyway\n";
        return 1;
      }
      popt.seed = rcom.seed;
      popt.ladder = !rep_no_ladder;
      popt.force_bits = rep_bits ? rep_bits : env_precision_bits();
      if (!rep_profiles_dir.empty()) popt.reparam.profile_points = 128;
      PipelineResult res = run_pipeline(f, popt);
      std::cout << "orbit: P=(" << format_complex(res.orbit.points[0][0]) << ", "
                << format_complex(res.orbit.points[0][1])
                << ") lambda_s=" << format_complex(res.orbit.lambda_s)
                << " rho=" << format_double(res.chart.rho)
                << " normalization ||c_1|| = 1\n";
      emit_file(rep_csv_path, reparam_csv(res.iterates));
      if (!rep_profiles_dir.empty()) {
        std::filesystem::create_directories(rep_profiles_dir);
        for (const auto& it : res.iterates)
          emit_file(rep_profiles_dir + "/speed_profile_n" + std::to_string(it.n) + ".csv",
                    speed_profile_csv(it.speed_profile));
      }
      std::cout << "iterates: " << res.iterates.size()
                << " last_binary64_n=" << res.last_binary64_n << "\n";
      return 0;
    }
    if (*gal_cmd) {
      std::vector<double> radii = parse_double_list(gal_radii);
      std::vector<std::pair<CurveSpec, std::vector<ProfilePoint>>> profiles;
      for (auto spec :
           {CurveSpec::poly_graph({0.0, 0.0, 1.0}),
            CurveSpec::exp_pair({0.0, 1.0}, {-2.0, 1.0}, 2.0), CurveSpec::exp_quadratic(),
            CurveSpec::graph_exp_power(1), CurveSpec::graph_exp_power(2),
            CurveSpec::graph_exp_power(3), CurveSpec::graph_exp_power(4)}) {
        profiles.emplace_back(spec, sup_speed_profile(spec, radii, gal_grid));
      }
      emit_file(gal_csv_path, gallery_csv(profiles));
      for (const auto& [spec, prof] : profiles)
        std::cout << spec.name() << ": " << brody_verdict(prof) << "\n";
      return 0;
    }
    if (*self_cmd) {
      sopt.force_bits = env_precision_bits();
      auto results = run_selftest(sopt, std::cout);
      return all_passed(results) ? 0 : 2;
    }
  } catch (const Error& e) {
    emit_error_record(e);
    return is_usage_code(e.code) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << R"({"code":"internal","message":")" << e.what() << R"("})" << "\n";
    return 2;
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("henon-brody");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(int(argv.size()), argv.data());
}

}  // namespace henon

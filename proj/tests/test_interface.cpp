#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "henon/cli.hpp"
#include "henon/io.hpp"
#include "henon/reports.hpp"
#include "test_support.hpp"

using namespace henon;
using namespace henon::testing;

TEST_CASE("map spec parsing") {
  HenonMapD f = parse_map_spec("p = z^2 - 6; a = 0.5");
  CHECK(f.degree() == 2);
  CHECK(f.a() == cxd(0.5));
  CHECK(f.p().coeffs()[0] == cxd(-6.0));
  CHECK(f.p().coeffs()[1] == cxd(0.0));
  CHECK(f.p().coeffs()[2] == cxd(1.0));

  HenonMapD g = parse_map_spec("p = z^3 + (1+2i)*z - 2e-1; a = 0.5-0.25i");
  CHECK(g.degree() == 3);
  CHECK(g.p().coeffs()[1] == cxd(1.0, 2.0));
  CHECK(g.p().coeffs()[0] == cxd(-0.2));
  CHECK(g.a() == cxd(0.5, -0.25));

  // whitespace insensitivity
  CHECK(parse_map_spec("p=z^2-6;a=.5").a() == cxd(0.5));

  CHECK_THROWS_WITH_AS(parse_map_spec("p = z^2; a = 0"), doctest::Contains("non-zero"),
                       Error);
  CHECK_THROWS_AS(parse_map_spec("p = 2*z^2; a = 1"), Error);   // not monic
  CHECK_THROWS_AS(parse_map_spec("p = z^2 - 6"), Error);        // a missing
  CHECK_THROWS_AS(parse_map_spec("p = z^2 - 6; a = 1; junk"), Error);
}

TEST_CASE("complex literals") {
  CHECK(parse_complex_literal("1.5-0.25i") == cxd(1.5, -0.25));
  CHECK(parse_complex_literal("2i") == cxd(0.0, 2.0));
  CHECK(parse_complex_literal("i") == cxd(0.0, 1.0));
  CHECK(parse_complex_literal("-i") == cxd(0.0, -1.0));
  CHECK(parse_complex_literal("3e-2") == cxd(0.03));
  CHECK(parse_complex_literal("-1+i") == cxd(-1.0, 1.0));
  CHECK_THROWS_AS(parse_complex_literal("1.5+"), Error);
}

TEST_CASE("number formatting and checksums") {
  CHECK(format_double(0.5) == "0.5");
  double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);  // 17 digits round-trip
  CHECK(format_complex(cxd(1.5, 0.0)) == "1.5");
  CHECK(format_complex(cxd(1.5, -0.25)) == "1.5-0.25i");
  CHECK(format_complex(cxd(0.0, 2.0)) == "0+2i");

  // FNV-1a 64 reference vectors
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("atomic write and PGM container") {
  namespace fs = std::filesystem;
  fs::create_directories("unit-test-out");
  std::string path = "unit-test-out/roundtrip.txt";
  std::string sum = atomic_write(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  CHECK(sum == fnv1a64_hex("hello\n"));
  CHECK(!fs::exists(path + ".tmp"));

  std::string pgm = make_pgm(3, 2, {0, 1, 2, 3, 4, 255});
  CHECK(pgm.substr(0, 11) == "P5\n3 2\n255\n");
  CHECK(pgm.size() == 11 + 6);
  CHECK_THROWS_AS(make_pgm(2, 2, {1, 2, 3}), Error);
}

TEST_CASE("CSV builders emit the pinned headers") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  FindPeriodicOptions fpo;
  auto orbits = find_periodic(f, 1, fpo);

  std::string pcsv = periodic_csv(orbits);
  CHECK(pcsv.rfind("period, index, re_z, im_z, re_w, im_w, lambda_s, lambda_u, residual\n",
                   0) == 0);
  // one row per orbit point: header + 2 rows
  CHECK(std::count(pcsv.begin(), pcsv.end(), '\n') == 3);

  Window win{-2, 2, -2, 2, 8, 8};
  Section sec;
  GridClassification grid = classify_grid(f, fr, sec, win, {}, false);
  std::string ccsv = classify_csv(grid);
  CHECK(ccsv.rfind("re, im, class, n_escape, g_plus\n", 0) == 0);
  CHECK(std::count(ccsv.begin(), ccsv.end(), '\n') == 1 + 64);
  std::string pgm = classify_pgm(grid);
  CHECK(pgm.rfind("P5\n8 8\n255\n", 0) == 0);

  std::vector<ReparamIterate> its(1);
  its[0].n = 1;
  std::string rcsv = reparam_csv(its);
  CHECK(rcsv.rfind("n, re_theta_n, im_theta_n, H_max, R_n, speed_at_0, "
                   "max_speed_half_disc, injectivity_min_gap\n",
                   0) == 0);

  std::string gcsv = gallery_csv({{CurveSpec::exp_quadratic(), {{1.0, 2.0}}}});
  CHECK(gcsv.rfind("family, radius, max_speed\n", 0) == 0);
  CHECK(gcsv.find("exp-quadratic, 1, 2") != std::string::npos);
}

TEST_CASE("emissions are deterministic") {
  HenonMapD f = default_map();
  FindPeriodicOptions fpo;
  fpo.seed = 99;
  std::string a = periodic_csv(find_periodic(f, 2, fpo));
  std::string b = periodic_csv(find_periodic(f, 2, fpo));
  CHECK(a == b);
}

TEST_CASE("CLI dispatch: exit codes and artifacts") {
  namespace fs = std::filesystem;
  fs::create_directories("unit-test-out");

  // usage errors -> 1
  CHECK(cli_main({"reparam", "--n-max", "0"}) == 1);
  CHECK(cli_main({"classify", "--map", "p = z^2; a = 0"}) == 1);
  CHECK(cli_main({"reparam", "--map", "p = z^2 - 6; a = 1.5"}) == 1);  // |a| > 1, no --force

  // classify writes both declared artifacts
  CHECK(cli_main({"classify", "--nx", "16", "--ny", "16", "--re0", "-2", "--re1", "2",
                  "--im0", "-2", "--im1", "2", "--n-max", "40", "--skip-green", "--csv",
                  "unit-test-out/c.csv", "--pgm", "unit-test-out/c.pgm"}) == 0);
  CHECK(fs::exists("unit-test-out/c.csv"));
  CHECK(fs::exists("unit-test-out/c.pgm"));
  CHECK(read_file("unit-test-out/c.pgm").rfind("P5\n16 16\n255\n", 0) == 0);

  // periodic: CSV with 2 rows for the default map
  CHECK(cli_main({"periodic", "--period", "1", "--csv", "unit-test-out/p.csv"}) == 0);
  std::string pcsv = read_file("unit-test-out/p.csv");
  CHECK(std::count(pcsv.begin(), pcsv.end(), '\n') == 3);

  // gallery at small radii
  CHECK(cli_main({"gallery", "--radii", "1,2", "--grid", "90", "--csv",
                  "unit-test-out/g.csv"}) == 0);
  CHECK(fs::exists("unit-test-out/g.csv"));

  // green single point
  CHECK(cli_main({"green", "--at", "1e6", "--at-w", "0"}) == 0);

  // manifold sampling
  CHECK(cli_main({"manifold", "--rays", "2", "--ray-points", "6", "--circles", "0.5",
                  "--circle-points", "8", "--csv", "unit-test-out/m.csv"}) == 0);
  std::string mcsv = read_file("unit-test-out/m.csv");
  CHECK(mcsv.rfind("re_Z, im_Z, re_z, im_z, re_w, im_w, fs_speed\n", 0) == 0);

  // reparam, binary64 only
  CHECK(cli_main({"reparam", "--n-max", "4", "--no-ladder", "--injectivity-samples",
                  "150", "--csv", "unit-test-out/r.csv"}) == 0);
  std::string rcsv = read_file("unit-test-out/r.csv");
  CHECK(std::count(rcsv.begin(), rcsv.end(), '\n') == 5);
}

#include <doctest.h>

#include "henon/escape.hpp"
#include "henon/rng.hpp"
#include "henon/saddle.hpp"
#include "test_support.hpp"

using namespace henon;
using namespace henon::testing;

namespace {
Vec2cd pt(cxd z, cxd w) {
  Vec2cd x;
  x << z, w;
  return x;
}
}  // namespace

TEST_CASE("filtration radius: oracle values and the ring inequality") {
  HenonMapD sq = parse_map_spec("p = z^2; a = 1");
  FiltrationRadius fr_sq(sq);
  // |z^2 - w| >= |z|^2 - |z| >= 2|z| holds from |z| = 3 on
  CHECK(fr_sq.radius() == doctest::Approx(3.0).epsilon(1e-9));

  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  CHECK(fr.radius() <= 8.0);
  CHECK(fr.radius() == doctest::Approx(4.0).epsilon(1e-9));

  // invariant on a dense ring sample
  SplitMix64 rng(23);
  for (int i = 0; i < 10000; ++i) {
    cxd z = std::polar(fr.radius(), 2 * M_PI * rng.uniform01());
    cxd w = rng.disc(fr.radius());
    CHECK(std::abs(f.p()(z) - f.a() * w) >= 2.0 * std::abs(z) - 1e-9);
  }
}

TEST_CASE("classification of witnesses") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);

  EscapeRecord far = classify(f, fr, pt(1e6, 0));
  CHECK(far.classification == EscapeClass::EscapingForward);
  CHECK(*far.n_escape <= 1);

  FixedPoints fp(-6.0, 0.5);
  EscapeRecord fixed = classify(f, fr, pt(fp.z_minus, fp.z_minus));
  CHECK(fixed.classification == EscapeClass::BoundedForward);
  CHECK(*fixed.green_plus == 0.0);

  EscapeRecord high_w = classify(f, fr, pt(0, 1e6));
  CHECK(high_w.classification == EscapeClass::EscapingForward);
  CHECK(*high_w.n_escape <= 2);
}

TEST_CASE("classification is monotone in n_max") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  SplitMix64 rng(29);
  for (int i = 0; i < 50; ++i) {
    Vec2cd x = pt(rng.disc(3.0), rng.disc(3.0));
    ClassifyOptions small, large;
    small.n_max = 50;
    large.n_max = 400;
    EscapeRecord a = classify(f, fr, x, small);
    EscapeRecord b = classify(f, fr, x, large);
    if (a.classification == EscapeClass::EscapingForward) {
      CHECK(b.classification == EscapeClass::EscapingForward);
      CHECK(*a.n_escape == *b.n_escape);
    }
    if (a.classification == EscapeClass::BoundedForward)
      CHECK(b.classification == EscapeClass::BoundedForward);
  }
}

TEST_CASE("Green function: zero set, functional equation, deep-iterate oracle") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  FixedPoints fp(-6.0, 0.5);
  GreenOptions gopt;

  CHECK(green_plus(f, fr, pt(fp.z_plus, fp.z_plus), gopt) == 0.0);
  CHECK(green_plus(f, fr, pt(fp.z_minus, fp.z_minus), gopt) == 0.0);

  SplitMix64 rng(31);
  for (int i = 0; i < 60; ++i) {
    Vec2cd x;
    x << std::polar(rng.uniform(fr.radius() + 1, 3 * fr.radius()), 2 * M_PI * rng.uniform01()),
        rng.disc(fr.radius());
    double g1 = green_plus(f, fr, x, gopt);
    double g2 = green_plus(f, fr, eval_forward(f, x), gopt);
    CHECK(std::abs(g2 - 2.0 * g1) <= 10.0 * gopt.tol);
    CHECK(g1 > 0.0);
  }

  // independent log-recursion oracle at (1e6, 0)
  double oracle = green_log_recursion_oracle(1e6, -6.0, 0.5);
  double got = green_plus(f, fr, pt(1e6, 0), gopt);
  CHECK(std::abs(got - oracle) <= 10.0 * gopt.tol);
  CHECK(std::abs(oracle - std::log(1e6)) <= 1e-5);  // sanity: ~ log|z0|
}

TEST_CASE("Green function engages the wide-exponent path") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  GreenOptions gopt;
  // binary64 alone would hit the range guard immediately past 1e150
  double g = green_plus(f, fr, pt(1e120, 0), gopt);
  double oracle = green_log_recursion_oracle(1e120, -6.0, 0.5);
  CHECK(std::abs(g - oracle) <= 10.0 * gopt.tol);
}

TEST_CASE("undecided points raise green-undecided with the last estimate") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  GreenOptions gopt;
  gopt.n_max = 6;  // too few steps to certify
  // displace a fixed point along its unstable direction: the orbit wanders
  // the box well past 6 steps without recurring at 1e-6 resolution
  FixedPoints fp(-6.0, 0.5);
  Multipliers mu(fp.z_minus, 0.5);
  Vec2cd x = pt(fp.z_minus + 1e-4 * mu.unstable, fp.z_minus + 1e-4);
  bool threw = false;
  try {
    green_plus(f, fr, x, gopt);
  } catch (const Error& e) {
    threw = e.code == "green-undecided";
    CHECK(std::isfinite(e.value));
  }
  CHECK(threw);
}

TEST_CASE("backward classification mirrors forward; K at periodic points") {
  HenonMapD f = default_map();
  FiltrationRadius fr_b(f, OrbitDirection::Backward);
  FixedPoints fp(-6.0, 0.5);
  EscapeRecord rec =
      classify(f, fr_b, pt(fp.z_plus, fp.z_plus), {}, OrbitDirection::Backward);
  CHECK(rec.classification == EscapeClass::BoundedForward);

  // points with huge w escape backward fast
  EscapeRecord esc = classify(f, fr_b, pt(0, 1e6), {}, OrbitDirection::Backward);
  CHECK(esc.classification == EscapeClass::EscapingForward);

  FindPeriodicOptions fpo;
  auto orbits = find_periodic(f, 2, fpo);
  FiltrationRadius fr(f);
  for (const auto& orb : orbits)
    for (const auto& x : orb.points) {
      CHECK(classify(f, fr, x).classification == EscapeClass::BoundedForward);
      CHECK(classify(f, fr_b, x, {}, OrbitDirection::Backward).classification ==
            EscapeClass::BoundedForward);
    }
}

TEST_CASE("J+ boundary sampling on the conjugate diagonal") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  FixedPoints fp(-6.0, 0.5);
  double z2 = fp.z_minus.real();

  // window entirely in the escape region -> empty
  Window far_win{20.0, 22.0, -1.0, 1.0, 9, 9};
  Section sec;
  GridClassification far_grid = classify_grid(f, fr, sec, far_win);
  CHECK(boundary_points(far_grid).empty());

  // window centered so the fixed point is a grid node -> nonempty
  Window win{z2 - 0.5, z2 + 0.5, -0.5, 0.5, 11, 11};
  GridClassification grid = classify_grid(f, fr, sec, win);
  CHECK(!boundary_points(grid).empty());

  // refinement keeps an escape-region window boundary-free
  Window fine = far_win;
  fine.nx = fine.ny = 17;
  CHECK(boundary_points(classify_grid(f, fr, sec, fine)).empty());

  CHECK_THROWS_AS(classify_grid(f, fr, sec, Window{0, 1, 0, 1, 1, 5}), Error);
}

TEST_CASE("line sections parametrize complex lines") {
  HenonMapD f = default_map();
  FiltrationRadius fr(f);
  Section line;
  line.kind = Section::Kind::Line;
  line.base << cxd(0.0), cxd(2.0, 1.0);
  line.dir << cxd(1.0), cxd(0.0);
  Vec2cd at = line.at(cxd(0.5, -0.5));
  CHECK(at[0] == cxd(0.5, -0.5));
  CHECK(at[1] == cxd(2.0, 1.0));

  // far out along the line everything escapes
  Window win{30.0, 40.0, -1.0, 1.0, 5, 5};
  GridClassification grid = classify_grid(f, fr, line, win);
  for (const auto& rec : grid.records)
    CHECK(rec.classification == EscapeClass::EscapingForward);
}

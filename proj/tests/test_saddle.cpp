#include <doctest.h>

#include "henon/saddle.hpp"
#include "test_support.hpp"

using namespace henon;
using namespace henon::testing;

TEST_CASE("fixed points match the quadratic oracle") {
  HenonMapD f = default_map();
  FindPeriodicOptions opt;
  auto orbits = find_periodic(f, 1, opt);
  REQUIRE(orbits.size() == 2);

  FixedPoints fp(-6.0, 0.5);
  for (const auto& orb : orbits) {
    cxd z = orb.points[0][0];
    cxd zo = std::abs(z - fp.z_plus) < std::abs(z - fp.z_minus) ? fp.z_plus : fp.z_minus;
    CHECK(std::abs(z - zo) <= 1e-10);
    CHECK(orb.points[0][1] == orb.points[0][0]);

    Multipliers mu(zo, 0.5);
    CHECK(std::abs(orb.lambda_u - mu.unstable) <= 1e-10);
    CHECK(std::abs(orb.lambda_s - mu.stable) <= 1e-10);
    CHECK(std::abs(orb.lambda_s * orb.lambda_u - 0.5) <= 1e-8 * 0.5);
    CHECK(orb.saddle);
    CHECK(orb.residual <= 1e-10 * (1.0 + norm2_d<cxd>(orb.points[0])));

    // eigvec_s spans E^s: ||(Df^N - lambda_s) v|| small
    Mat2cd M = orb.period_jacobian(f);
    Vec2cd r = M * orb.eigvec_s - orb.lambda_s * orb.eigvec_s;
    CHECK(norm2_d<cxd>(r) <= 1e-8);
    CHECK(norm2_d<cxd>(orb.eigvec_s) == doctest::Approx(1.0).epsilon(1e-12));
    // deterministic phase convention
    CHECK(orb.eigvec_s[0].real() >= 0.0);

    CHECK(orb.stats.last_quadratic_ratio() < 1e3);
  }
}

TEST_CASE("period-2 orbit matches the resultant-reduction oracle") {
  HenonMapD f = default_map();
  FindPeriodicOptions opt;
  auto orbits = find_periodic(f, 2, opt);
  REQUIRE(orbits.size() == 1);
  const auto& orb = orbits[0];
  CHECK(orb.period == 2);
  CHECK(orb.points.size() == 2);

  PeriodTwo p2(-6.0, 0.5);
  // orbit visits {x, y} in some rotation
  cxd zs[2] = {orb.points[0][0], orb.points[1][0]};
  double match = std::min(std::abs(zs[0] - p2.x) + std::abs(zs[1] - p2.y),
                          std::abs(zs[0] - p2.y) + std::abs(zs[1] - p2.x));
  CHECK(match <= 1e-10);
  CHECK(orb.residual <= 1e-10 * (1.0 + std::abs(p2.y)));
  CHECK(std::abs(orb.lambda_s * orb.lambda_u - 0.25) <= 1e-8);  // det Df^2 = a^2
  CHECK(orb.saddle);

  // no period-1 orbits sneak in
  for (const auto& o : orbits)
    CHECK(std::abs(o.points[0][0] - o.points[1][0]) > 1e-3);
}

TEST_CASE("period-3 horseshoe count") {
  HenonMapD f = default_map();
  FindPeriodicOptions opt;
  opt.seeds_complex = 300;
  opt.seeds_real = 300;
  // full shift on two symbols: (2^3 - 2)/3 = 2 orbits of true period 3
  auto orbits = find_periodic(f, 3, opt);
  CHECK(orbits.size() == 2);
  for (const auto& orb : orbits) {
    CHECK(orb.saddle);
    CHECK(std::abs(orb.lambda_s * orb.lambda_u - 0.125) <= 1e-8);  // a^3
  }
}

TEST_CASE("hyperbolicity constants along the fixed-point orbit") {
  HenonMapD f = default_map();
  FindPeriodicOptions opt;
  auto orbits = find_periodic(f, 1, opt);
  const SaddleOrbit* z1 = nullptr;
  for (const auto& o : orbits)
    if (!z1 || std::abs(o.lambda_u) > std::abs(z1->lambda_u)) z1 = &o;
  REQUIRE(z1);

  // depth 20 needs a wider mantissa: the eigenvector's unstable leakage
  // grows like |lambda_u|^n and swamps binary64 past n ~ 8
  HyperbolicityEstimate est = estimate_hyperbolicity_auto(f, *z1, 20);
  CHECK(est.lambda == doctest::Approx(0.07637).epsilon(1e-3));
  CHECK(est.c >= 1.0);

  // the defining inequality, re-measured independently in wide floats
  {
    mp::ScopedBits guard(160);
    HenonMap<MpComplex> fm = f.cast<MpComplex>();
    SaddleOrbitT<MpComplex> om = refine_orbit<MpComplex>(fm, *z1);
    Vec2<MpComplex> v = om.eigvec_s;
    double lam_n = 1.0;
    for (long n = 1; n <= 20; ++n) {
      v = (jacobian(fm, om.points[0]) * v).eval();
      lam_n *= est.lambda;
      CHECK(norm2_d(v) <= est.c * lam_n * (1.0 + 1e-9));
    }
  }

  // shallow depths work in binary64
  HyperbolicityEstimate bin64 = estimate_hyperbolicity(f, *z1, 6);
  CHECK(bin64.lambda == doctest::Approx(est.lambda).epsilon(1e-12));
  CHECK(bin64.c >= 1.0);

  HyperbolicityEstimate zero = estimate_hyperbolicity(f, *z1, 0);
  CHECK(zero.c == 1.0);

  HyperbolicityEstimate deeper = estimate_hyperbolicity_auto(f, *z1, 40);
  CHECK(deeper.c >= est.c - 1e-12);

  // binary64 at depth 20 must detect the leakage rather than report junk
  CHECK_THROWS_AS(estimate_hyperbolicity(f, *z1, 25), Error);

  // feeding a non-contracting direction must fail
  SaddleOrbit bogus = *z1;
  std::swap(bogus.lambda_s, bogus.lambda_u);
  std::swap(bogus.eigvec_s, bogus.eigvec_u);
  CHECK_THROWS_AS(estimate_hyperbolicity(f, bogus, 10), Error);
}

TEST_CASE("high-precision refinement tightens the residual") {
  HenonMapD f = default_map();
  FindPeriodicOptions opt;
  auto orbits = find_periodic(f, 1, opt);
  mp::ScopedBits guard(150);
  HenonMap<MpComplex> fm = f.cast<MpComplex>();
  SaddleOrbitT<MpComplex> refined = refine_orbit<MpComplex>(fm, orbits[1]);
  CHECK(refined.residual <= 1e-30);
  CHECK(std::abs(refined.lambda_s.to_cxd() - orbits[1].lambda_s) <= 1e-10);
}

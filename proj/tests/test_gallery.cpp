#include <doctest.h>

#include "henon/gallery.hpp"
#include "henon/rng.hpp"

using namespace henon;

namespace {

double at_radius(const std::vector<ProfilePoint>& p, double r) {
  for (const auto& q : p)
    if (q.radius == r) return q.max_speed;
  return -1.0;
}

// naive direct evaluation of [e^z : e^{iz^2} : 1] where nothing overflows;
// the independent oracle for the factored evaluator
double naive_exp_quadratic_speed(cxd z) {
  const cxd I(0, 1);
  Vec3<cxd> X, V;
  X << std::exp(z), std::exp(I * z * z), cxd(1.0);
  V << std::exp(z), 2.0 * I * z * std::exp(I * z * z), cxd(0.0);
  Vec3<cxd> c = cross(X, V);
  return std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2])) /
         (std::norm(X[0]) + std::norm(X[1]) + std::norm(X[2]));
}

}  // namespace

TEST_CASE("pointwise evaluation against direct formulas") {
  TangentSampleD s = eval_curve(CurveSpec::poly_graph({0.0, 0.0, 1.0}), cxd(0.0));
  CHECK(s.chart == 2);
  CHECK(s.point.h[0] == cxd(0.0));
  CHECK(s.point.h[1] == cxd(0.0));
  CHECK(s.velocity[0] == cxd(1.0));
  CHECK(s.velocity[1] == cxd(0.0));

  // (theta, e^theta) at 0 has affine velocity (1, 1); the evaluator may pick
  // a different chart, so compare against the affine-chart construction
  TangentSampleD g1 = eval_curve(CurveSpec::graph_exp_power(1), cxd(0.0));
  Vec2cd x01, v11;
  x01 << cxd(0.0), cxd(1.0);
  v11 << cxd(1.0), cxd(1.0);
  CHECK(fs_speed(g1) == doctest::Approx(fs_speed(make_tangent(x01, v11))).epsilon(1e-14));
  CHECK(chordal_d(g1.point, to_projective(x01)) <= 1e-15);

  SplitMix64 rng(12);
  CurveSpec eq = CurveSpec::exp_quadratic();
  for (int i = 0; i < 100; ++i) {
    // stay where the naive formula cannot overflow: z = bi + small real
    cxd z(rng.uniform(-1.0, 1.0), rng.uniform(-10.0, 10.0));
    double fact = fs_speed(eval_curve(eq, z));
    double naive = naive_exp_quadratic_speed(z);
    CHECK(std::abs(fact - naive) <= 1e-10 * (1.0 + naive));
  }
  // frozen oracle values on the imaginary axis, where growth is linear
  CHECK(fs_speed(eval_curve(eq, cxd(0, 5))) == doctest::Approx(4.96655481).epsilon(1e-7));
  CHECK(fs_speed(eval_curve(eq, cxd(0, 20))) == doctest::Approx(19.0962474).epsilon(1e-7));
}

TEST_CASE("factored evaluation never overflows at large radius") {
  for (auto spec : {CurveSpec::exp_quadratic(), CurveSpec::graph_exp_power(4)}) {
    SplitMix64 rng(14);
    for (int i = 0; i < 200; ++i) {
      cxd th = std::polar(50.0, 2 * M_PI * rng.uniform01());
      double s = fs_speed(eval_curve(spec, th));
      CHECK(std::isfinite(s));
      CHECK(s >= 0.0);
    }
  }
}

TEST_CASE("speed profiles: bounded families plateau, non-Brody families grow") {
  std::vector<double> radii = {1, 2, 5, 10, 20, 30, 50};

  auto poly = sup_speed_profile(CurveSpec::poly_graph({0.0, 0.0, 1.0}), radii, 720);
  CHECK(at_radius(poly, 50) <= at_radius(poly, 1));
  CHECK(at_radius(poly, 30) <= 1.01 * at_radius(poly, 20));
  CHECK(at_radius(poly, 50) <= 1.01 * at_radius(poly, 20));

  auto ep = sup_speed_profile(CurveSpec::exp_pair({0.0, 1.0}, {-2.0, 1.0}, 2.0), radii, 720);
  CHECK(at_radius(ep, 30) <= 1.01 * at_radius(ep, 20));
  CHECK(at_radius(ep, 50) <= 1.01 * at_radius(ep, 20));
  CHECK(at_radius(ep, 50) == doctest::Approx(0.5).epsilon(0.01));  // dense-scan oracle

  // exp-quadratic grows linearly: dense-scan oracle gives max ~ r + 1/4
  auto eq = sup_speed_profile(CurveSpec::exp_quadratic(), radii, 720);
  CHECK(at_radius(eq, 30) >= 25.0);
  CHECK(at_radius(eq, 30) == doctest::Approx(30.25).epsilon(0.02));
  CHECK(at_radius(eq, 50) >= 8.0 * at_radius(eq, 5));

  // graph-exp-power: n = 1 bounded, n = 2 linear, n = 3 quadratic (~1.5 r^2)
  auto g1 = sup_speed_profile(CurveSpec::graph_exp_power(1), radii, 720);
  for (const auto& q : g1) CHECK(q.max_speed <= 0.7);

  auto g2 = sup_speed_profile(CurveSpec::graph_exp_power(2), radii, 720);
  CHECK(at_radius(g2, 50) == doctest::Approx(50.0).epsilon(0.02));

  auto g3 = sup_speed_profile(CurveSpec::graph_exp_power(3), radii, 720);
  CHECK(at_radius(g3, 20) >= 10.0 * at_radius(g3, 5));  // ray-growth witness
  CHECK(at_radius(g3, 30) >= 1e3);
  CHECK(at_radius(g3, 30) == doctest::Approx(1350.0).epsilon(0.02));

  CHECK(brody_verdict(poly).substr(0, 5) == "Brody");
  CHECK(brody_verdict(ep).substr(0, 5) == "Brody");
  CHECK(brody_verdict(g1).substr(0, 5) == "Brody");
  CHECK(brody_verdict(eq).substr(0, 3) == "non");
  CHECK(brody_verdict(g2).substr(0, 3) == "non");
  CHECK(brody_verdict(g3).substr(0, 3) == "non");
}

TEST_CASE("affine reparametrization invariance") {
  CHECK(affine_reparam_check(CurveSpec::poly_graph({0.0, 0.0, 1.0}), cxd(1.0), cxd(0.0),
                             10) == 0.0);
  for (auto spec : {CurveSpec::poly_graph({0.0, 0.0, 1.0}),
                    CurveSpec::exp_pair({0.0, 1.0}, {-2.0, 1.0}, 2.0),
                    CurveSpec::exp_quadratic(), CurveSpec::graph_exp_power(3)}) {
    CHECK(affine_reparam_check(spec, cxd(2.0), cxd(1.0, 1.0), 100) <= 1e-10);
    CHECK(affine_reparam_check(spec, cxd(0.3, -1.2), cxd(-0.5, 2.0), 100) <= 1e-10);
  }
  CHECK_THROWS_AS(affine_reparam_check(CurveSpec::exp_quadratic(), cxd(0.0), cxd(0.0), 10),
                  Error);
  CHECK_THROWS_AS(CurveSpec::graph_exp_power(0), Error);
  CHECK_THROWS_AS(sup_speed_profile(CurveSpec::exp_quadratic(), {2.0, 1.0}, 90), Error);
}

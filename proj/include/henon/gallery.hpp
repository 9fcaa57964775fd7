#pragma once
// Example curve families as executable diagnostics. Every family is held as
// a homogeneous lift X_j = P_j(theta) exp(E_j(theta)) with polynomial P_j,
// E_j; the dominant exponential is factored out analytically before any
// numeric evaluation, so growth never overflows and the FS speed is exact
// up to rounding.
#include <string>
#include <vector>

#include "henon/fubini.hpp"
#include "henon/rng.hpp"
#include "henon/series.hpp"

namespace henon {

struct CurveSpec {
  enum class Family { PolyGraph, ExpPair, ExpQuadratic, GraphExpPower };
  Family family = Family::PolyGraph;
  std::vector<cxd> p{0.0, 0.0, 1.0};  // ascending coefficients
  std::vector<cxd> q{1.0};
  cxd alpha = 0.0;
  int n = 1;

  // [theta : p(theta) : 1]
  static CurveSpec poly_graph(std::vector<cxd> p) {
    CurveSpec s;
    s.family = Family::PolyGraph;
    s.p = std::move(p);
    return s;
  }
  // [p(theta) e^theta : q(theta) e^{alpha theta} : 1]
  static CurveSpec exp_pair(std::vector<cxd> p, std::vector<cxd> q, cxd alpha) {
    CurveSpec s;
    s.family = Family::ExpPair;
    s.p = std::move(p);
    s.q = std::move(q);
    s.alpha = alpha;
    return s;
  }
  // [e^theta : e^{i theta^2} : 1]
  static CurveSpec exp_quadratic() {
    CurveSpec s;
    s.family = Family::ExpQuadratic;
    return s;
  }
  // (theta, exp(theta^n)) in the affine chart
  static CurveSpec graph_exp_power(int n) {
    if (n < 1) throw Error("bad-curve", "exponent power must be >= 1");
    CurveSpec s;
    s.family = Family::GraphExpPower;
    s.n = n;
    return s;
  }

  std::string name() const {
    switch (family) {
      case Family::PolyGraph: return "poly-graph";
      case Family::ExpPair: return "exp-pair";
      case Family::ExpQuadratic: return "exp-quadratic";
      default: return "graph-exp-power-n" + std::to_string(n);
    }
  }
};

namespace detail {

inline cxd gpoly_eval(const std::vector<cxd>& c, cxd z) { return series_eval(c, z); }
inline cxd gpoly_deriv(const std::vector<cxd>& c, cxd z) {
  return series_eval_derivative(c, z);
}

}  // namespace detail

inline TangentSampleD eval_curve(const CurveSpec& spec, cxd theta) {
  using F = CurveSpec::Family;
  const cxd I(0.0, 1.0);
  // component lifts P_j e^{E_j}: values and derivatives of P_j and E_j
  cxd P[3], dP[3], E[3] = {0.0, 0.0, 0.0}, dE[3] = {0.0, 0.0, 0.0};
  switch (spec.family) {
    case F::PolyGraph:
      P[0] = theta; dP[0] = 1.0;
      P[1] = detail::gpoly_eval(spec.p, theta); dP[1] = detail::gpoly_deriv(spec.p, theta);
      P[2] = 1.0; dP[2] = 0.0;
      break;
    case F::ExpPair:
      P[0] = detail::gpoly_eval(spec.p, theta); dP[0] = detail::gpoly_deriv(spec.p, theta);
      P[1] = detail::gpoly_eval(spec.q, theta); dP[1] = detail::gpoly_deriv(spec.q, theta);
      P[2] = 1.0; dP[2] = 0.0;
      E[0] = theta; dE[0] = 1.0;
      E[1] = spec.alpha * theta; dE[1] = spec.alpha;
      break;
    case F::ExpQuadratic:
      P[0] = P[1] = P[2] = 1.0;
      dP[0] = dP[1] = dP[2] = 0.0;
      E[0] = theta; dE[0] = 1.0;
      E[1] = I * theta * theta; dE[1] = 2.0 * I * theta;
      break;
    case F::GraphExpPower: {
      P[0] = theta; dP[0] = 1.0;
      P[1] = 1.0; dP[1] = 0.0;
      P[2] = 1.0; dP[2] = 0.0;
      cxd zn1 = pow_int(theta, spec.n - 1);
      E[1] = zn1 * theta;
      dE[1] = double(spec.n) * zn1;
      break;
    }
  }
  int jstar = 0;
  for (int j = 1; j < 3; ++j)
    if (E[j].real() > E[jstar].real()) jstar = j;
  const cxd mu = E[jstar], dmu = dE[jstar];
  Vec3<cxd> X, V;
  for (int j = 0; j < 3; ++j) {
    cxd s = std::exp(E[j] - mu);
    X[j] = P[j] * s;
    V[j] = (dP[j] + P[j] * (dE[j] - dmu)) * s;
  }
  return tangent_from_lift(X, V);
}

struct ProfilePoint {
  double radius;
  double max_speed;
};

// sampled max FS speed over circles |theta| = radius, with angular
// refinement (growth of some families lives in spikes of angular width far
// below any grid spacing)
inline std::vector<ProfilePoint> sup_speed_profile(const CurveSpec& spec,
                                                   const std::vector<double>& radii,
                                                   int grid = 720) {
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw Error("bad-list", "profile radii must be increasing");
  std::vector<ProfilePoint> out;
  out.reserve(radii.size());
  for (double r : radii) {
    DiscMax m = maximize_on_circle(
        [&](cxd th) { return fs_speed(eval_curve(spec, th)); }, r, grid);
    out.push_back({r, m.value});
  }
  return out;
}

// max over samples of | speed(psi o A, z) - |alpha| speed(psi, alpha z + beta) |
// relative; A(z) = alpha z + beta
inline double affine_reparam_check(const CurveSpec& spec, cxd alpha, cxd beta,
                                   int samples) {
  if (alpha == cxd(0.0)) throw Error("bad-curve", "alpha must be nonzero");
  SplitMix64 rng(0x243f6a8885a308d3ULL);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    cxd z = rng.disc(5.0);
    cxd az = alpha * z + beta;
    // speed of psi o A at z via the chain rule d/dz psi(A(z)) = alpha psi'(A(z))
    TangentSampleD s = eval_curve(spec, az);
    s.velocity[0] *= alpha;
    s.velocity[1] *= alpha;
    double lhs = fs_speed(s);
    double rhs = std::abs(alpha) * fs_speed(eval_curve(spec, az));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + rhs));
  }
  return worst;
}

// profile-shape verdict at the scanned resolution
inline std::string brody_verdict(const std::vector<ProfilePoint>& profile) {
  double head = 0.0, tail = 0.0;
  for (const auto& p : profile) {
    if (p.radius <= 20.0)
      head = std::max(head, p.max_speed);
    else
      tail = std::max(tail, p.max_speed);
  }
  if (tail > 1.25 * head) return "non-Brody (speed grows in the scanned range)";
  return "Brody at scanned resolution (speed bounded)";
}

}  // namespace henon

#pragma once
// Entire parametrization psi: C -> C^2 of the stable-manifold leaf through a
// saddle periodic point. Local data is the Poincare linearizing series
//   f^N(psi(zeta)) = psi(lambda_s zeta),
// solved order by order; global values come from the conjugacy
//   psi(Z) = f^{-N m}(psi_loc(lambda_s^m Z)).
#include <vector>

#include "henon/saddle.hpp"
#include "henon/series.hpp"

namespace henon {

template <class S>
struct StableChart {
  SaddleOrbitT<S> orbit;
  std::vector<Vec2<S>> coeffs;  // c_0 = P, c_1 = unit stable eigenvector
  double rho = 0.0;             // validated radius of the local series
  int order = 0;
  double cond_max = 0.0;        // worst conditioning seen in the solves
  S scale = S(1);               // normalization applied to c_1 (||c_1|| = 1)

  S lambda_s() const { return orbit.lambda_s; }
  long period() const { return orbit.period; }
  const Vec2<S>& fixed_point() const { return orbit.points[0]; }
};

using StableChartD = StableChart<cxd>;

namespace detail {

// f^N applied to a pair of truncated series, one Henon step at a time
template <class S>
void henon_step_series(const HenonMap<S>& f, Series<S>& z, Series<S>& w, int M) {
  Series<S> pz = poly_of_series(f.p(), z, M);
  for (int k = 0; k <= M; ++k) pz[size_t(k)] -= f.a() * w[size_t(k)];
  w = z;
  z = std::move(pz);
}

template <class S>
double residual_on_circle(const HenonMap<S>& f, const StableChart<S>& chart,
                          double radius, int samples) {
  Series<S> zs(chart.coeffs.size()), ws(chart.coeffs.size());
  for (size_t k = 0; k < chart.coeffs.size(); ++k) {
    zs[k] = chart.coeffs[k][0];
    ws[k] = chart.coeffs[k][1];
  }
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    double phi = 2.0 * M_PI * double(i) / double(samples);
    S zeta = S(cxd(std::polar(radius, phi)));
    Vec2<S> x;
    x[0] = series_eval(zs, zeta);
    x[1] = series_eval(ws, zeta);
    Vec2<S> lhs = x;
    for (long j = 0; j < chart.period(); ++j) lhs = eval_forward(f, lhs);
    S zl = chart.lambda_s() * zeta;
    Vec2<S> rhs;
    rhs[0] = series_eval(zs, zl);
    rhs[1] = series_eval(ws, zl);
    Vec2<S> diff = lhs - rhs;
    worst = std::max(worst, norm2_d(diff));
  }
  return worst;
}

}  // namespace detail

// Solve (Df^N_P - lambda_s^k I) c_k = -[f^N o psi_{<k}]_k for k = 2..M.
// Non-resonance |lambda_s^k| < |lambda_s| < 1 < |lambda_u| keeps every solve
// well conditioned for a genuine saddle.
template <class S>
StableChart<S> build_local_series(const HenonMap<S>& f, const SaddleOrbitT<S>& orbit,
                                  int M = 20) {
  if (!orbit.saddle)
    throw Error("non-saddle", "stable-manifold chart requires a saddle orbit");
  StableChart<S> chart;
  chart.orbit = orbit;
  chart.order = M;
  chart.coeffs.assign(size_t(M) + 1, Vec2<S>::Zero());
  chart.coeffs[0] = orbit.points[0];
  chart.coeffs[1] = orbit.eigvec_s;  // already unit norm

  Mat2<S> A = orbit.period_jacobian(f);
  S lam = orbit.lambda_s;
  S lam_k = lam;
  for (int k = 2; k <= M; ++k) {
    lam_k *= lam;
    // order-k coefficient of f^N o psi with c_k still zero
    Series<S> zs(size_t(k) + 1, S(0)), ws(size_t(k) + 1, S(0));
    for (int j = 0; j < k; ++j) {
      zs[size_t(j)] = chart.coeffs[size_t(j)][0];
      ws[size_t(j)] = chart.coeffs[size_t(j)][1];
    }
    for (long step = 0; step < orbit.period; ++step)
      detail::henon_step_series(f, zs, ws, k);
    Vec2<S> rk;
    rk << zs[size_t(k)], ws[size_t(k)];

    Mat2<S> B = A;
    B(0, 0) -= lam_k;
    B(1, 1) -= lam_k;
    S det = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
    double bmax = std::max(std::max(to_dbl(abs_of(B(0, 0))), to_dbl(abs_of(B(0, 1)))),
                           std::max(to_dbl(abs_of(B(1, 0))), to_dbl(abs_of(B(1, 1)))));
    double dmag = to_dbl(abs_of(det));
    double cond = dmag > 0.0 ? bmax * bmax / dmag : std::numeric_limits<double>::infinity();
    chart.cond_max = std::max(chart.cond_max, cond);
    if (!(cond < 1e12))
      throw Error("resonance-like-conditioning",
                  "order-" + std::to_string(k) + " solve is ill conditioned", cond, k);
    Vec2<S> ck;
    ck[0] = (B(1, 1) * (-rk[0]) - B(0, 1) * (-rk[1])) / det;
    ck[1] = (B(0, 0) * (-rk[1]) - B(1, 0) * (-rk[0])) / det;
    chart.coeffs[size_t(k)] = ck;
  }

  // validity radius: largest 2^{-j} where the sampled conjugacy holds
  double tol = 1e-8 * (1.0 + norm2_d(orbit.points[0]));
  for (int j = 0; j <= 48; ++j) {
    double rho = std::pow(2.0, -j);
    if (detail::residual_on_circle(f, chart, rho, 100) <= tol) {
      chart.rho = rho;
      break;
    }
  }
  if (chart.rho == 0.0)
    throw Error("conjugacy-validation-failed",
                "local series residual exceeds tolerance at every dyadic radius");
  return chart;
}

template <class S>
Vec2<S> eval_local(const StableChart<S>& chart, const S& zeta) {
  Vec2<S> x = Vec2<S>::Zero();
  for (size_t k = chart.coeffs.size(); k-- > 0;) {
    x[0] = x[0] * zeta + chart.coeffs[k][0];
    x[1] = x[1] * zeta + chart.coeffs[k][1];
  }
  return x;
}

template <class S>
Vec2<S> eval_local_derivative(const StableChart<S>& chart, const S& zeta) {
  Vec2<S> v = Vec2<S>::Zero();
  for (size_t k = chart.coeffs.size(); k-- > 1;) {
    v[0] = v[0] * zeta + S(double(k)) * chart.coeffs[k][0];
    v[1] = v[1] * zeta + S(double(k)) * chart.coeffs[k][1];
  }
  return v;
}

template <class S>
struct LeafEval {
  Vec2<S> x = Vec2<S>::Zero();   // point (affine), valid when `affine`
  Vec2<S> v = Vec2<S>::Zero();   // d psi / dZ, valid when `has_velocity`
  bool affine = true;
  bool has_velocity = true;
  ProjPoint<S> proj;             // set when the pullback left the affine range
  long pullback_periods = 0;
  double err_estimate = 0.0;
};

// psi(Z) via minimal m >= 0 with |lambda_s^m Z| <= rho, local series there,
// then m inverse periods; derivative transported by exact inverse Jacobians.
template <class S>
LeafEval<S> eval_global(const HenonMap<S>& f, const StableChart<S>& chart, const S& Z,
                        double err_budget = 1e-6) {
  const double lam = to_dbl(abs_of(chart.lambda_s()));
  double aZ = to_dbl(abs_of(Z));
  long m = 0;
  if (aZ > chart.rho) {
    m = long(std::ceil((std::log(aZ) - std::log(chart.rho)) / -std::log(lam) - 1e-12));
    if (m < 0) m = 0;
  }
  while (aZ * std::pow(lam, double(m)) > chart.rho) ++m;

  LeafEval<S> out;
  out.pullback_periods = m;
  S zeta = pow_int(chart.lambda_s(), m) * Z;
  out.x = eval_local(chart, zeta);
  out.v = eval_local_derivative(chart, zeta);
  // d/dZ of psi_loc(lambda_s^m Z)
  S lam_m = pow_int(chart.lambda_s(), m);
  out.v[0] = out.v[0] * lam_m;
  out.v[1] = out.v[1] * lam_m;

  // Relative-error amplification along the pullback: per inverse step the
  // coordinate error relative to the local scale s = max(1, |x|_inf) grows
  // by at most |Df^{-1}|_inf s_before / s_after (about 1/|lambda_s| per
  // period near the saddle, about d per squaring step far out), plus one
  // fresh rounding. err_estimate = eps * amplification, as an error
  // relative to the chart scale of the landing point.
  using R = typename scalar_info<S>::real_type;
  double amp = 1.0;
  auto scale_of = [](const Vec2<S>& p) {
    using std::max;
    return max(R(1), max(abs_of(p[0]), abs_of(p[1])));
  };
  const long steps = m * chart.period();
  for (long k = 0; k < steps; ++k) {
    using std::max;
    Mat2<S> J = jacobian_inverse(f, out.x);
    // row-sum norm and scales stay in the working scalar: coordinates far
    // out on the leaf overflow binary64 long before the ratio does
    R jn = max(abs_of(J(0, 0)) + abs_of(J(0, 1)), abs_of(J(1, 0)) + abs_of(J(1, 1)));
    R s_before = scale_of(out.x);
    out.v = (J * out.v).eval();
    try {
      out.x = eval_inverse(f, out.x);
    } catch (const Error&) {
      // continue the point in projective coordinates; the transported
      // velocity is no longer meaningful
      ProjPoint<S> pp = to_projective(out.x);
      for (long r = k; r < steps; ++r) pp = eval_inverse_proj(f, pp);
      out.proj = pp;
      out.has_velocity = false;
      out.affine = false;
      if (!pp.at_infinity()) {
        Vec2<S> back = pp.affine();
        if (!scalar_info<S>::out_of_range(back[0]) && !scalar_info<S>::out_of_range(back[1])) {
          out.x = back;
          out.affine = true;
        }
      }
      out.err_estimate = std::numeric_limits<double>::infinity();
      return out;
    }
    amp = amp * std::max(1.0, to_dbl(jn * s_before / scale_of(out.x))) + 1.0;
  }
  out.err_estimate = scalar_info<S>::eps() * amp;
  if (!(out.err_estimate <= err_budget))
    throw Error("precision-exhausted",
                "inverse-orbit error estimate exceeds budget; raise the mantissa",
                out.err_estimate, m);
  return out;
}

// Forward-orbit distances to the periodic point; geometric decay with ratio
// about |lambda_s| is the leaf-membership signature.
template <class S>
double leaf_membership_check(const HenonMap<S>& f, const Vec2<S>& x0,
                             const SaddleOrbitT<S>& orbit, long steps,
                             std::vector<double>* distances = nullptr) {
  double worst = 0.0;
  Vec2<S> x = x0;
  for (long k = 0; k <= steps; ++k) {
    Vec2<S> diff = x - orbit.points[0];
    double dist = norm2_d(diff);
    if (distances) distances->push_back(dist);
    worst = std::max(worst, dist);
    if (k == steps) break;
    try {
      for (long j = 0; j < orbit.period; ++j) x = eval_forward(f, x);
    } catch (const Error&) {
      break;  // diagnostic only: stop at the representable range
    }
  }
  return worst;
}

}  // namespace henon

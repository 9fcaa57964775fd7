#pragma once
// Fubini-Study speed of parametrized curves in P^2, chart-aware.
// Normalization: unit-sphere quotient, so a projective line has diameter
// pi/2 and the chordal distance is the sine of the FS distance.
#include <functional>

#include "henon/projective.hpp"

namespace henon {

template <class S>
struct TangentSample {
  ProjPoint<S> point;
  int chart;         // index of the homogeneous coordinate equal to 1
  Vec2<S> velocity;  // affine velocity in that chart, non-chart coords in
                     // ascending index order
};

using TangentSampleD = TangentSample<cxd>;

// Build a sample from a homogeneous lift X(theta) and its derivative V.
// The chart is the largest-modulus coordinate; the affine velocity follows
// from d/dtheta (X_j / X_idx) = (V_j - h_j V_idx) / X_idx.
template <class S>
TangentSample<S> tangent_from_lift(const Vec3<S>& X, const Vec3<S>& V) {
  using R = typename scalar_info<S>::real_type;
  R m0 = abs_of(X[0]), m1 = abs_of(X[1]), m2 = abs_of(X[2]);
  int idx = 0;
  R best = m0;
  if (m1 > best) { best = m1; idx = 1; }
  if (m2 > best) { best = m2; idx = 2; }
  if (to_dbl(best) == 0.0)
    throw Error("bad-projective-point", "zero homogeneous lift");
  TangentSample<S> s;
  s.chart = idx;
  const S& den = X[idx];
  for (int j = 0; j < 3; ++j) s.point.h[j] = X[j] / den;
  s.point.h[idx] = S(1);
  int out = 0;
  for (int j = 0; j < 3; ++j) {
    if (j == idx) continue;
    s.velocity[out++] = (V[j] - s.point.h[j] * V[idx]) / den;
  }
  return s;
}

template <class S>
TangentSample<S> make_tangent(const Vec2<S>& x, const Vec2<S>& v) {
  Vec3<S> X, V;
  X << x[0], x[1], S(1);
  V << v[0], v[1], S(0);
  return tangent_from_lift(X, V);
}

template <class S>
TangentSampleD to_double_sample(const TangentSample<S>& s) {
  TangentSampleD d;
  d.chart = s.chart;
  for (int j = 0; j < 3; ++j) d.point.h[j] = scalar_info<S>::to_cxd(s.point.h[j]);
  d.velocity[0] = scalar_info<S>::to_cxd(s.velocity[0]);
  d.velocity[1] = scalar_info<S>::to_cxd(s.velocity[1]);
  return d;
}

// ds(P, V) in the chart (u0, u1):
//   sqrt(|du0|^2 + |du1|^2 + |u0 du1 - u1 du0|^2) / (1 + |u0|^2 + |u1|^2),
// which equals the textbook form
//   sqrt((1+|u|^2)(|du|^2) - |conj(u0)du0 + conj(u1)du1|^2) / (1+|u|^2)
// without the cancellation in the subtraction.
inline double fs_speed(const TangentSampleD& s) {
  cxd u0, u1;
  int out = 0;
  for (int j = 0; j < 3; ++j) {
    if (j == s.chart) continue;
    (out == 0 ? u0 : u1) = s.point.h[j];
    ++out;
  }
  const cxd du0 = s.velocity[0], du1 = s.velocity[1];
  double n2 = std::norm(du0) + std::norm(du1) + std::norm(u0 * du1 - u1 * du0);
  double den = 1.0 + std::norm(u0) + std::norm(u1);
  return std::sqrt(n2) / den;
}

// The displayed chart formula, kept for cross-checking fs_speed.
inline double fs_speed_reference(const TangentSampleD& s) {
  cxd u0, u1;
  int out = 0;
  for (int j = 0; j < 3; ++j) {
    if (j == s.chart) continue;
    (out == 0 ? u0 : u1) = s.point.h[j];
    ++out;
  }
  const cxd du0 = s.velocity[0], du1 = s.velocity[1];
  double q = 1.0 + std::norm(u0) + std::norm(u1);
  double mixed = std::norm(std::conj(u0) * du0 + std::conj(u1) * du1);
  double num = q * (std::norm(du0) + std::norm(du1)) - mixed;
  if (num < 0) num = 0;
  return std::sqrt(num) / q;
}

// A parametrized curve with exact analytic derivatives.
using Curve = std::function<TangentSampleD(cxd)>;

inline double curve_speed(const Curve& c, cxd theta) { return fs_speed(c(theta)); }

struct DiscMax {
  double value = 0.0;
  cxd argmax = 0.0;
};

// Polar-grid scan of `fn` over the closed disc, refined by compass search
// down to step `refine_step`. Scan order (radius ascending, angle ascending,
// strict improvement) makes ties resolve to smallest |theta|, then smallest
// argument. Deterministic.
inline DiscMax maximize_on_disc(const std::function<double(cxd)>& fn, cxd center,
                                double radius, int n_radii, int n_angles,
                                bool boundary_clustered = false,
                                double refine_step = 1e-6) {
  if (n_radii < 2 || n_angles < 2)
    throw Error("bad-grid", "disc maximization needs at least a 2x2 polar grid");
  DiscMax best;
  best.argmax = center;
  best.value = fn(center);
  for (int j = 1; j < n_radii; ++j) {
    double frac = double(j) / double(n_radii - 1);
    double r = radius * (boundary_clustered ? std::sin(0.5 * M_PI * frac) : frac);
    for (int k = 0; k < n_angles; ++k) {
      double phi = 2.0 * M_PI * double(k) / double(n_angles);
      cxd th = center + std::polar(r, phi);
      double v = fn(th);
      if (v > best.value) {
        best.value = v;
        best.argmax = th;
      }
    }
  }
  // compass refinement, clipped to the disc
  double step = radius / double(n_radii - 1);
  int guard = 0;
  while (step > refine_step && guard++ < 2000) {
    bool moved = false;
    const cxd dirs[4] = {cxd(step, 0), cxd(-step, 0), cxd(0, step), cxd(0, -step)};
    for (const cxd& d : dirs) {
      cxd cand = best.argmax + d;
      if (std::abs(cand - center) > radius) continue;
      double v = fn(cand);
      if (v > best.value) {
        best.value = v;
        best.argmax = cand;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

// max of curve_speed over a polar grid of the disc, with refinement
inline DiscMax sup_speed_on_disc(const Curve& c, cxd center, double radius, int grid) {
  if (grid < 8) throw Error("bad-grid", "sup_speed_on_disc needs grid >= 8");
  return maximize_on_disc([&](cxd th) { return fs_speed(c(th)); }, center, radius,
                          grid, grid, false);
}

// Angular scan + compass refinement on the circle |theta| = radius. The
// refinement matters: speed spikes of some entire curves have angular width
// well below any reasonable grid spacing.
inline DiscMax maximize_on_circle(const std::function<double(cxd)>& fn, double radius,
                                  int n_angles, double refine_step = 1e-9) {
  DiscMax best;
  double best_phi = 0.0;
  best.value = fn(std::polar(radius, 0.0));
  best.argmax = std::polar(radius, 0.0);
  for (int k = 1; k < n_angles; ++k) {
    double phi = 2.0 * M_PI * double(k) / double(n_angles);
    double v = fn(std::polar(radius, phi));
    if (v > best.value) {
      best.value = v;
      best.argmax = std::polar(radius, phi);
      best_phi = phi;
    }
  }
  double step = 2.0 * M_PI / double(n_angles);
  int guard = 0;
  while (step > refine_step && guard++ < 4000) {
    bool moved = false;
    for (double d : {step, -step}) {
      double phi = best_phi + d;
      double v = fn(std::polar(radius, phi));
      if (v > best.value) {
        best.value = v;
        best_phi = phi;
        best.argmax = std::polar(radius, phi);
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace henon

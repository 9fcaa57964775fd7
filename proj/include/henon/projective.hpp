#pragma once
// Projective extensions of the map to P^2 minus the indeterminacy points
// I+ = [0:1:0], I- = [1:0:0], with max-modulus-normalized representatives.
#include <Eigen/Core>

#include "henon/map.hpp"

namespace henon {

template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;

template <class S>
struct ProjPoint {
  // normalized so the largest-modulus coordinate is exactly 1
  Vec3<S> h;

  bool at_infinity() const { return h[2] == S(0); }
  bool is_affine_chart() const { return !at_infinity(); }

  Vec2<S> affine() const {
    if (at_infinity())
      throw Error("not-affine", "point lies on the line at infinity");
    Vec2<S> x;
    x[0] = h[0] / h[2];
    x[1] = h[1] / h[2];
    return x;
  }
};

using ProjPointD = ProjPoint<cxd>;

template <class S>
ProjPoint<S> normalize_proj(const Vec3<S>& raw) {
  using R = typename scalar_info<S>::real_type;
  R m0 = abs_of(raw[0]), m1 = abs_of(raw[1]), m2 = abs_of(raw[2]);
  int idx = 0;
  R best = m0;
  if (m1 > best) { best = m1; idx = 1; }
  if (m2 > best) { best = m2; idx = 2; }
  if (to_dbl(best) == 0.0)
    throw Error("bad-projective-point", "all homogeneous coordinates are zero");
  ProjPoint<S> p;
  S div = raw[idx];
  p.h[0] = raw[0] / div;
  p.h[1] = raw[1] / div;
  p.h[2] = raw[2] / div;
  p.h[idx] = S(1);  // exact
  return p;
}

template <class S>
ProjPoint<S> to_projective(const Vec2<S>& x) {
  Vec3<S> h;
  h << x[0], x[1], S(1);
  return normalize_proj(h);
}

template <class S>
ProjPoint<S> point_I_plus() {
  ProjPoint<S> p;
  p.h << S(0), S(1), S(0);
  return p;
}

template <class S>
ProjPoint<S> point_I_minus() {
  ProjPoint<S> p;
  p.h << S(1), S(0), S(0);
  return p;
}

// Homogenized polynomial sum_k c_k z^k t^{d-k}; exact at t = 0.
template <class S>
S homogenized_poly(const Polynomial<S>& p, const S& z, const S& t) {
  // Horner in z with one multiplication by t per level:
  // ((c_d z + c_{d-1} t) z + c_{d-2} t^2) ... accumulate t powers stepwise
  const auto& c = p.coeffs();
  int d = p.degree();
  S acc = c[size_t(d)];
  S tp = S(1);
  for (int k = d - 1; k >= 0; --k) {
    tp = tp * t;
    acc = acc * z + c[size_t(k)] * tp;
  }
  return acc;
}

// f~([z:w:t]) = [t^d p(z/t) - a w t^{d-1} : z t^{d-1} : t^d]; undefined at I+.
template <class S>
ProjPoint<S> eval_forward_proj(const HenonMap<S>& f, const ProjPoint<S>& x) {
  const S &z = x.h[0], &w = x.h[1], &t = x.h[2];
  if (z == S(0) && t == S(0))
    throw Error("indeterminate-point", "forward extension is undefined at I+");
  int d = f.degree();
  S td1 = pow_int(t, d - 1);
  Vec3<S> y;
  y[0] = homogenized_poly(f.p(), z, t) - f.a() * w * td1;
  y[1] = z * td1;
  y[2] = td1 * t;
  return normalize_proj(y);
}

// f~^{-1}([z:w:t]) = [w t^{d-1} : (1/a)(t^d p(w/t) - z t^{d-1}) : t^d],
// stored scaled by a to avoid the division; undefined at I-.
template <class S>
ProjPoint<S> eval_inverse_proj(const HenonMap<S>& f, const ProjPoint<S>& x) {
  const S &z = x.h[0], &w = x.h[1], &t = x.h[2];
  if (w == S(0) && t == S(0))
    throw Error("indeterminate-point", "inverse extension is undefined at I-");
  int d = f.degree();
  S td1 = pow_int(t, d - 1);
  Vec3<S> y;
  y[0] = f.a() * w * td1;
  y[1] = homogenized_poly(f.p(), w, t) - z * td1;
  y[2] = f.a() * td1 * t;
  return normalize_proj(y);
}

template <class S>
Vec3<S> cross(const Vec3<S>& a, const Vec3<S>& b) {
  Vec3<S> c;
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
  return c;
}

template <class S>
typename scalar_info<S>::real_type norm3(const Vec3<S>& x) {
  using std::sqrt;
  return sqrt(abs2_of(x[0]) + abs2_of(x[1]) + abs2_of(x[2]));
}

// Chordal distance sigma([X],[Y]) = |X x Y| / (|X||Y|), in [0, 1].
template <class S>
typename scalar_info<S>::real_type chordal(const ProjPoint<S>& a, const ProjPoint<S>& b) {
  return norm3(cross(a.h, b.h)) / (norm3(a.h) * norm3(b.h));
}

template <class S>
double chordal_d(const ProjPoint<S>& a, const ProjPoint<S>& b) {
  return to_dbl(chordal(a, b));
}

}  // namespace henon

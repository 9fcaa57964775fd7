#pragma once
// Generalized Henon map f(z,w) = (p(z) - a w, z), its inverse
// f^{-1}(z,w) = (w, (p(w) - z)/a), Jacobians and orbit iteration.
#include <Eigen/Core>

#include "henon/errors.hpp"
#include "henon/polynomial.hpp"
#include "henon/scalar.hpp"

namespace henon {

template <class S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using Mat2 = Eigen::Matrix<S, 2, 2>;

using Vec2cd = Vec2<cxd>;
using Mat2cd = Mat2<cxd>;

template <class S>
class HenonMap {
public:
  HenonMap(Polynomial<S> p, S a) : p_(std::move(p)), a_(std::move(a)) {
    if (a_ == S(0)) throw Error("bad-map", "a must be a non-zero constant");
    if (p_.degree() < 2) throw Error("bad-map", "polynomial degree must be >= 2");
  }

  const Polynomial<S>& p() const { return p_; }
  const S& a() const { return a_; }
  int degree() const { return p_.degree(); }

  template <class To>
  HenonMap<To> cast() const {
    return HenonMap<To>(p_.template cast<To>(), To(scalar_info<S>::to_cxd(a_)));
  }

private:
  Polynomial<S> p_;
  S a_;
};

using HenonMapD = HenonMap<cxd>;

template <class S>
void check_range(const Vec2<S>& x, long step = -1) {
  if (scalar_info<S>::out_of_range(x[0]) || scalar_info<S>::out_of_range(x[1]))
    throw Error("escaped-representable-range",
                "orbit left the representable coordinate range", 0.0, step);
}

template <class S>
Vec2<S> eval_forward(const HenonMap<S>& f, const Vec2<S>& x) {
  Vec2<S> y;
  y[0] = f.p()(x[0]) - f.a() * x[1];
  y[1] = x[0];
  check_range(y);
  return y;
}

template <class S>
Vec2<S> eval_inverse(const HenonMap<S>& f, const Vec2<S>& x) {
  Vec2<S> y;
  y[0] = x[1];
  y[1] = (f.p()(x[1]) - x[0]) / f.a();
  check_range(y);
  return y;
}

// Df at x: [[p'(z), -a], [1, 0]]; det == a identically.
template <class S>
Mat2<S> jacobian(const HenonMap<S>& f, const Vec2<S>& x) {
  Mat2<S> j;
  j(0, 0) = f.p().derivative_at(x[0]);
  j(0, 1) = -f.a();
  j(1, 0) = S(1);
  j(1, 1) = S(0);
  return j;
}

// Derivative of f^{-1} at x: [[0, 1], [-1/a, p'(w)/a]]; det == 1/a.
template <class S>
Mat2<S> jacobian_inverse(const HenonMap<S>& f, const Vec2<S>& x) {
  Mat2<S> j;
  j(0, 0) = S(0);
  j(0, 1) = S(1);
  j(1, 0) = S(-1) / f.a();
  j(1, 1) = f.p().derivative_at(x[1]) / f.a();
  return j;
}

// n-fold composition; n < 0 iterates the inverse. Throws
// "escaped-representable-range" with the step index at which it occurred.
template <class S>
Vec2<S> iterate(const HenonMap<S>& f, Vec2<S> x, long n) {
  long steps = n >= 0 ? n : -n;
  for (long k = 0; k < steps; ++k) {
    try {
      x = n >= 0 ? eval_forward(f, x) : eval_inverse(f, x);
    } catch (Error& e) {
      e.index = k;
      throw;
    }
  }
  return x;
}

// Same, accumulating the orbit-ordered Jacobian product.
template <class S>
std::pair<Vec2<S>, Mat2<S>> iterate_with_jacobian(const HenonMap<S>& f, Vec2<S> x, long n) {
  Mat2<S> acc = Mat2<S>::Identity();
  long steps = n >= 0 ? n : -n;
  for (long k = 0; k < steps; ++k) {
    Mat2<S> step = n >= 0 ? jacobian(f, x) : jacobian_inverse(f, x);
    acc = (step * acc).eval();
    try {
      x = n >= 0 ? eval_forward(f, x) : eval_inverse(f, x);
    } catch (Error& e) {
      e.index = k;
      throw;
    }
  }
  return {x, acc};
}

template <class S>
typename scalar_info<S>::real_type norm2(const Vec2<S>& x) {
  using std::sqrt;
  return sqrt(abs2_of(x[0]) + abs2_of(x[1]));
}

template <class S>
double norm2_d(const Vec2<S>& x) {
  return to_dbl(norm2(x));
}

template <class S>
Vec2cd to_cxd_vec(const Vec2<S>& x) {
  Vec2cd y;
  y[0] = scalar_info<S>::to_cxd(x[0]);
  y[1] = scalar_info<S>::to_cxd(x[1]);
  return y;
}

}  // namespace henon

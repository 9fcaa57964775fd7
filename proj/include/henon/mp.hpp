#pragma once
// Software floating point with run-time mantissa width, wrapped from MPFR,
// plus the complex type built on it. Deep inverse-orbit evaluation and the
// Green function past ~1e100 use these; everything else stays in binary64.
#include <mpfr.h>

#include <complex>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace henon {

namespace mp {

inline unsigned& tl_bits() {
  thread_local unsigned bits = 128;
  return bits;
}

inline unsigned default_bits() { return tl_bits(); }
inline void set_default_bits(unsigned bits) { tl_bits() = bits < 24 ? 24 : bits; }

// Scoped precision change; restores on destruction.
struct ScopedBits {
  unsigned saved;
  explicit ScopedBits(unsigned bits) : saved(default_bits()) { set_default_bits(bits); }
  ~ScopedBits() { set_default_bits(saved); }
  ScopedBits(const ScopedBits&) = delete;
  ScopedBits& operator=(const ScopedBits&) = delete;
};

}  // namespace mp

class MpReal {
public:
  MpReal() { mpfr_init2(v_, mp::default_bits()); mpfr_set_zero(v_, 1); }
  MpReal(double d) { mpfr_init2(v_, mp::default_bits()); mpfr_set_d(v_, d, MPFR_RNDN); }
  MpReal(int i) { mpfr_init2(v_, mp::default_bits()); mpfr_set_si(v_, i, MPFR_RNDN); }
  MpReal(long i) { mpfr_init2(v_, mp::default_bits()); mpfr_set_si(v_, i, MPFR_RNDN); }

  MpReal(const MpReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MpReal(MpReal&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  MpReal& operator+=(const MpReal& o) { return apply2(mpfr_add, o); }
  MpReal& operator-=(const MpReal& o) { return apply2(mpfr_sub, o); }
  MpReal& operator*=(const MpReal& o) { return apply2(mpfr_mul, o); }
  MpReal& operator/=(const MpReal& o) { return apply2(mpfr_div, o); }

  friend MpReal operator+(const MpReal& a, const MpReal& b) { return binop(mpfr_add, a, b); }
  friend MpReal operator-(const MpReal& a, const MpReal& b) { return binop(mpfr_sub, a, b); }
  friend MpReal operator*(const MpReal& a, const MpReal& b) { return binop(mpfr_mul, a, b); }
  friend MpReal operator/(const MpReal& a, const MpReal& b) { return binop(mpfr_div, a, b); }
  friend MpReal operator-(const MpReal& a) {
    MpReal r = make();
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  friend MpReal abs(const MpReal& a) {
    MpReal r = make();
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal sqrt(const MpReal& a) {
    MpReal r = make();
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal log(const MpReal& a) {
    MpReal r = make();
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal log1p(const MpReal& a) {
    MpReal r = make();
    mpfr_log1p(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal hypot(const MpReal& a, const MpReal& b) {
    MpReal r = make();
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend MpReal max(const MpReal& a, const MpReal& b) { return a >= b ? a : b; }
  friend MpReal min(const MpReal& a, const MpReal& b) { return a <= b ? a : b; }
  friend bool isfinite(const MpReal& a) { return mpfr_number_p(a.v_) != 0; }

  static MpReal eps() {
    // unit roundoff at the current default mantissa width
    MpReal r = make();
    mpfr_set_ui_2exp(r.v_, 1, -(mpfr_exp_t)mp::default_bits(), MPFR_RNDN);
    return r;
  }

  // approximate log2 |x|, safe for the full exponent range
  double log2_magnitude() const {
    if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
    return double(mpfr_get_exp(v_));
  }

private:
  static MpReal make() { return MpReal(); }
  template <class F>
  MpReal& apply2(F f, const MpReal& o) {
    f(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  template <class F>
  static MpReal binop(F f, const MpReal& a, const MpReal& b) {
    MpReal r = make();
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

class MpComplex {
public:
  MpComplex() = default;
  MpComplex(double re) : re_(re) {}
  MpComplex(int re) : re_(re) {}
  MpComplex(double re, double im) : re_(re), im_(im) {}
  MpComplex(MpReal re, MpReal im = MpReal()) : re_(std::move(re)), im_(std::move(im)) {}
  MpComplex(const std::complex<double>& z) : re_(z.real()), im_(z.imag()) {}

  const MpReal& real() const { return re_; }
  const MpReal& imag() const { return im_; }
  std::complex<double> to_cxd() const { return {re_.to_double(), im_.to_double()}; }

  MpComplex& operator+=(const MpComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  MpComplex& operator-=(const MpComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  MpComplex& operator*=(const MpComplex& o) { return *this = *this * o; }
  MpComplex& operator/=(const MpComplex& o) { return *this = *this / o; }

  friend MpComplex operator+(const MpComplex& a, const MpComplex& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend MpComplex operator-(const MpComplex& a, const MpComplex& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend MpComplex operator-(const MpComplex& a) { return {-a.re_, -a.im_}; }
  friend MpComplex operator*(const MpComplex& a, const MpComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend MpComplex operator/(const MpComplex& a, const MpComplex& b) {
    // Smith's algorithm; safe over the full MPFR exponent range.
    if (abs(b.re_) >= abs(b.im_)) {
      MpReal r = b.im_ / b.re_;
      MpReal den = b.re_ + b.im_ * r;
      return {(a.re_ + a.im_ * r) / den, (a.im_ - a.re_ * r) / den};
    }
    MpReal r = b.re_ / b.im_;
    MpReal den = b.re_ * r + b.im_;
    return {(a.re_ * r + a.im_) / den, (a.im_ * r - a.re_) / den};
  }

  friend bool operator==(const MpComplex& a, const MpComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const MpComplex& a, const MpComplex& b) { return !(a == b); }

  friend MpComplex conj(const MpComplex& a) { return {a.re_, -a.im_}; }
  friend MpReal real(const MpComplex& a) { return a.re_; }
  friend MpReal imag(const MpComplex& a) { return a.im_; }
  friend MpReal abs(const MpComplex& a) { return hypot(a.re_, a.im_); }
  friend MpReal abs2(const MpComplex& a) { return a.re_ * a.re_ + a.im_ * a.im_; }
  friend MpReal norm(const MpComplex& a) { return abs2(a); }
  friend bool isfinite(const MpComplex& a) { return isfinite(a.re_) && isfinite(a.im_); }

  friend MpComplex sqrt(const MpComplex& z) {
    if (z.re_.is_zero() && z.im_.is_zero()) return MpComplex();
    MpReal m = abs(z);
    MpReal w = sqrt((m + abs(z.re_)) / MpReal(2));
    MpReal two_w = MpReal(2) * w;
    if (z.re_.sign() >= 0) return {w, z.im_ / two_w};
    MpReal im = z.im_.sign() >= 0 ? w : -w;
    return {abs(z.im_) / two_w, im};
  }

private:
  MpReal re_, im_;
};

// integer power by binary exponentiation; n may be negative
inline MpComplex pow_int(const MpComplex& z, long n) {
  if (n == 0) return MpComplex(1);
  MpComplex base = n > 0 ? z : MpComplex(1) / z;
  unsigned long e = n > 0 ? (unsigned long)n : (unsigned long)(-n);
  MpComplex acc(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace henon

namespace Eigen {

template <>
struct NumTraits<henon::MpReal> : GenericNumTraits<henon::MpReal> {
  typedef henon::MpReal Real;
  typedef henon::MpReal NonInteger;
  typedef henon::MpReal Nested;
  typedef henon::MpReal Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 30,
    MulCost = 50
  };
  static Real epsilon() { return henon::MpReal::eps(); }
  static Real dummy_precision() { return henon::MpReal::eps() * henon::MpReal(1024); }
  static int digits10() { return int(henon::mp::default_bits() * 0.30103); }
  static Real highest() { return henon::MpReal(1e308); }
  static Real lowest() { return henon::MpReal(-1e308); }
};

template <>
struct NumTraits<henon::MpComplex> : GenericNumTraits<henon::MpComplex> {
  typedef henon::MpReal Real;
  typedef henon::MpComplex NonInteger;
  typedef henon::MpComplex Nested;
  typedef henon::MpComplex Literal;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 20,
    AddCost = 60,
    MulCost = 200
  };
  static Real epsilon() { return henon::MpReal::eps(); }
  static Real dummy_precision() { return henon::MpReal::eps() * henon::MpReal(1024); }
  static int digits10() { return int(henon::mp::default_bits() * 0.30103); }
};

}  // namespace Eigen

#pragma once
// Scalar abstraction: the whole core is templated on the complex scalar type,
// either std::complex<double> or MpComplex.
#include <complex>
#include <cmath>
#include <limits>

#include "henon/mp.hpp"

namespace henon {

using cxd = std::complex<double>;

template <class S>
struct scalar_info;

template <>
struct scalar_info<cxd> {
  using real_type = double;
  static constexpr bool is_binary64 = true;
  static cxd from_cxd(const cxd& z) { return z; }
  static cxd to_cxd(const cxd& z) { return z; }
  static double to_double(double x) { return x; }
  static double eps() { return std::numeric_limits<double>::epsilon(); }
  // "escaped-representable-range" guard; far below binary64 overflow so a
  // degree-d Horner evaluation cannot overflow first.
  static bool out_of_range(const cxd& z) {
    return !(std::abs(z.real()) < 1e150 && std::abs(z.imag()) < 1e150);
  }
};

template <>
struct scalar_info<MpComplex> {
  using real_type = MpReal;
  static constexpr bool is_binary64 = false;
  static MpComplex from_cxd(const cxd& z) { return MpComplex(z); }
  static cxd to_cxd(const MpComplex& z) { return z.to_cxd(); }
  static double to_double(const MpReal& x) { return x.to_double(); }
  static double eps() { return std::pow(2.0, -double(mp::default_bits())); }
  static bool out_of_range(const MpComplex&) { return false; }
};

// --- free functions so templates can call unqualified via ADL ------------

inline double real_of(const cxd& z) { return z.real(); }
inline double imag_of(const cxd& z) { return z.imag(); }
inline MpReal real_of(const MpComplex& z) { return real(z); }
inline MpReal imag_of(const MpComplex& z) { return imag(z); }

inline double abs_of(const cxd& z) { return std::abs(z); }
inline MpReal abs_of(const MpComplex& z) { return abs(z); }

inline double abs2_of(const cxd& z) { return std::norm(z); }
inline MpReal abs2_of(const MpComplex& z) { return abs2(z); }

inline cxd conj_of(const cxd& z) { return std::conj(z); }
inline MpComplex conj_of(const MpComplex& z) { return conj(z); }

inline double to_dbl(double x) { return x; }
inline double to_dbl(const MpReal& x) { return x.to_double(); }

// log2 of the magnitude, usable over the full exponent range of the scalar
inline double log2_mag(const cxd& z) {
  double m = std::max(std::abs(z.real()), std::abs(z.imag()));
  return m == 0.0 ? -std::numeric_limits<double>::infinity() : std::log2(m);
}
inline double log2_mag(const MpComplex& z) {
  return std::max(real(z).log2_magnitude(), imag(z).log2_magnitude());
}

inline cxd pow_int(const cxd& z, long n) {
  if (n == 0) return 1.0;
  cxd base = n > 0 ? z : 1.0 / z;
  unsigned long e = n > 0 ? (unsigned long)n : (unsigned long)(-n);
  cxd acc = 1.0;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace henon

#pragma once
// Shared fixtures and independent oracles for the unit tests. Oracles here
// deliberately avoid the library's computation paths.
#include <cmath>
#include <complex>

#include "henon/map.hpp"
#include "henon/mapspec.hpp"

namespace henon::testing {

inline HenonMapD default_map() { return parse_map_spec("p = z^2 - 6; a = 0.5"); }

// fixed points of (z^2 + c - a w, z): roots of z^2 - (1+a) z + c
struct FixedPoints {
  cxd z_plus, z_minus;
  FixedPoints(cxd c, cxd a) {
    cxd disc = std::sqrt((1.0 + a) * (1.0 + a) - 4.0 * c);
    z_plus = 0.5 * ((1.0 + a) + disc);
    z_minus = 0.5 * ((1.0 + a) - disc);
  }
};

// multipliers at a fixed point of the quadratic family: mu^2 - 2 z mu + a
struct Multipliers {
  cxd unstable, stable;
  Multipliers(cxd z, cxd a) {
    cxd disc = std::sqrt(z * z - a);
    unstable = z + disc;
    if (std::abs(z - disc) > std::abs(unstable)) unstable = z - disc;
    stable = a / unstable;
  }
};

// period-2 orbit coordinates for p = z^2 + c: roots of
// x^2 + (1+a) x + c + (1+a)^2 (the two orbit points are (x, y), (y, x)
// with y = -(1+a) - x)
struct PeriodTwo {
  cxd x, y;
  PeriodTwo(cxd c, cxd a) {
    cxd one_a = 1.0 + a;
    cxd disc = std::sqrt(one_a * one_a - 4.0 * (c + one_a * one_a));
    x = 0.5 * (-one_a + disc);
    y = -one_a - x;
  }
};

// central finite differences of f^n (complex-analytic, so a real step in
// each complex coordinate direction determines the complex derivative)
inline Mat2cd fd_jacobian(const HenonMapD& f, const Vec2cd& x, long n, double h = 1e-6) {
  Mat2cd j;
  for (int col = 0; col < 2; ++col) {
    Vec2cd xp = x, xm = x;
    xp[col] += h;
    xm[col] -= h;
    Vec2cd fp = iterate(f, xp, n), fm = iterate(f, xm, n);
    j(0, col) = (fp[0] - fm[0]) / (2.0 * h);
    j(1, col) = (fp[1] - fm[1]) / (2.0 * h);
  }
  return j;
}

// Green function at (z0, 0) for large real z0 by the log recursion
//   u_{n+1} = 2 u_n + log|1 - (c + a z_{n-1}) / z_n^2|,
// tracked in log scale so nothing overflows; independent of green_plus.
inline double green_log_recursion_oracle(double z0, double c, double a, int steps = 60) {
  long double u_prev = std::log((long double)z0);  // log z_{n}
  long double u_prev2 = 0.0L;                      // log z_{n-1} (w_0 = 0 handled below)
  long double g = 0.0L;
  // g = lim 2^{-n} u_n = u_0 + sum 2^{-(n+1)} log|1 - eps_n|
  long double scale = 1.0L;
  g = u_prev;
  bool have_w = false;
  for (int n = 0; n < steps; ++n) {
    // z_{n+1} = z_n^2 (1 + (c - a z_{n-1}) / z_n^2)
    long double log_z2 = 2.0L * u_prev;
    long double corr;
    if (!have_w) {
      corr = c * std::exp(-log_z2);  // w_0 = 0
    } else {
      long double log_w = u_prev2;
      corr = c * std::exp(-log_z2) - a * std::exp(log_w - log_z2);
    }
    long double log_next = log_z2 + std::log1p((long double)corr);
    scale *= 0.5L;
    g += scale * (log_next - log_z2);
    u_prev2 = u_prev;
    u_prev = log_next;
    have_w = true;
    if (std::abs((double)(scale * (log_next - log_z2))) < 1e-18) break;
  }
  return (double)g;
}

}  // namespace henon::testing

#pragma once
// Truncated power-series arithmetic used by the linearizing chart build.
#include <vector>

#include "henon/polynomial.hpp"

namespace henon {

template <class S>
using Series = std::vector<S>;  // coefficients of zeta^0 .. zeta^M

template <class S>
Series<S> series_mul(const Series<S>& a, const Series<S>& b, int M) {
  Series<S> c(size_t(M) + 1, S(0));
  for (size_t i = 0; i < a.size() && int(i) <= M; ++i) {
    if (to_dbl(abs_of(a[i])) == 0.0) continue;
    for (size_t j = 0; j < b.size() && int(i + j) <= M; ++j)
      c[i + j] += a[i] * b[j];
  }
  return c;
}

template <class S>
Series<S> poly_of_series(const Polynomial<S>& p, const Series<S>& s, int M) {
  const auto& c = p.coeffs();
  Series<S> acc(size_t(M) + 1, S(0));
  acc[0] = c.back();
  for (int k = p.degree() - 1; k >= 0; --k) {
    acc = series_mul(acc, s, M);
    acc[0] += c[size_t(k)];
  }
  return acc;
}

template <class S>
S series_eval(const Series<S>& s, const S& zeta) {
  S acc = S(0);
  for (size_t k = s.size(); k-- > 0;) acc = acc * zeta + s[k];
  return acc;
}

template <class S>
S series_eval_derivative(const Series<S>& s, const S& zeta) {
  S acc = S(0);
  for (size_t k = s.size(); k-- > 1;) acc = acc * zeta + S(double(k)) * s[k];
  return acc;
}

}  // namespace henon

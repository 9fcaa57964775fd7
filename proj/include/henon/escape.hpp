#pragma once
// Escape-time classification into U+/K+ (and the mirrored backward sets),
// the numerical Green function g+, and boundary sampling of J+ on sections.
#include <optional>
#include <vector>

#include "henon/map.hpp"
#include "henon/parallel.hpp"
#include "henon/projective.hpp"

namespace henon {

enum class EscapeClass { EscapingForward, BoundedForward, Undecided };

inline const char* to_string(EscapeClass c) {
  switch (c) {
    case EscapeClass::EscapingForward: return "escaping-forward";
    case EscapeClass::BoundedForward: return "bounded-forward";
    default: return "undecided";
  }
}

struct EscapeRecord {
  EscapeClass classification = EscapeClass::Undecided;
  std::optional<long> n_escape;
  std::optional<double> green_plus;
};

enum class OrbitDirection { Forward, Backward };

// Radius R such that once |z| >= max(R, |w|) the orbit is certified to
// escape: there |p(z) - a w| >= 2|z|, so |z| doubles and the condition is
// invariant. Validity for all r >= R follows from monotonicity of
// G(r) = 1 - sum_i |c_i| r^{i-d} - (|a|+2) r^{1-d}, every term nonincreasing.
class FiltrationRadius {
public:
  FiltrationRadius(const HenonMapD& f, OrbitDirection dir = OrbitDirection::Forward) {
    const auto& c = f.p().coeffs();
    int d = f.degree();
    double aa = std::abs(f.a());
    // forward: |p(z)-aw| >= |z|^d - sum|c_i||z|^i - |a||z| >= 2|z|
    // backward: |p(w)-z|/|a| >= 2|w| needs r^d - sum|c_i| r^i - r >= 2|a| r
    double lin = dir == OrbitDirection::Forward ? aa + 2.0 : 1.0 + 2.0 * aa;
    auto ok = [&](double r) {
      double g = 1.0 - lin * std::pow(r, 1 - d);
      for (int i = 0; i < d; ++i) g -= std::abs(c[size_t(i)]) * std::pow(r, i - d);
      return g >= 0.0;
    };
    double hi = 1.0;
    while (!ok(hi)) hi *= 2.0;
    double lo = hi * 0.5;
    for (int it = 0; it < 60 && ok(hi); ++it) {
      double mid = 0.5 * (lo + hi);
      (ok(mid) ? hi : lo) = mid;
    }
    radius_ = hi;
  }

  double radius() const { return radius_; }

  // escape region test for a state in orbit coordinates of the direction:
  // forward uses (z, w), backward mirrors to (w, z)
  bool in_escape_region(const Vec2cd& x, OrbitDirection dir) const {
    double lead = dir == OrbitDirection::Forward ? std::abs(x[0]) : std::abs(x[1]);
    double other = dir == OrbitDirection::Forward ? std::abs(x[1]) : std::abs(x[0]);
    return lead >= radius_ && lead >= other;
  }

  bool in_ball(const Vec2cd& x) const {
    return std::abs(x[0]) <= radius_ && std::abs(x[1]) <= radius_;
  }

private:
  double radius_;
};

struct ClassifyOptions {
  long n_max = 200;
  double recurrence_tol = 1e-6;
};

// Escaping: the orbit enters the certified escape region, n_escape = first
// such step. Bounded: the orbit never enters it and revisits a
// recurrence_tol-neighborhood of an earlier orbit point with both points in
// the filtration polydisc. Anything else is undecided; plain n_max
// exhaustion is never "bounded".
inline EscapeRecord classify(const HenonMapD& f, const FiltrationRadius& fr,
                             const Vec2cd& x0, const ClassifyOptions& opt = {},
                             OrbitDirection dir = OrbitDirection::Forward) {
  EscapeRecord rec;
  std::vector<Vec2cd> orbit;
  orbit.reserve(size_t(opt.n_max) + 1);
  Vec2cd x = x0;
  for (long n = 0; n <= opt.n_max; ++n) {
    if (fr.in_escape_region(x, dir)) {
      rec.classification = EscapeClass::EscapingForward;
      rec.n_escape = n;
      return rec;
    }
    if (fr.in_ball(x)) {
      for (const auto& prev : orbit) {
        if (fr.in_ball(prev) && norm2_d<cxd>(x - prev) <= opt.recurrence_tol) {
          rec.classification = EscapeClass::BoundedForward;
          rec.green_plus = 0.0;
          return rec;
        }
      }
    }
    orbit.push_back(x);
    if (n == opt.n_max) break;
    try {
      x = dir == OrbitDirection::Forward ? eval_forward(f, x) : eval_inverse(f, x);
    } catch (const Error&) {
      // left the representable range without entering the certified region;
      // treat as escaping at this step (it certainly is unbounded)
      rec.classification = EscapeClass::EscapingForward;
      rec.n_escape = n + 1;
      return rec;
    }
  }
  return rec;
}

struct GreenOptions {
  long n_max = 200;
  double tol = 1e-9;
};

// log of the Euclidean norm without overflow in the squares
template <class S>
typename scalar_info<S>::real_type log_norm(const Vec2<S>& x) {
  using std::log;
  using std::log1p;
  using std::max;
  using std::min;
  using R = typename scalar_info<S>::real_type;
  R m0 = abs_of(x[0]), m1 = abs_of(x[1]);
  R hi = max(m0, m1), lo = min(m0, m1);
  if (to_dbl(hi) == 0.0) return R(0);
  R q = lo / hi;
  return log(hi) + R(0.5) * log1p(q * q);
}

namespace detail {

// Continue d^{-n} log+ ||f^n(x)|| from an orbit already in the escape regime
// until successive values stabilize.
template <class S>
std::optional<double> green_tail(const HenonMap<S>& f, Vec2<S> x, long n, long n_max,
                                 double tol, double scale_dn) {
  double d = double(f.degree());
  double g_prev = scale_dn * std::max(0.0, to_dbl(log_norm(x)));
  while (n < n_max) {
    x = eval_forward(f, x);
    ++n;
    scale_dn /= d;
    double g = scale_dn * std::max(0.0, to_dbl(log_norm(x)));
    if (std::abs(g - g_prev) < tol) return g;
    g_prev = g;
  }
  return std::nullopt;
}

}  // namespace detail

// Green function by the escape rate d^{-n} log+ ||f^n(x)||. Returns exactly 0
// for points classified bounded-forward. Switches to software floats once
// coordinates pass 1e100, lowered when one more degree-d step could cross
// the 1e150 range guard.
inline double green_plus(const HenonMapD& f, const FiltrationRadius& fr, const Vec2cd& x0,
                         const GreenOptions& opt = {},
                         OrbitDirection dir = OrbitDirection::Forward) {
  const double d = double(f.degree());
  const double switch_at = std::min(1e100, std::pow(10.0, 140.0 / d));
  std::vector<Vec2cd> orbit;
  Vec2cd x = x0;
  long n = 0;
  bool escaping = false;
  for (; n <= opt.n_max; ++n) {
    if (fr.in_escape_region(x, dir)) {
      escaping = true;
      break;
    }
    if (fr.in_ball(x)) {
      for (const auto& prev : orbit) {
        if (fr.in_ball(prev) && norm2_d<cxd>(x - prev) <= 1e-6) return 0.0;
      }
    }
    orbit.push_back(x);
    if (n == opt.n_max) break;
    x = dir == OrbitDirection::Forward ? eval_forward(f, x) : eval_inverse(f, x);
  }
  double last = std::pow(d, -double(n)) * std::max(0.0, to_dbl(log_norm(x)));
  if (!escaping)
    throw Error("green-undecided",
                "orbit neither certified escaping nor recurrent within n_max", last, n);

  double scale_dn = std::pow(d, -double(n));
  double g_prev = scale_dn * std::max(0.0, to_dbl(log_norm(x)));
  while (n < opt.n_max) {
    if (std::max(std::abs(x[0]), std::abs(x[1])) > switch_at) {
      // continue in software floats: wide exponent, 64-bit mantissa is ample
      mp::ScopedBits guard(std::max(64u, mp::default_bits()));
      HenonMap<MpComplex> fm = f.cast<MpComplex>();
      Vec2<MpComplex> xm;
      xm[0] = MpComplex(x[0]);
      xm[1] = MpComplex(x[1]);
      if (dir == OrbitDirection::Backward) {
        // iterate the inverse map in high precision
        double g_prev_m = g_prev;
        double scale = scale_dn;
        while (n < opt.n_max) {
          xm = eval_inverse(fm, xm);
          ++n;
          scale /= d;
          double g = scale * std::max(0.0, to_dbl(log_norm(xm)));
          if (std::abs(g - g_prev_m) < opt.tol) return g;
          g_prev_m = g;
        }
        throw Error("green-undecided", "estimate did not stabilize within n_max",
                    g_prev_m, n);
      }
      auto res = detail::green_tail(fm, xm, n, opt.n_max, opt.tol, scale_dn);
      if (res) return *res;
      throw Error("green-undecided", "estimate did not stabilize within n_max", g_prev, n);
    }
    x = dir == OrbitDirection::Forward ? eval_forward(f, x) : eval_inverse(f, x);
    ++n;
    scale_dn /= d;
    double g = scale_dn * std::max(0.0, to_dbl(log_norm(x)));
    if (std::abs(g - g_prev) < opt.tol) return g;
    g_prev = g;
  }
  throw Error("green-undecided", "estimate did not stabilize within n_max", g_prev, n);
}

// --- sections and grid classification ------------------------------------

// A real-2D slice of C^2 parametrized by zeta: either a complex line
// zeta -> base + zeta * dir, or the conjugate diagonal
// zeta -> base + (zeta, conj(zeta)).
struct Section {
  enum class Kind { Line, ConjDiagonal } kind = Kind::ConjDiagonal;
  Vec2cd base = Vec2cd::Zero();
  Vec2cd dir = (Vec2cd() << 1.0, 0.0).finished();

  Vec2cd at(cxd zeta) const {
    Vec2cd x = base;
    if (kind == Kind::Line) {
      x[0] += zeta * dir[0];
      x[1] += zeta * dir[1];
    } else {
      x[0] += zeta;
      x[1] += std::conj(zeta);
    }
    return x;
  }
};

struct Window {
  double re0 = -3, re1 = 3, im0 = -3, im1 = 3;
  int nx = 2, ny = 2;

  // grid node (ix, iy); row 0 sits at im1 (top-left origin)
  cxd zeta_at(int ix, int iy) const {
    double re = nx == 1 ? re0 : re0 + (re1 - re0) * ix / double(nx - 1);
    double im = ny == 1 ? im1 : im1 - (im1 - im0) * iy / double(ny - 1);
    return {re, im};
  }
};

struct GridClassification {
  Window window;
  Section section;
  std::vector<EscapeRecord> records;  // row-major, row 0 at im1 (top)
  long n_max = 0;

  cxd zeta_at(int ix, int iy) const { return window.zeta_at(ix, iy); }
  const EscapeRecord& at(int ix, int iy) const {
    return records[size_t(iy) * size_t(window.nx) + size_t(ix)];
  }
};

inline GridClassification classify_grid(const HenonMapD& f, const FiltrationRadius& fr,
                                        const Section& section, const Window& window,
                                        const ClassifyOptions& opt = {},
                                        bool with_green = false,
                                        const GreenOptions& gopt = {}) {
  if (window.nx < 2 || window.ny < 2)
    throw Error("bad-grid", "grid must be at least 2x2");
  GridClassification out;
  out.window = window;
  out.section = section;
  out.n_max = opt.n_max;
  out.records.resize(size_t(window.nx) * size_t(window.ny));
  parallel_for(out.records.size(), [&](size_t idx) {
    int ix = int(idx % size_t(window.nx));
    int iy = int(idx / size_t(window.nx));
    Vec2cd x = section.at(out.zeta_at(ix, iy));
    EscapeRecord rec = classify(f, fr, x, opt);
    if (with_green) {
      try {
        rec.green_plus = green_plus(f, fr, x, gopt);
      } catch (const Error&) {
        rec.green_plus.reset();
      }
    }
    out.records[idx] = rec;
  });
  return out;
}

// Grid points whose closed 4-neighborhood contains both an escaping-forward
// and a bounded-forward classification: boundary cells of K+ on the section.
inline std::vector<Vec2cd> boundary_points(const GridClassification& g) {
  std::vector<Vec2cd> pts;
  auto cls = [&](int ix, int iy) { return g.at(ix, iy).classification; };
  for (int iy = 0; iy < g.window.ny; ++iy) {
    for (int ix = 0; ix < g.window.nx; ++ix) {
      bool esc = false, bnd = false;
      const int dx[5] = {0, 1, -1, 0, 0};
      const int dy[5] = {0, 0, 0, 1, -1};
      for (int k = 0; k < 5; ++k) {
        int jx = ix + dx[k], jy = iy + dy[k];
        if (jx < 0 || jy < 0 || jx >= g.window.nx || jy >= g.window.ny) continue;
        EscapeClass c = cls(jx, jy);
        esc = esc || c == EscapeClass::EscapingForward;
        bnd = bnd || c == EscapeClass::BoundedForward;
      }
      if (esc && bnd) pts.push_back(g.section.at(g.zeta_at(ix, iy)));
    }
  }
  return pts;
}

}  // namespace henon

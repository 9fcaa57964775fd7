#pragma once
// Periodic orbits by damped Newton on the z-sequence system
//   G_i(z) = p(z_i) - a z_{i-1} - z_{i+1}   (indices mod N),
// which encodes f-orbits through w_i = z_{i-1}. Saddle certification and
// hyperbolicity constants along orbits.
#include <algorithm>
#include <vector>

#include "henon/escape.hpp"
#include "henon/map.hpp"
#include "henon/rng.hpp"

namespace henon {

struct NewtonStats {
  int iterations = 0;
  std::vector<double> step_norms;
  bool converged = false;

  // ||step_{k+1}|| / ||step_k||^2 over the final steps; bounded for
  // quadratic convergence near a simple root
  double last_quadratic_ratio() const {
    double worst = 0.0;
    for (size_t k = 0; k + 1 < step_norms.size(); ++k) {
      double den = step_norms[k] * step_norms[k];
      if (den < 1e-26) continue;  // already at the roundoff floor
      worst = std::max(worst, step_norms[k + 1] / den);
    }
    return worst;
  }
};

template <class S>
struct SaddleOrbitT {
  long period = 1;
  std::vector<Vec2<S>> points;  // points[i+1] = f(points[i])
  S lambda_s, lambda_u;
  Vec2<S> eigvec_s, eigvec_u;
  double residual = 0.0;
  bool saddle = false;
  NewtonStats stats;

  Mat2<S> period_jacobian(const HenonMap<S>& f) const {
    Mat2<S> m = Mat2<S>::Identity();
    for (const auto& x : points) m = (jacobian(f, x) * m).eval();
    return m;
  }
};

using SaddleOrbit = SaddleOrbitT<cxd>;

namespace detail {

// in-place Gaussian elimination with partial pivoting, any complex scalar
template <class S>
bool solve_dense(Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& A,
                 Eigen::Matrix<S, Eigen::Dynamic, 1>& b) {
  const int n = int(A.rows());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = to_dbl(abs_of(A(k, k)));
    for (int i = k + 1; i < n; ++i) {
      double m = to_dbl(abs_of(A(i, k)));
      if (m > best) { best = m; piv = i; }
    }
    if (best == 0.0) return false;
    if (piv != k) {
      for (int j = k; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      S m = A(i, k) / A(k, k);
      for (int j = k; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    S acc = b[k];
    for (int j = k + 1; j < n; ++j) acc -= A(k, j) * b[j];
    b[k] = acc / A(k, k);
  }
  return true;
}

template <class S>
using ZSeq = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
ZSeq<S> orbit_residual_vec(const HenonMap<S>& f, const ZSeq<S>& z) {
  const long N = z.size();
  ZSeq<S> g(N);
  for (long i = 0; i < N; ++i) {
    const S& prev = z[(i + N - 1) % N];
    const S& next = z[(i + 1) % N];
    g[i] = f.p()(z[i]) - f.a() * prev - next;
  }
  return g;
}

template <class S>
double seq_norm(const ZSeq<S>& v) {
  double s = 0.0;
  for (long i = 0; i < v.size(); ++i) s += to_dbl(abs2_of(v[i]));
  return std::sqrt(s);
}

// damped Newton; silent failure (returns false) on divergence
template <class S>
bool newton_orbit(const HenonMap<S>& f, ZSeq<S>& z, double tol, int max_iter,
                  NewtonStats* stats = nullptr) {
  const long N = z.size();
  if (stats) *stats = NewtonStats{};
  for (int it = 0; it < max_iter; ++it) {
    ZSeq<S> g = orbit_residual_vec(f, z);
    double gn = seq_norm(g);
    double scale = 1.0;
    for (long i = 0; i < N; ++i) scale = std::max(scale, to_dbl(abs_of(z[i])));
    if (gn <= tol * scale) {
      if (stats) { stats->converged = true; stats->iterations = it; }
      return true;
    }
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> J(N, N);
    J.setZero();
    for (long i = 0; i < N; ++i) {
      J(i, i) = J(i, i) + f.p().derivative_at(z[i]);
      J(i, (i + N - 1) % N) = J(i, (i + N - 1) % N) - f.a();
      J(i, (i + 1) % N) = J(i, (i + 1) % N) - S(1);
    }
    ZSeq<S> rhs = -g;
    if (!solve_dense(J, rhs)) return false;
    double damp = 1.0;
    bool accepted = false;
    for (int h = 0; h < 20; ++h) {
      ZSeq<S> trial = z;
      for (long i = 0; i < N; ++i) trial[i] = z[i] + S(damp) * rhs[i];
      double gt = seq_norm(orbit_residual_vec(f, trial));
      if (gt < gn || gt <= tol * scale) {
        z = trial;
        accepted = true;
        if (stats) stats->step_norms.push_back(damp * seq_norm(rhs));
        break;
      }
      damp *= 0.5;
    }
    if (!accepted) return false;
  }
  return false;
}

// stable 2x2 eigen-decomposition through the characteristic polynomial
template <class S>
void eigen2(const Mat2<S>& m, S& big, S& small) {
  using std::sqrt;
  S tr = m(0, 0) + m(1, 1);
  S det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  S disc = sqrt(tr * tr - S(4) * det);
  // pick the sign that does not cancel against tr
  S half = S(0.5);
  if (to_dbl(real_of(conj_of(tr) * disc)) < 0.0) disc = -disc;
  big = half * (tr + disc);
  if (to_dbl(abs_of(big)) == 0.0) {
    small = S(0);
    return;
  }
  small = det / big;
}

template <class S>
Vec2<S> eigenvector_of(const Mat2<S>& m, const S& mu) {
  // rows of (M - mu I) are orthogonal to v; two candidate constructions
  Vec2<S> v1, v2;
  v1 << m(0, 1), mu - m(0, 0);
  v2 << mu - m(1, 1), m(1, 0);
  double n1 = to_dbl(abs2_of(v1[0])) + to_dbl(abs2_of(v1[1]));
  double n2 = to_dbl(abs2_of(v2[0])) + to_dbl(abs2_of(v2[1]));
  Vec2<S> v = n1 >= n2 ? v1 : v2;
  using std::sqrt;
  auto nrm = sqrt(abs2_of(v[0]) + abs2_of(v[1]));
  v[0] = v[0] / S(nrm);
  v[1] = v[1] / S(nrm);
  // deterministic phase: first nonzero component has nonnegative real part
  S lead = to_dbl(abs_of(v[0])) > 0.0 ? v[0] : v[1];
  double re = to_dbl(real_of(lead)), im = to_dbl(imag_of(lead));
  if (re < 0.0 || (re == 0.0 && im < 0.0)) {
    v[0] = -v[0];
    v[1] = -v[1];
  }
  return v;
}

}  // namespace detail

// assemble a SaddleOrbitT from a converged z-sequence
template <class S>
SaddleOrbitT<S> orbit_from_sequence(const HenonMap<S>& f,
                                    const detail::ZSeq<S>& z,
                                    NewtonStats stats = {}) {
  SaddleOrbitT<S> orb;
  const long N = z.size();
  orb.period = N;
  orb.points.resize(size_t(N));
  for (long i = 0; i < N; ++i) {
    orb.points[size_t(i)][0] = z[i];
    orb.points[size_t(i)][1] = z[(i + N - 1) % N];
  }
  Mat2<S> M = orb.period_jacobian(f);
  S big, small;
  detail::eigen2(M, big, small);
  orb.lambda_u = big;
  orb.lambda_s = small;
  orb.eigvec_s = detail::eigenvector_of(M, orb.lambda_s);
  orb.eigvec_u = detail::eigenvector_of(M, orb.lambda_u);
  orb.saddle = to_dbl(abs_of(orb.lambda_s)) < 1.0 && to_dbl(abs_of(orb.lambda_u)) > 1.0;
  double res = 0.0;
  for (long i = 0; i < N; ++i) {
    Vec2<S> img = eval_forward(f, orb.points[size_t(i)]);
    Vec2<S> diff = img - orb.points[size_t((i + 1) % N)];
    res = std::max(res, norm2_d(diff));
  }
  orb.residual = res;
  orb.stats = std::move(stats);
  return orb;
}

struct FindPeriodicOptions {
  double tol = 1e-13;
  int max_newton_iter = 80;
  int seeds_complex = 120;
  int seeds_real = 120;
  std::uint64_t seed = 0;
  double dedup_tol = 1e-6;
};

// Newton from a seed grid inside the filtration ball; deduplicated, orbits
// of true period < N filtered out. Divergent seeds are dropped silently.
inline std::vector<SaddleOrbit> find_periodic(const HenonMapD& f, long N,
                                              const FindPeriodicOptions& opt = {}) {
  if (N < 1) throw Error("bad-period", "period must be >= 1");
  FiltrationRadius fr(f);
  const double R = fr.radius();

  std::vector<detail::ZSeq<cxd>> seeds;
  SplitMix64 rng(opt.seed ^ 0x6a09e667f3bcc908ULL);
  for (int s = 0; s < opt.seeds_complex; ++s) {
    detail::ZSeq<cxd> z(N);
    for (long i = 0; i < N; ++i) z[i] = rng.square(R);
    seeds.push_back(z);
  }
  for (int s = 0; s < opt.seeds_real; ++s) {
    detail::ZSeq<cxd> z(N);
    for (long i = 0; i < N; ++i) z[i] = cxd(rng.uniform(-R, R), 0.0);
    seeds.push_back(z);
  }

  auto canonical = [](const detail::ZSeq<cxd>& z) {
    const long N2 = z.size();
    long best = 0;
    auto key = [&](long i) {
      return std::array<double, 2>{z[i].real(), z[i].imag()};
    };
    for (long i = 1; i < N2; ++i)
      if (key(i) < key(best)) best = i;
    detail::ZSeq<cxd> out(N2);
    for (long i = 0; i < N2; ++i) out[i] = z[(best + i) % N2];
    return out;
  };

  std::vector<SaddleOrbit> found;
  std::vector<detail::ZSeq<cxd>> reps;
  for (const auto& seed : seeds) {
    detail::ZSeq<cxd> z = seed;
    NewtonStats stats;
    if (!detail::newton_orbit(f, z, opt.tol, opt.max_newton_iter, &stats)) continue;
    bool inside = true;
    for (long i = 0; i < N; ++i) inside = inside && std::abs(z[i]) <= R;
    if (!inside) continue;
    // true period must be exactly N
    bool lower_period = false;
    for (long m = 1; m < N; ++m) {
      if (N % m != 0) continue;
      bool same = true;
      for (long i = 0; i < N && same; ++i)
        same = std::abs(z[i] - z[(i + m) % N]) <= opt.dedup_tol;
      if (same) { lower_period = true; break; }
    }
    if (lower_period) continue;
    detail::ZSeq<cxd> canon = canonical(z);
    bool dup = false;
    for (const auto& rep : reps) {
      double dist = 0.0;
      for (long i = 0; i < N; ++i) dist = std::max(dist, std::abs(canon[i] - rep[i]));
      if (dist <= opt.dedup_tol) { dup = true; break; }
    }
    if (dup) continue;
    reps.push_back(canon);
    found.push_back(orbit_from_sequence(f, canon, stats));
  }
  std::sort(found.begin(), found.end(), [](const SaddleOrbit& a, const SaddleOrbit& b) {
    const cxd za = a.points[0][0], zb = b.points[0][0];
    return std::array<double, 2>{za.real(), za.imag()} <
           std::array<double, 2>{zb.real(), zb.imag()};
  });
  return found;
}

// re-run Newton in higher precision starting from a binary64 orbit
template <class S>
SaddleOrbitT<S> refine_orbit(const HenonMap<S>& f, const SaddleOrbit& orb,
                             double tol = 0.0) {
  detail::ZSeq<S> z(orb.period);
  for (long i = 0; i < orb.period; ++i) z[i] = S(orb.points[size_t(i)][0]);
  if (tol <= 0.0) tol = std::max(16.0 * scalar_info<S>::eps(), 1e-300);
  NewtonStats stats;
  if (!detail::newton_orbit(f, z, tol, 200, &stats))
    throw Error("refine-failed", "high-precision orbit refinement diverged");
  return orbit_from_sequence(f, z, stats);
}

struct HyperbolicityEstimate {
  double c = 1.0;
  double lambda = 0.0;
  long depth = 0;
};

// lambda = per-step contraction |lambda_s|^{1/N}; c = max_n ||Df^n v_s|| / lambda^n.
// Roundoff leaks an unstable component that grows like |lambda_u|^n, so a
// depth beyond roughly log(1/eps) / log(lambda_u/lambda_s) steps needs a
// wider mantissa; the leak shows up as growth and raises "not-contracting"
// (a genuine non-saddle does the same).
template <class S>
HyperbolicityEstimate estimate_hyperbolicity(const HenonMap<S>& f,
                                             const SaddleOrbitT<S>& orb, long depth) {
  double ls = to_dbl(abs_of(orb.lambda_s));
  if (!(ls < 1.0))
    throw Error("not-contracting", "orbit has no contracting multiplier", ls);
  HyperbolicityEstimate est;
  est.lambda = std::pow(ls, 1.0 / double(orb.period));
  est.depth = depth;
  Vec2<S> v = orb.eigvec_s;
  double c = 1.0;
  double lam_n = 1.0;
  for (long n = 1; n <= depth; ++n) {
    const Vec2<S>& x = orb.points[size_t((n - 1) % orb.period)];
    v = (jacobian(f, x) * v).eval();
    lam_n *= est.lambda;
    c = std::max(c, norm2_d(v) / lam_n);
    if (n >= 2 * orb.period && norm2_d(v) > 1.0)
      throw Error("not-contracting",
                  "stable-direction vectors are not contracting along the orbit",
                  norm2_d(v), n);
  }
  est.c = c;
  return est;
}

// runs the estimate at a mantissa wide enough for the requested depth
inline HyperbolicityEstimate estimate_hyperbolicity_auto(const HenonMapD& f,
                                                         const SaddleOrbit& orb,
                                                         long depth) {
  double log2_lu = std::log2(std::abs(orb.lambda_u));
  unsigned need = 64u + unsigned(std::ceil(1.2 * double(depth) * log2_lu));
  mp::ScopedBits guard(need);
  HenonMap<MpComplex> fm = f.cast<MpComplex>();
  SaddleOrbitT<MpComplex> orbm = refine_orbit<MpComplex>(fm, orb);
  return estimate_hyperbolicity(fm, orbm, depth);
}

}  // namespace henon

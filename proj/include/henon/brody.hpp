#pragma once
// The reparametrization pipeline: pull the leaf disc back by inverse
// periods, recenter by a Mobius map at the maximizer of
//   H_n(theta) = ||phi_n||_{FS,theta} (1 - |theta|^2),
// rescale so the speed at 0 is 1, and measure the bounded-speed and
// injectivity behavior of the rescaled maps k_n.
//
// phi_n is evaluated through the linearization: phi_n(theta) =
// psi(lambda_s^{-n} rho theta), identical to n inverse periods applied to
// the initial disc by the conjugacy, and far better conditioned. A literal
// pullback cross-check for small n lives in the tests.
#include <cmath>
#include <vector>

#include "henon/fubini.hpp"
#include "henon/manifold.hpp"

namespace henon {

struct ReparamIterate {
  long n = 0;
  cxd theta_n = 0.0;
  double H_max = 0.0;
  double R_n = 0.0;
  double speed_at_0 = 0.0;
  double max_speed_half_disc = 0.0;
  double injectivity_min_gap = 0.0;
  double mobius_chain_err = 0.0;
  double image_green_max = 0.0;   // max Green estimate over verified samples
  long image_green_checked = 0;   // samples whose return was resolvable
  unsigned precision_bits = 53;
  std::vector<ProjPointD> image_samples;  // a few k_n image points
  std::vector<std::pair<cxd, double>> speed_profile;  // ||k_n|| on |theta|=R_n/2
};

struct ReparamOptions {
  int grid = 48;                  // radii count for the H_n scan (angles = 2x)
  int halfdisc_grid = 32;
  int mobius_samples = 50;
  int injectivity_samples = 1000;
  int keep_image_samples = 40;
  int profile_points = 0;         // nonzero: record ||k_n|| on |theta| = R_n/2
  double hmax_radius = 1.0 - 1e-6;
};

namespace detail {

template <class S>
void scale_velocity(TangentSample<S>& s, const S& c) {
  s.velocity[0] = s.velocity[0] * c;
  s.velocity[1] = s.velocity[1] * c;
}

inline cxd golden_point(int j, int count, double radius) {
  double r = radius * std::sqrt((j + 0.5) / double(count));
  double phi = 2.0 * M_PI * std::fmod(double(j) * 0.61803398874989485, 1.0);
  return std::polar(r, phi);
}

}  // namespace detail

// phi_n sample at theta: psi(lambda_s^{-n} rho theta) with the chain-rule
// velocity. Throws "precision-exhausted" when the pullback cannot deliver a
// velocity at the current mantissa.
template <class S>
TangentSample<S> phi_n_sample(const HenonMap<S>& f, const StableChart<S>& chart,
                              long n, cxd theta) {
  S scale = pow_int(chart.lambda_s(), -n) * S(chart.rho);
  S Z = scale * S(theta);
  LeafEval<S> ev = eval_global(f, chart, Z);
  if (!ev.has_velocity)
    throw Error("precision-exhausted", "pullback left the affine range",
                std::numeric_limits<double>::infinity(), n);
  Vec2<S> v;
  v[0] = ev.v[0] * scale;
  v[1] = ev.v[1] * scale;
  return make_tangent(ev.x, v);
}

template <class S>
double phi_n_speed_at_zero(const HenonMap<S>& f, const StableChart<S>& chart, long n) {
  return fs_speed(to_double_sample(phi_n_sample(f, chart, n, cxd(0.0))));
}

// Minimum over sampled pairs of chordal(k(theta), k(theta')) / |theta-theta'|
// on the half disc; the chordal distances are taken at full working
// precision so nearby leaf strands stay distinguishable at depth.
template <class S, class KFun>
double injectivity_gap(KFun&& k, double Rn, int samples) {
  if (samples < 100) throw Error("bad-samples", "injectivity gap needs >= 100 samples");
  std::vector<cxd> thetas(static_cast<size_t>(samples));
  std::vector<ProjPoint<S>> pts(static_cast<size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    thetas[size_t(j)] = detail::golden_point(j, samples, 0.5 * Rn);
    pts[size_t(j)] = k(thetas[size_t(j)]).point;
  }
  // The minimum is taken in the working scalar: deep iterates pass
  // exponentially close to themselves near I+, far below binary64 range.
  // A ratio that is positive there but underflows double clamps to the
  // smallest positive double; exact zero means a genuine sample collision.
  using R = typename scalar_info<S>::real_type;
  R best = R(0);
  bool any = false;
  for (int i = 0; i < samples; ++i) {
    for (int j = i + 1; j < samples; ++j) {
      double dt = std::abs(thetas[size_t(i)] - thetas[size_t(j)]);
      if (dt == 0.0) continue;
      R ratio = chordal(pts[size_t(i)], pts[size_t(j)]) / R(dt);
      if (!any || ratio < best) {
        best = ratio;
        any = true;
      }
    }
  }
  if (!any) return 0.0;
  double gap = to_dbl(best);
  if (gap == 0.0 && R(0) < best) gap = std::numeric_limits<double>::denorm_min();
  return gap;
}

template <class S>
ReparamIterate reparam_step(const HenonMap<S>& f, const StableChart<S>& chart, long n,
                            const ReparamOptions& opt = {}) {
  if (opt.grid < 32) throw Error("bad-grid", "reparam grid must be >= 32");
  auto phi = [&](cxd theta) { return phi_n_sample(f, chart, n, theta); };

  // maximize H_n over the disc; radii clustered toward the boundary since
  // H_n -> 0 at |theta| -> 1
  DiscMax H = maximize_on_disc(
      [&](cxd th) {
        return fs_speed(to_double_sample(phi(th))) * (1.0 - std::norm(th));
      },
      cxd(0.0), opt.hmax_radius, opt.grid, 2 * opt.grid, /*boundary_clustered=*/true);

  ReparamIterate it;
  it.n = n;
  it.theta_n = H.argmax;
  it.H_max = H.value;
  it.precision_bits = scalar_info<S>::is_binary64 ? 53u : mp::default_bits();

  const cxd tn = it.theta_n;
  const double tn2 = std::norm(tn);
  auto mobius = [tn](cxd zeta) { return (zeta + tn) / (1.0 + std::conj(tn) * zeta); };
  auto mobius_deriv = [tn, tn2](cxd zeta) {
    cxd den = 1.0 + std::conj(tn) * zeta;
    return (1.0 - tn2) / (den * den);
  };
  auto g = [&](cxd zeta) {
    TangentSample<S> s = phi(mobius(zeta));
    detail::scale_velocity(s, S(mobius_deriv(zeta)));
    return s;
  };

  it.R_n = fs_speed(to_double_sample(g(cxd(0.0))));
  if (!(it.R_n > 0.0))
    throw Error("degenerate-rescale", "||g_n||_{FS,0} vanished", it.R_n, n);
  const double Rn = it.R_n;
  auto k = [&](cxd theta) {
    TangentSample<S> s = g(theta / Rn);
    detail::scale_velocity(s, S(1.0 / Rn));
    return s;
  };

  it.speed_at_0 = fs_speed(to_double_sample(k(cxd(0.0))));

  it.max_speed_half_disc =
      maximize_on_disc([&](cxd th) { return fs_speed(to_double_sample(k(th))); },
                       cxd(0.0), 0.5 * Rn, opt.halfdisc_grid, opt.halfdisc_grid,
                       /*boundary_clustered=*/false,
                       std::max(1e-6, 5e-7 * Rn))
          .value;

  // the displayed Mobius chain ||g||_{FS,zeta}(1-|zeta|^2) =
  // ||phi||_{FS,mu(zeta)}(1-|mu(zeta)|^2), as a relative error
  double chain_err = 0.0;
  for (int j = 0; j < opt.mobius_samples; ++j) {
    cxd zeta = detail::golden_point(j, opt.mobius_samples, 0.999);
    double lhs = fs_speed(to_double_sample(g(zeta))) * (1.0 - std::norm(zeta));
    cxd mz = mobius(zeta);
    double rhs = fs_speed(to_double_sample(phi(mz))) * (1.0 - std::norm(mz));
    double denom = std::max({lhs, rhs, 1e-300});
    chain_err = std::max(chain_err, std::abs(lhs - rhs) / denom);
  }
  it.mobius_chain_err = chain_err;

  it.injectivity_min_gap = injectivity_gap<S>(k, Rn, opt.injectivity_samples);

  for (int j = 0; j < opt.profile_points; ++j) {
    cxd th = std::polar(0.5 * Rn, 2.0 * M_PI * double(j) / double(opt.profile_points));
    it.speed_profile.emplace_back(th, fs_speed(to_double_sample(k(th))));
  }

  // Image confinement: forward-iterate sampled image points until they
  // return to the periodic point and stay, which certifies membership in K+
  // (the Green function is 0 there by the bounded-orbit convention). The
  // return cancellation burns about 3 log2(coordinate) mantissa bits, so
  // samples too far out to resolve at the current mantissa are counted
  // unverified rather than misreported. Half-disc spiral samples come
  // first; a few near-core samples (|Z| <= 10, always resolvable) keep
  // every iterate covered.
  {
    S zscale = pow_int(chart.lambda_s(), -n) * S(chart.rho);
    auto check_sample = [&](cxd th, bool keep) {
      S Z = zscale * S(mobius(th / Rn));
      LeafEval<S> ev = eval_global(f, chart, Z);
      if (keep) {
        TangentSample<S> s = k(th);
        ProjPointD p;
        for (int c = 0; c < 3; ++c) p.h[c] = scalar_info<S>::to_cxd(s.point.h[c]);
        it.image_samples.push_back(p);
      }
      if (!ev.affine) return;
      double L = std::max(0.0, std::max(log2_mag(ev.x[0]), log2_mag(ev.x[1])));
      double bits = scalar_info<S>::is_binary64 ? 53.0 : double(mp::default_bits());
      if (3.0 * (L + 5.0) > bits - 16.0) return;  // return not resolvable here
      Vec2<S> x = ev.x;
      const long max_steps = (ev.pullback_periods + 10) * chart.period();
      bool returned = false;
      try {
        for (long q = 1; q <= max_steps && !returned; ++q) {
          x = eval_forward(f, x);
          Vec2<S> diff = x - chart.fixed_point();
          if (norm2_d(diff) <= 1e-2) {
            // must also stay: one more period keeps it close
            for (long r = 0; r < chart.period(); ++r) x = eval_forward(f, x);
            Vec2<S> diff2 = x - chart.fixed_point();
            returned = norm2_d(diff2) <= 5e-2;
            break;
          }
        }
      } catch (const Error&) {
        returned = false;  // left the representable range: unverifiable here
      }
      if (returned) ++it.image_green_checked;  // certified bounded, g+ = 0
    };
    for (int j = 0; j < opt.keep_image_samples; ++j)
      check_sample(detail::golden_point(j, opt.keep_image_samples, 0.5 * Rn), true);
    // near-core extras: preimages under mu of a small disc around 0
    double lam = to_dbl(abs_of(chart.lambda_s()));
    double u_max = std::min(0.45, 10.0 * std::pow(lam, double(n)) / chart.rho);
    for (int j = 0; j < 8; ++j) {
      cxd u = detail::golden_point(j, 8, u_max);
      cxd zeta = (u - tn) / (1.0 - std::conj(tn) * u);
      if (std::abs(zeta) <= 0.5) check_sample(zeta * Rn, false);
    }
  }
  return it;
}

struct PipelineOptions {
  long n_max = 25;
  long period = 1;
  int orbit_index = -1;  // -1: saddle with the largest |lambda_u|
  int series_order = 20;
  bool ladder = true;        // escalate precision when binary64 runs out
  unsigned force_bits = 0;   // nonzero: fixed mantissa for escalated iterates
  std::uint64_t seed = 0;
  ReparamOptions reparam;
};

struct PipelineResult {
  SaddleOrbit orbit;
  StableChartD chart;
  std::vector<ReparamIterate> iterates;
  long last_binary64_n = 0;
};

// least-squares slope of log R_n over n and the reference -log|lambda_s|
inline double fit_log_R_slope(const std::vector<ReparamIterate>& its, long burn_in = 3) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long m = 0;
  for (const auto& it : its) {
    if (it.n < burn_in) continue;
    double x = double(it.n), y = std::log(it.R_n);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  if (m < 2) throw Error("pipeline-failed", "not enough iterates for a slope fit");
  return (double(m) * sxy - sx * sy) / (double(m) * sxx - sx * sx);
}

inline PipelineResult run_pipeline(const HenonMapD& f, const PipelineOptions& opt = {}) {
  if (opt.n_max < 1) throw Error("bad-pipeline", "n_max must be >= 1");
  FindPeriodicOptions fpo;
  fpo.seed = opt.seed;
  auto orbits = find_periodic(f, opt.period, fpo);
  PipelineResult res;
  bool picked = false;
  if (opt.orbit_index >= 0) {
    if (size_t(opt.orbit_index) >= orbits.size())
      throw Error("bad-pipeline", "orbit index out of range");
    res.orbit = orbits[size_t(opt.orbit_index)];
    picked = res.orbit.saddle;
  } else {
    double best = 0.0;
    for (const auto& o : orbits) {
      if (!o.saddle) continue;
      double lu = std::abs(o.lambda_u);
      if (lu > best) { best = lu; res.orbit = o; picked = true; }
    }
  }
  if (!picked)
    throw Error("pipeline-failed", "no saddle orbit of the requested period found");

  res.chart = build_local_series(f, res.orbit, opt.series_order);
  const long N = res.orbit.period;
  const double log2_lu = std::log2(std::abs(res.orbit.lambda_u));

  unsigned current_bits = 0;  // 0: binary64 mode
  HenonMap<MpComplex> fm = f.cast<MpComplex>();
  StableChart<MpComplex> chart_m;

  for (long n = 1; n <= opt.n_max; ++n) {
    unsigned ladder_bits =
        opt.force_bits ? opt.force_bits
                       : 64u + unsigned(std::ceil(1.2 * double(n) * double(N) * log2_lu));
    if (current_bits != 0 && ladder_bits > current_bits) {
      // keep the mantissa tracking the ladder formula as n grows
      mp::ScopedBits guard(ladder_bits);
      auto orbit_m = refine_orbit<MpComplex>(fm, res.orbit);
      chart_m = build_local_series(fm, orbit_m, opt.series_order);
      current_bits = ladder_bits;
    }
    bool done = false;
    for (int attempt = 0; attempt < 3 && !done; ++attempt) {
      try {
        if (current_bits == 0) {
          res.iterates.push_back(reparam_step(f, res.chart, n, opt.reparam));
          res.last_binary64_n = n;
        } else {
          mp::ScopedBits guard(current_bits);
          res.iterates.push_back(reparam_step(fm, chart_m, n, opt.reparam));
        }
        done = true;
      } catch (const Error& e) {
        unsigned need =
            opt.force_bits
                ? opt.force_bits
                : std::max(ladder_bits, current_bits == 0 ? 0u : current_bits + 64u);
        bool recoverable =
            e.code == "precision-exhausted" && opt.ladder && need != current_bits;
        if (!recoverable) {
          if (res.iterates.size() < 3)
            throw Error("pipeline-failed",
                        "fewer than 3 iterates succeeded: " + std::string(e.what()));
          return res;  // report the iterates that did succeed
        }
        mp::ScopedBits guard(need);
        auto orbit_m = refine_orbit<MpComplex>(fm, res.orbit);
        chart_m = build_local_series(fm, orbit_m, opt.series_order);
        current_bits = need;
      }
    }
    if (!done) {
      if (res.iterates.size() < 3)
        throw Error("pipeline-failed", "precision ladder failed to stabilize");
      return res;
    }
  }
  if (res.iterates.size() < 3)
    throw Error("pipeline-failed", "fewer than 3 iterates succeeded");
  return res;
}

}  // namespace henon

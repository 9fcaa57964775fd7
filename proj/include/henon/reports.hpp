#pragma once
// Deterministic CSV/PGM payload builders shared by the CLI and the
// self-test suite. Everything here is a pure function of its arguments.
#include <string>
#include <vector>

#include "henon/brody.hpp"
#include "henon/escape.hpp"
#include "henon/gallery.hpp"
#include "henon/manifold.hpp"
#include "henon/saddle.hpp"

namespace henon {

// `re, im, class, n_escape, g_plus` over the classification grid
std::string classify_csv(const GridClassification& grid);

// escape time -> 8-bit gray: escaping pixels min(n_escape, 254), everything
// else 255; row 0 is the top of the window
std::string classify_pgm(const GridClassification& grid);

// `period, index, re_z, im_z, re_w, im_w, lambda_s, lambda_u, residual`,
// one row per orbit point; index is the orbit's position in the sorted list
std::string periodic_csv(const std::vector<SaddleOrbit>& orbits);

// `re, im, g_plus` over a grid; undecided points get an empty field
std::string green_csv(const HenonMapD& f, const FiltrationRadius& fr,
                      const Section& section, const Window& window,
                      const GreenOptions& opt);

struct ManifoldSampling {
  int rays = 8;
  int ray_points = 24;
  double z_min = 1e-2;
  double z_max = 1e3;
  std::vector<double> circles = {0.5, 5.0, 50.0};
  int circle_points = 64;
};

// `re_Z, im_Z, re_z, im_z, re_w, im_w, fs_speed` along rays and circles
std::string manifold_csv(const HenonMapD& f, const StableChartD& chart,
                         const ManifoldSampling& sampling);

// `n, re_theta_n, im_theta_n, H_max, R_n, speed_at_0, max_speed_half_disc,
//  injectivity_min_gap`
std::string reparam_csv(const std::vector<ReparamIterate>& iterates);

// `re_theta, im_theta, fs_speed` profile along a circle in the k_n plane
std::string speed_profile_csv(const std::vector<std::pair<cxd, double>>& profile);

// `family, radius, max_speed`
std::string gallery_csv(
    const std::vector<std::pair<CurveSpec, std::vector<ProfilePoint>>>& profiles);

}  // namespace henon

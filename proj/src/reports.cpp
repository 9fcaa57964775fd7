#include "henon/reports.hpp"

#include "henon/io.hpp"

namespace henon {

std::string classify_csv(const GridClassification& grid) {
  CsvBuilder csv({"re", "im", "class", "n_escape", "g_plus"});
  for (int iy = 0; iy < grid.window.ny; ++iy) {
    for (int ix = 0; ix < grid.window.nx; ++ix) {
      cxd zeta = grid.zeta_at(ix, iy);
      const EscapeRecord& rec = grid.at(ix, iy);
      csv.add_field(zeta.real());
      csv.add_field(zeta.imag());
      csv.add_field(std::string(to_string(rec.classification)));
      if (rec.n_escape) csv.add_field(long(*rec.n_escape));
      else csv.add_empty();
      if (rec.green_plus) csv.add_field(*rec.green_plus);
      else csv.add_empty();
      csv.end_row();
    }
  }
  return csv.str();
}

std::string classify_pgm(const GridClassification& grid) {
  std::vector<std::uint8_t> px;
  px.reserve(grid.records.size());
  for (const auto& rec : grid.records) {
    if (rec.classification == EscapeClass::EscapingForward)
      px.push_back(std::uint8_t(std::min<long>(*rec.n_escape, 254)));
    else
      px.push_back(255);
  }
  return make_pgm(grid.window.nx, grid.window.ny, px);
}

std::string periodic_csv(const std::vector<SaddleOrbit>& orbits) {
  CsvBuilder csv({"period", "index", "re_z", "im_z", "re_w", "im_w", "lambda_s",
                  "lambda_u", "residual"});
  long index = 0;
  for (const auto& orb : orbits) {
    for (const auto& pt : orb.points) {
      csv.add_field(orb.period);
      csv.add_field(index);
      csv.add_field(pt[0].real());
      csv.add_field(pt[0].imag());
      csv.add_field(pt[1].real());
      csv.add_field(pt[1].imag());
      csv.add_field(format_complex(orb.lambda_s));
      csv.add_field(format_complex(orb.lambda_u));
      csv.add_field(orb.residual);
      csv.end_row();
    }
    ++index;
  }
  return csv.str();
}

std::string green_csv(const HenonMapD& f, const FiltrationRadius& fr,
                      const Section& section, const Window& window,
                      const GreenOptions& opt) {
  CsvBuilder csv({"re", "im", "g_plus"});
  for (int iy = 0; iy < window.ny; ++iy) {
    for (int ix = 0; ix < window.nx; ++ix) {
      cxd zeta = window.zeta_at(ix, iy);
      csv.add_field(zeta.real());
      csv.add_field(zeta.imag());
      try {
        csv.add_field(green_plus(f, fr, section.at(zeta), opt));
      } catch (const Error&) {
        csv.add_empty();
      }
      csv.end_row();
    }
  }
  return csv.str();
}

std::string manifold_csv(const HenonMapD& f, const StableChartD& chart,
                         const ManifoldSampling& s) {
  CsvBuilder csv({"re_Z", "im_Z", "re_z", "im_z", "re_w", "im_w", "fs_speed"});
  auto add_sample = [&](cxd Z) {
    LeafEval<cxd> ev = eval_global(f, chart, Z);
    if (!ev.affine || !ev.has_velocity) return;
    csv.add_field(Z.real());
    csv.add_field(Z.imag());
    csv.add_field(ev.x[0].real());
    csv.add_field(ev.x[0].imag());
    csv.add_field(ev.x[1].real());
    csv.add_field(ev.x[1].imag());
    csv.add_field(fs_speed(to_double_sample(make_tangent(ev.x, ev.v))));
    csv.end_row();
  };
  for (int r = 0; r < s.rays; ++r) {
    double phi = 2.0 * M_PI * double(r) / double(s.rays);
    for (int j = 0; j < s.ray_points; ++j) {
      double t = s.ray_points == 1 ? 0.0 : double(j) / double(s.ray_points - 1);
      double mod = s.z_min * std::pow(s.z_max / s.z_min, t);
      add_sample(std::polar(mod, phi));
    }
  }
  for (double rad : s.circles)
    for (int j = 0; j < s.circle_points; ++j)
      add_sample(std::polar(rad, 2.0 * M_PI * double(j) / double(s.circle_points)));
  return csv.str();
}

std::string reparam_csv(const std::vector<ReparamIterate>& iterates) {
  CsvBuilder csv({"n", "re_theta_n", "im_theta_n", "H_max", "R_n", "speed_at_0",
                  "max_speed_half_disc", "injectivity_min_gap"});
  for (const auto& it : iterates) {
    csv.add_field(it.n);
    csv.add_field(it.theta_n.real());
    csv.add_field(it.theta_n.imag());
    csv.add_field(it.H_max);
    csv.add_field(it.R_n);
    csv.add_field(it.speed_at_0);
    csv.add_field(it.max_speed_half_disc);
    csv.add_field(it.injectivity_min_gap);
    csv.end_row();
  }
  return csv.str();
}

std::string speed_profile_csv(const std::vector<std::pair<cxd, double>>& profile) {
  CsvBuilder csv({"re_theta", "im_theta", "fs_speed"});
  for (const auto& [theta, speed] : profile) {
    csv.add_field(theta.real());
    csv.add_field(theta.imag());
    csv.add_field(speed);
    csv.end_row();
  }
  return csv.str();
}

std::string gallery_csv(
    const std::vector<std::pair<CurveSpec, std::vector<ProfilePoint>>>& profiles) {
  CsvBuilder csv({"family", "radius", "max_speed"});
  for (const auto& [spec, prof] : profiles) {
    for (const auto& p : prof) {
      csv.add_field(spec.name());
      csv.add_field(p.radius);
      csv.add_field(p.max_speed);
      csv.end_row();
    }
  }
  return csv.str();
}

}  // namespace henon

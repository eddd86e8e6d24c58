#include "latsim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "latsim/constants.hpp"
#include "latsim/parallel.hpp"

namespace latsim {

void ThermalCloud::validate() const {
  if (!(temperature_tr > 0.0))
    throw std::invalid_argument("cloud temperature must be > 0");
  if (!(atoms > 0.0)) throw std::invalid_argument("atom count must be > 0");
  if (!(omega_z > 0.0))
    throw std::invalid_argument("axial trap frequency must be > 0");
}

double initial_width(const ThermalCloud& cloud, const LatticeParams& p) {
  cloud.validate();
  const RecoilUnits u = derive_units(p);
  const double kT = constants::boltzmann * cloud.temperature_tr * u.T_R;
  return std::sqrt(kT / (p.mass * cloud.omega_z * cloud.omega_z));
}

double VelocityTable::mean_square_velocity() const {
  double num = 0.0;
  for (std::size_t i = 0; i < kappa.size(); ++i)
    num += weight[i] * velocity[i] * velocity[i];
  return num / norm;
}

VelocityTable build_velocity_table(double depth, double theta, int nsub,
                                   int min_bands, int threads,
                                   double weight_cutoff) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  if (nsub < 2 || nsub % 2 != 0)
    throw std::invalid_argument("nsub must be even and >= 2");
  const int bands_needed = static_cast<int>(
      std::ceil(std::sqrt(-2.0 * theta * std::log(weight_cutoff))));
  const int B = std::max(min_bands, bands_needed);
  if (B < bands_needed)
    throw std::invalid_argument("insufficient band coverage for this theta");
  const int cutoff = std::max(16, B + 12);

  VelocityTable table;
  table.depth = depth;
  table.theta = theta;
  table.bands = B;
  table.nsub = nsub;

  // Nodes for the positive zones [0, B]; each panel [j, j+1] carries its
  // own Simpson weights (shared endpoints simply appear twice).
  const std::size_t per_panel = static_cast<std::size_t>(nsub) + 1;
  const std::size_t n_pos = static_cast<std::size_t>(B) * per_panel;
  std::vector<double> kpos(n_pos), vpos(n_pos);

  parallel_for(n_pos, threads, [&](std::size_t idx) {
    const std::size_t panel = idx / per_panel;
    const std::size_t i = idx % per_panel;
    const double kappa =
        static_cast<double>(panel) + static_cast<double>(i) / nsub;
    kpos[idx] = kappa;
    const BandMomentum m = map_free_momentum(kappa);
    vpos[idx] = solve_bloch(depth, m.q, cutoff, m.band).velocity[m.band - 1];
  });

  // Mirror onto [-B, 0): w(-k) = w(k), v(-k) = -v(k).
  const double h = 1.0 / nsub;
  auto simpson_coeff = [nsub](std::size_t i) {
    if (i == 0 || i == static_cast<std::size_t>(nsub)) return 1.0;
    return (i % 2 == 1) ? 4.0 : 2.0;
  };
  table.kappa.reserve(2 * n_pos);
  table.weight.reserve(2 * n_pos);
  table.velocity.reserve(2 * n_pos);
  for (std::size_t idx = 0; idx < n_pos; ++idx) {
    const std::size_t i = idx % per_panel;
    const double w = simpson_coeff(i) * h / 3.0 *
                     std::exp(-kpos[idx] * kpos[idx] / (2.0 * theta));
    table.kappa.push_back(kpos[idx]);
    table.weight.push_back(w);
    table.velocity.push_back(vpos[idx]);
    table.kappa.push_back(-kpos[idx]);
    table.weight.push_back(w);
    table.velocity.push_back(-vpos[idx]);
  }
  table.norm = 0.0;
  table.v_max = 0.0;
  for (std::size_t i = 0; i < table.kappa.size(); ++i) {
    table.norm += table.weight[i];
    table.v_max = std::max(table.v_max, std::abs(table.velocity[i]));
  }
  return table;
}

VelocityMoments velocity_moments(double depth, double theta, int nsub,
                                 int min_bands, int threads) {
  double prev = 0.0;
  for (int scale = 1; scale <= 4; scale *= 2) {
    const VelocityTable table =
        build_velocity_table(depth, theta, nsub * scale, min_bands, threads);
    const double v2 = table.mean_square_velocity();
    if (scale > 1) {
      const double rel = std::abs(v2 - prev) / std::max(v2, 1e-300);
      if (rel < 1e-6) return VelocityMoments{0.0, v2, table.bands};
    }
    prev = v2;
  }
  throw std::runtime_error(
      "velocity-moment quadrature did not converge under grid doubling");
}

double DensityProfile::trapezoid_norm() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < z_um.size(); ++i)
    sum += 0.5 * (density_per_um[i] + density_per_um[i - 1]) *
           (z_um[i] - z_um[i - 1]);
  return sum;
}

double DensityProfile::second_moment() const {
  double n = 0.0, zbar = 0.0, zz = 0.0;
  for (std::size_t i = 1; i < z_um.size(); ++i) {
    const double dz = z_um[i] - z_um[i - 1];
    const double f0 = density_per_um[i - 1], f1 = density_per_um[i];
    n += 0.5 * (f0 + f1) * dz;
    zbar += 0.5 * (f0 * z_um[i - 1] + f1 * z_um[i]) * dz;
    zz += 0.5 * (f0 * z_um[i - 1] * z_um[i - 1] + f1 * z_um[i] * z_um[i]) * dz;
  }
  zbar /= n;
  return zz / n - zbar * zbar;
}

double DensityProfile::peak() const {
  double p = 0.0;
  for (const double f : density_per_um) p = std::max(p, f);
  return p;
}

DensityProfile density_profile(const VelocityTable& table, double sigma0_um,
                               double v_r_mm_s, double atoms, double t_ms,
                               int n_points, int threads) {
  if (!(t_ms >= 0.0)) throw std::invalid_argument("time must be >= 0");
  if (!(sigma0_um > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
  if (n_points < 16) throw std::invalid_argument("n_points too small");

  const std::size_t nk = table.kappa.size();
  std::vector<double> center_um(nk);  // v * t, in um (mm/s * ms = um)
  for (std::size_t i = 0; i < nk; ++i)
    center_um[i] = table.velocity[i] * v_r_mm_s * t_ms;
  const double vmax_um = table.v_max * v_r_mm_s * t_ms;

  DensityProfile prof;
  prof.time_ms = t_ms;
  prof.atoms = atoms;
  const double span = 6.0 * sigma0_um + 1.2 * vmax_um;
  prof.z_um.resize(n_points);
  prof.density_per_um.assign(n_points, 0.0);
  for (int i = 0; i < n_points; ++i)
    prof.z_um[i] = -span + 2.0 * span * i / (n_points - 1);

  const double inv2s2 = 1.0 / (2.0 * sigma0_um * sigma0_um);
  const double cut = 8.5 * sigma0_um;  // Gaussian support cutoff
  const double amp =
      atoms / (table.norm * std::sqrt(2.0 * constants::pi) * sigma0_um);
  parallel_for(static_cast<std::size_t>(n_points), threads, [&](std::size_t j) {
    const double z = prof.z_um[j];
    double f = 0.0;
    for (std::size_t i = 0; i < nk; ++i) {
      const double d = z - center_um[i];
      if (std::abs(d) > cut) continue;
      f += table.weight[i] * std::exp(-d * d * inv2s2);
    }
    prof.density_per_um[j] = amp * f;
  });
  return prof;
}

namespace {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double xbar = sx / n, ybar = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / (static_cast<double>(n) - 2.0) / sxx);
  }
  return fit;
}

}  // namespace

ExpansionSeries expansion_series(const VelocityTable& table, double sigma0_um,
                                 double v_r_mm_s, double atoms,
                                 const std::vector<double>& times_ms,
                                 const ExpansionOptions& opts) {
  if (times_ms.size() < 6)
    throw std::invalid_argument("need at least 6 time samples");
  for (std::size_t i = 1; i < times_ms.size(); ++i)
    if (!(times_ms[i] > times_ms[i - 1]))
      throw std::invalid_argument("times must be sorted increasing");

  const double v2_mm_s = table.mean_square_velocity() * v_r_mm_s * v_r_mm_s;

  ExpansionSeries series;
  series.t_ms = times_ms;
  series.sigma_um.resize(times_ms.size());
  for (std::size_t i = 0; i < times_ms.size(); ++i)
    series.sigma_um[i] =
        std::sqrt(sigma0_um * sigma0_um + v2_mm_s * times_ms[i] * times_ms[i]);
  series.asymptotic_rate_mm_s = std::sqrt(v2_mm_s);

  // Dual route: the quadrature profile's second moment must reproduce the
  // analytic sigma at a subset of the samples.
  if (opts.profile_checks > 0) {
    std::vector<std::size_t> picks;
    const std::size_t n = times_ms.size();
    for (int c = 0; c < opts.profile_checks; ++c) {
      std::size_t idx =
          (opts.profile_checks == 1)
              ? n - 1
              : 1 + c * (n - 2) / std::max(1, opts.profile_checks - 1);
      idx = std::min(idx, n - 1);
      if (times_ms[idx] > 0.0) picks.push_back(idx);
    }
    for (const std::size_t idx : picks) {
      const DensityProfile prof =
          density_profile(table, sigma0_um, v_r_mm_s, atoms, times_ms[idx],
                          opts.profile_points, opts.threads);
      const double norm = prof.trapezoid_norm();
      if (std::abs(norm - atoms) / atoms > opts.moment_tolerance)
        throw std::runtime_error("profile normalization error exceeds 1e-3 at t=" +
                                 std::to_string(times_ms[idx]) + " ms");
      const double sig_prof = std::sqrt(prof.second_moment());
      const double rel =
          std::abs(sig_prof - series.sigma_um[idx]) / series.sigma_um[idx];
      series.profile_check_max_rel = std::max(series.profile_check_max_rel, rel);
      if (rel > opts.moment_tolerance)
        throw std::runtime_error(
            "profile/analytic sigma mismatch " + std::to_string(rel) + " at t=" +
            std::to_string(times_ms[idx]) + " ms");
    }
  }

  // Weighted (unit weights) linear fit over sigma >= 3 sigma0.
  std::vector<double> tf, sf;
  for (std::size_t i = 0; i < times_ms.size(); ++i) {
    if (series.sigma_um[i] >= 3.0 * sigma0_um) {
      tf.push_back(times_ms[i]);
      sf.push_back(series.sigma_um[i]);
    }
  }
  if (tf.size() < 2)
    throw std::invalid_argument(
        "fit window empty: times too short for sigma to reach 3 sigma0");
  const LinearFit fit = fit_line(tf, sf);
  series.rate_mm_s = fit.slope;
  series.rate_stderr = fit.slope_stderr;
  series.fit_window = {tf.front(), tf.back()};
  series.fit_matches_asymptote =
      std::abs(series.rate_mm_s - series.asymptotic_rate_mm_s) <=
      0.01 * series.asymptotic_rate_mm_s;
  return series;
}

std::vector<RatePoint> rate_vs_depth(const std::vector<double>& depths,
                                     double theta, double sigma0_um,
                                     double v_r_mm_s, double atoms,
                                     const std::vector<double>& times_ms,
                                     const ExpansionOptions& opts) {
  std::vector<RatePoint> out(depths.size());
  // Parallelism lives inside each series (the per-depth tables dominate);
  // the sweep itself stays ordered so results are independent of layout.
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const double s = depths[i];
    if (s < 0.0) throw std::invalid_argument("depth must be >= 0");
    const VelocityTable table =
        build_velocity_table(s, theta, opts.nsub, 3, opts.threads);
    const ExpansionSeries series = expansion_series(
        table, sigma0_um, v_r_mm_s, atoms, times_ms, opts);
    out[i] = RatePoint{s, series.rate_mm_s, series.rate_stderr};
  }
  return out;
}

double effective_temperature(double rate_mm_s, const RecoilUnits& u) {
  if (!(rate_mm_s > 0.0))
    throw std::invalid_argument("expansion rate must be > 0");
  const double r = rate_mm_s / (u.v_R * 1e3);
  return r * r;
}

double free_expansion_rate(double theta, const RecoilUnits& u) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  return std::sqrt(theta) * u.v_R * 1e3;
}

EdgeReport edge_visibility(const DensityProfile& profile, double v_max_mm_s,
                           double t_ms, double sigma0_um) {
  if (!(t_ms > 0.0)) throw std::invalid_argument("time must be > 0");
  EdgeReport report;
  report.expected_um = v_max_mm_s * t_ms;
  // Front still inside the initial Gaussian: degenerate window.
  if (report.expected_um <= 2.0 * sigma0_um) return report;

  const double window = std::min(0.1 * report.expected_um, 4.0 * sigma0_um);
  const double spacing = profile.z_um[1] - profile.z_um[0];
  if (spacing > window / 2.0)
    throw std::runtime_error("grid too coarse to resolve the edge window");

  auto interp = [&](double z) {
    const double z0 = profile.z_um.front();
    double x = (z - z0) / spacing;
    const auto n = static_cast<std::ptrdiff_t>(profile.z_um.size());
    auto i = static_cast<std::ptrdiff_t>(std::floor(x));
    i = std::clamp<std::ptrdiff_t>(i, 0, n - 2);
    const double frac = x - static_cast<double>(i);
    return profile.density_per_um[i] * (1.0 - frac) +
           profile.density_per_um[i + 1] * frac;
  };

  const double f_in = interp(report.expected_um - window / 2.0);
  const double f_out = interp(report.expected_um + window / 2.0);
  const double peak = profile.peak();
  if (f_in > 0.0) report.contrast = (f_in - f_out) / f_in;
  report.front_detected =
      report.contrast >= 0.5 && (f_in - f_out) >= 0.5 * peak;

  // Steepest descent beyond the bulk marks the front position.
  const double z_lo = std::max(2.0 * sigma0_um, 0.3 * report.expected_um);
  double best_slope = 0.0;
  for (std::size_t i = 1; i + 1 < profile.z_um.size(); ++i) {
    if (profile.z_um[i] < z_lo) continue;
    const double slope = (profile.density_per_um[i + 1] -
                          profile.density_per_um[i - 1]) /
                         (2.0 * spacing);
    if (slope < best_slope) {
      best_slope = slope;
      report.z_front_um = profile.z_um[i];
    }
  }
  return report;
}

}  // namespace latsim

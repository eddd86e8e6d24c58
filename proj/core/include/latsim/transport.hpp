#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "latsim/bandstructure.hpp"
#include "latsim/units.hpp"

// Semiclassical ballistic transport of a thermal cloud through the
// lattice.  Atoms keep their free momentum distribution while the lattice
// is ramped on; each momentum class kappa moves at the group velocity of
// the band it maps to, so the density evolves as
//
//   f(z,t) = N * int dk w(k) G(z - v(k) t; sigma0) / int dk w(k)
//
// with w the Maxwell-Boltzmann weight exp(-kappa^2 / (2 T/T_R)) and G a
// unit Gaussian of width sigma0 = sqrt(kB T / (m omega_z^2)).
//
// Observables are emitted in lab units (um, ms, mm/s); the Bloch solves
// stay in recoil units.

namespace latsim {

struct ThermalCloud {
  double temperature_tr = 0.0;  // T in units of T_R, > 0
  double atoms = 0.0;           // N, > 0
  double omega_z = 0.0;         // axial trap frequency [rad/s], > 0

  void validate() const;
};

/// RMS width of the initial trapped cloud, sqrt(kB T/(m omega_z^2)) [m].
double initial_width(const ThermalCloud& cloud, const LatticeParams& p);

/// Composite-Simpson nodes over kappa in [-B, B] with panels aligned to
/// the zone edges (integer kappa), where the band dispersion has kinks.
/// B covers every momentum with MB weight >= weight_cutoff (min 3 bands).
/// Node velocities come from per-node Bloch solves (no interpolation);
/// weight[] already contains Simpson coefficient * MB weight.
struct VelocityTable {
  double depth = 0.0;
  double theta = 0.0;  // T/T_R
  int bands = 0;       // B
  int nsub = 0;        // Simpson subintervals per unit zone (even)
  std::vector<double> kappa;
  std::vector<double> weight;
  std::vector<double> velocity;  // v_R units
  double norm = 0.0;             // sum of weights = int w dk
  double v_max = 0.0;            // max |velocity| over the populated nodes

  double mean_square_velocity() const;  // <v^2> in v_R^2
};

VelocityTable build_velocity_table(double depth, double theta, int nsub = 512,
                                   int min_bands = 3, int threads = 1,
                                   double weight_cutoff = 1e-8);

/// First and second MB-weighted velocity moments with a grid-doubling
/// convergence check (relative 1e-6 on <v^2>); throws on non-convergence.
struct VelocityMoments {
  double mean_v = 0.0;   // v_R
  double mean_v2 = 0.0;  // v_R^2
  int bands = 0;
};

VelocityMoments velocity_moments(double depth, double theta, int nsub = 512,
                                 int min_bands = 3, int threads = 1);

struct DensityProfile {
  std::vector<double> z_um;
  std::vector<double> density_per_um;
  double time_ms = 0.0;
  double atoms = 0.0;

  double trapezoid_norm() const;
  double second_moment() const;  // um^2, about the mean
  double peak() const;
};

/// Quadrature of the transport integral on an adaptive z grid spanning
/// +-(6 sigma0 + 1.2 v_max t).
DensityProfile density_profile(const VelocityTable& table, double sigma0_um,
                               double v_r_mm_s, double atoms, double t_ms,
                               int n_points = 4096, int threads = 1);

struct ExpansionSeries {
  std::vector<double> t_ms;
  std::vector<double> sigma_um;          // analytic sqrt(sigma0^2 + <v^2> t^2)
  double rate_mm_s = 0.0;                // fitted d(sigma)/dt over the window
  double rate_stderr = 0.0;
  double asymptotic_rate_mm_s = 0.0;     // sqrt(<v^2>)
  std::pair<double, double> fit_window;  // [t1, t2] ms, sigma >= 3 sigma0
  bool fit_matches_asymptote = true;     // within 1%
  double profile_check_max_rel = 0.0;    // worst |sigma_prof - sigma|/sigma
};

struct ExpansionOptions {
  int nsub = 512;
  int profile_points = 4096;
  int profile_checks = 3;  // dual-route sigma checks (first/mid/last t>0)
  int threads = 1;
  double moment_tolerance = 1e-3;
};

/// sigma(t) both ways: the analytic second moment sigma0^2 + <v^2> t^2 and
/// the second moment of the quadrature profile (checked against each other
/// to moment_tolerance), plus the linear fit of sigma(t) over the window
/// sigma >= 3 sigma0 (unit weights).
ExpansionSeries expansion_series(const VelocityTable& table, double sigma0_um,
                                 double v_r_mm_s, double atoms,
                                 const std::vector<double>& times_ms,
                                 const ExpansionOptions& opts = {});

struct RatePoint {
  double depth = 0.0;
  double rate_mm_s = 0.0;
  double rate_stderr = 0.0;
};

std::vector<RatePoint> rate_vs_depth(const std::vector<double>& depths,
                                     double theta, double sigma0_um,
                                     double v_r_mm_s, double atoms,
                                     const std::vector<double>& times_ms,
                                     const ExpansionOptions& opts = {});

/// Effective temperature (units of T_R) assigned from a measured free
/// (s=0) expansion rate: T_eff = m rate^2 / kB = (rate/v_R)^2 T_R.
double effective_temperature(double rate_mm_s, const RecoilUnits& u);
/// Inverse map: the s=0 rate for a given temperature.
double free_expansion_rate(double theta, const RecoilUnits& u);

/// Edge (sharp front) detection at z = v_max t.  The contrast
/// (f_in - f_out)/f_in is measured across a window of width
/// min(0.1 v_max t, 4 sigma0); a front counts as resolvable when the
/// contrast reaches 0.5 AND the drop across that window is at least half
/// the profile peak, so an exponentially weak shoulder does not register.
struct EdgeReport {
  double contrast = 0.0;
  bool front_detected = false;
  double z_front_um = 0.0;    // steepest-descent position (z > 0)
  double expected_um = 0.0;   // v_max * t
};

EdgeReport edge_visibility(const DensityProfile& profile, double v_max_mm_s,
                           double t_ms, double sigma0_um);

}  // namespace latsim

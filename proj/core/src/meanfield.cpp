#include "latsim/meanfield.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>

#include "latsim/constants.hpp"

namespace latsim {

namespace {

// FFTW planning is not thread safe; execution of independent plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place complex FFT pair on a caller-owned buffer.  The backward
/// transform includes the 1/N normalization.
class Fft {
 public:
  Fft(std::complex<double>* data, int n) : n_(n) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (fwd_ == nullptr || bwd_ == nullptr)
      throw std::runtime_error("fftw plan creation failed");
  }
  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward() { fftw_execute(fwd_); }
  void backward_normalized(std::complex<double>* data) {
    fftw_execute(bwd_);
    const double inv = 1.0 / n_;
    for (int i = 0; i < n_; ++i) data[i] *= inv;
  }

 private:
  int n_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> momentum_grid(int n, double length) {
  // Standard DFT ordering: k_j = 2 pi j / L for j < n/2, negative after.
  std::vector<double> k(n);
  const double dk = 2.0 * constants::pi / length;
  for (int j = 0; j < n; ++j) {
    const int jj = (j <= n / 2 - 1) ? j : j - n;
    k[j] = dk * jj;
  }
  return k;
}

double lattice_potential(double depth, double zeta) {
  const double s = std::sin(zeta);
  return depth * s * s;
}

}  // namespace

void GpeConfig::validate() const {
  if (!(atoms > 0.0)) throw std::invalid_argument("gpe: atoms must be > 0");
  if (!(scattering_length >= 0.0))
    throw std::invalid_argument("gpe: scattering length must be >= 0");
  if (!(omega_perp > 0.0))
    throw std::invalid_argument("gpe: omega_perp must be > 0");
  if (!(omega_z > 0.0)) throw std::invalid_argument("gpe: omega_z must be > 0");
  if (!(depth >= 0.0)) throw std::invalid_argument("gpe: depth must be >= 0");
  if (!(grid_length > 0.0))
    throw std::invalid_argument("gpe: grid length must be > 0");
  if (!is_power_of_two(grid_points))
    throw std::invalid_argument("gpe: grid points must be a power of two");
  if (!(dt > 0.0)) throw std::invalid_argument("gpe: dt must be > 0");
}

double GpeConfig::g_tilde(const RecoilUnits& u) const {
  const double g1d = 2.0 * constants::hbar * omega_perp * scattering_length;
  return g1d * u.k_L / u.E_R;
}

double GpeConfig::omega_z_tilde(const RecoilUnits& u) const {
  return constants::hbar * omega_z / u.E_R;
}

double GpeConfig::omega_perp_tilde(const RecoilUnits& u) const {
  return constants::hbar * omega_perp / u.E_R;
}

double GpeConfig::tf_chemical_potential(const RecoilUnits& u) const {
  return std::pow(3.0 * atoms * g_tilde(u) * omega_z_tilde(u) / 8.0, 2.0 / 3.0);
}

double GpeConfig::tf_radius(const RecoilUnits& u) const {
  return 2.0 * std::sqrt(tf_chemical_potential(u)) / omega_z_tilde(u);
}

double atoms_for_chemical_potential(const GpeConfig& cfg, const RecoilUnits& u,
                                    double mu_target_er) {
  if (!(mu_target_er > 0.0))
    throw std::invalid_argument("target chemical potential must be > 0");
  return 8.0 * std::pow(mu_target_er, 1.5) /
         (3.0 * cfg.g_tilde(u) * cfg.omega_z_tilde(u));
}

double Wavefunction::norm() const {
  double n = 0.0;
  for (const auto& a : amp) n += std::norm(a);
  return n * dz();
}

double Wavefunction::rms_width() const {
  double n = 0.0, zbar = 0.0, zz = 0.0;
  for (int j = 0; j < points(); ++j) {
    const double w = std::norm(amp[j]);
    const double z = zeta(j);
    n += w;
    zbar += w * z;
    zz += w * z * z;
  }
  zbar /= n;
  return std::sqrt(zz / n - zbar * zbar);
}

double Wavefunction::peak_density() const {
  double p = 0.0;
  for (const auto& a : amp) p = std::max(p, std::norm(a));
  return p;
}

void Wavefunction::renormalize() {
  const double n = norm();
  const double scale = std::sqrt(atoms / n);
  for (auto& a : amp) a *= scale;
}

Wavefunction tf_ground_state(const GpeConfig& cfg, const RecoilUnits& u) {
  cfg.validate();
  const double g = cfg.g_tilde(u);
  if (!(g > 0.0))
    throw std::invalid_argument("TF ground state needs g > 0");
  const double mu = cfg.tf_chemical_potential(u);
  const double radius = cfg.tf_radius(u);
  const double wz = cfg.omega_z_tilde(u);
  const double a_ho = std::sqrt(2.0 / wz);
  if (radius < 3.0 * a_ho)
    std::cerr << "[latsim] warning: TF radius " << radius
              << " is not large against the oscillator length " << a_ho
              << "; Thomas-Fermi profile is marginal\n";
  if (cfg.grid_length < 3.0 * radius)
    throw std::invalid_argument("grid too small for the TF radius (need 1.5x)");

  Wavefunction psi;
  psi.grid_length = cfg.grid_length;
  psi.atoms = cfg.atoms;
  psi.amp.resize(cfg.grid_points);
  for (int j = 0; j < cfg.grid_points; ++j) {
    const double z = psi.zeta(j);
    const double v = 0.25 * wz * wz * z * z;
    psi.amp[j] = std::sqrt(std::max(0.0, (mu - v) / g));
  }
  return psi;
}

EnergyLedger measure_energy(const Wavefunction& psi, const GpeConfig& cfg,
                            const RecoilUnits& u, bool with_lattice,
                            bool with_axial_trap) {
  const int n = psi.points();
  const double d = psi.dz();
  const double g = cfg.g_tilde(u);
  const double wz = cfg.omega_z_tilde(u);

  std::vector<std::complex<double>> work(psi.amp);
  Fft fft(work.data(), n);
  fft.forward();
  const std::vector<double> k = momentum_grid(n, psi.grid_length);
  double ekin = 0.0;
  for (int j = 0; j < n; ++j) ekin += k[j] * k[j] * std::norm(work[j]);
  ekin *= d / n;

  double epot = 0.0, eint = 0.0;
  for (int j = 0; j < n; ++j) {
    const double z = psi.zeta(j);
    const double rho = std::norm(psi.amp[j]);
    double v = 0.0;
    if (with_lattice) v += lattice_potential(cfg.depth, z);
    if (with_axial_trap) v += 0.25 * wz * wz * z * z;
    epot += v * rho;
    eint += 0.5 * g * rho * rho;
  }
  epot *= d;
  eint *= d;

  EnergyLedger ledger;
  ledger.kinetic = ekin / cfg.atoms;
  ledger.potential = epot / cfg.atoms;
  ledger.interaction = eint / cfg.atoms;
  ledger.chemical_potential =
      (ekin + epot + 2.0 * eint) / cfg.atoms;
  return ledger;
}

Wavefunction imaginary_time_ground_state(const GpeConfig& cfg,
                                         const RecoilUnits& u,
                                         const ImaginaryTimeOptions& opts) {
  cfg.validate();
  if (!(opts.dt > 0.0)) throw std::invalid_argument("imaginary dt must be > 0");
  const int n = cfg.grid_points;
  const double g = cfg.g_tilde(u);
  const double wz = cfg.omega_z_tilde(u);

  Wavefunction psi;
  psi.grid_length = cfg.grid_length;
  psi.atoms = cfg.atoms;
  psi.amp.resize(n);
  // Start from the TF profile when interacting, else the oscillator
  // Gaussian; both relax quickly.
  const double a_ho = std::sqrt(2.0 / wz);
  if (g > 0.0 && cfg.grid_length >= 3.0 * cfg.tf_radius(u)) {
    psi = tf_ground_state(cfg, u);
    for (auto& a : psi.amp) a += 1e-8;  // keep tails nonzero for relaxation
  } else {
    for (int j = 0; j < n; ++j) {
      const double z = psi.zeta(j);
      psi.amp[j] = std::exp(-z * z / (2.0 * a_ho * a_ho));
    }
  }
  psi.renormalize();

  Fft fft(psi.amp.data(), n);
  const std::vector<double> k = momentum_grid(n, cfg.grid_length);
  std::vector<double> kfac(n), vpot(n);
  for (int j = 0; j < n; ++j) kfac[j] = std::exp(-k[j] * k[j] * opts.dt);
  for (int j = 0; j < n; ++j) {
    const double z = psi.zeta(j);
    double v = 0.0;
    if (opts.with_lattice) v += lattice_potential(cfg.depth, z);
    if (opts.with_axial_trap) v += 0.25 * wz * wz * z * z;
    vpot[j] = v;
  }

  double e_prev = 0.0;
  bool have_prev = false;
  for (int step = 0; step < opts.max_steps; ++step) {
    for (int j = 0; j < n; ++j) {
      const double veff = vpot[j] + g * std::norm(psi.amp[j]);
      psi.amp[j] *= std::exp(-0.5 * veff * opts.dt);
    }
    fft.forward();
    for (int j = 0; j < n; ++j) psi.amp[j] *= kfac[j];
    fft.backward_normalized(psi.amp.data());
    for (int j = 0; j < n; ++j) {
      const double veff = vpot[j] + g * std::norm(psi.amp[j]);
      psi.amp[j] *= std::exp(-0.5 * veff * opts.dt);
    }
    psi.renormalize();

    if ((step + 1) % opts.check_every == 0) {
      const EnergyLedger e = measure_energy(psi, cfg, u, opts.with_lattice,
                                            opts.with_axial_trap);
      const double etot = e.total();
      if (have_prev &&
          std::abs(etot - e_prev) / opts.check_every < opts.tolerance)
        return psi;
      e_prev = etot;
      have_prev = true;
    }
  }
  throw std::runtime_error(
      "imaginary-time relaxation did not converge within max_steps");
}

Trajectory evolve(Wavefunction& psi, const GpeConfig& cfg, const RecoilUnits& u,
                  const EvolveOptions& opts) {
  cfg.validate();
  if (!(opts.t_final > 0.0)) throw std::invalid_argument("t_final must be > 0");
  const int n = psi.points();
  if (n != cfg.grid_points)
    throw std::invalid_argument("wavefunction grid does not match config");
  const double g = cfg.g_tilde(u);
  const double wz = cfg.omega_z_tilde(u);
  const double dt = cfg.dt;

  // Step bound: dt <= 0.1 hbar / max(E_R (s/2 + k_max^2), mu).
  const double kmax = constants::pi * n / cfg.grid_length;
  const double mu0 = measure_energy(psi, cfg, u, opts.with_lattice,
                                    opts.with_axial_trap)
                         .chemical_potential;
  const double bound = 0.1 / std::max(cfg.depth / 2.0 + kmax * kmax, mu0);
  if (dt > bound)
    throw std::invalid_argument(
        "dt violates the step bound 0.1/max(s/2 + k_max^2, mu) = " +
        std::to_string(bound));

  Fft fft(psi.amp.data(), n);
  const std::vector<double> k = momentum_grid(n, cfg.grid_length);
  std::vector<std::complex<double>> kphase(n);
  for (int j = 0; j < n; ++j)
    kphase[j] = std::exp(std::complex<double>(0.0, -k[j] * k[j] * dt));

  std::vector<double> vstatic(n);
  for (int j = 0; j < n; ++j) {
    double v = 0.0;
    if (opts.with_axial_trap) v += 0.25 * wz * wz * psi.zeta(j) * psi.zeta(j);
    vstatic[j] = v;
  }
  std::vector<double> vlat(n);
  for (int j = 0; j < n; ++j) vlat[j] = lattice_potential(cfg.depth, psi.zeta(j));

  const auto n_steps = static_cast<long>(std::ceil(opts.t_final / dt));
  const int edge_cells = std::max(2, n / 128);

  Trajectory traj;
  auto sample = [&](long step) {
    TrajectorySample ts;
    ts.tau = step * dt;
    ts.sigma = psi.rms_width();
    ts.norm = psi.norm();
    ts.energy = measure_energy(psi, cfg, u, opts.with_lattice,
                               opts.with_axial_trap);
    traj.samples.push_back(ts);

    double edge = 0.0;
    for (int j = 0; j < edge_cells; ++j) {
      edge = std::max(edge, std::norm(psi.amp[j]));
      edge = std::max(edge, std::norm(psi.amp[n - 1 - j]));
    }
    if (edge > opts.edge_density_limit * psi.peak_density())
      throw std::runtime_error(
          "expansion reached the grid edge (density " + std::to_string(edge) +
          " at the boundary); enlarge the grid");
  };
  sample(0);

  auto ramp_factor = [&](double tau) {
    if (!opts.with_lattice) return 0.0;
    if (opts.lattice_ramp <= 0.0) return 1.0;
    return std::min(1.0, tau / opts.lattice_ramp);
  };

  for (long step = 0; step < n_steps; ++step) {
    const double fac = ramp_factor((step + 0.5) * dt);
    for (int j = 0; j < n; ++j) {
      const double veff = vstatic[j] + fac * vlat[j] + g * std::norm(psi.amp[j]);
      psi.amp[j] *= std::exp(std::complex<double>(0.0, -0.5 * veff * dt));
    }
    fft.forward();
    for (int j = 0; j < n; ++j) psi.amp[j] *= kphase[j];
    fft.backward_normalized(psi.amp.data());
    for (int j = 0; j < n; ++j) {
      const double veff = vstatic[j] + fac * vlat[j] + g * std::norm(psi.amp[j]);
      psi.amp[j] *= std::exp(std::complex<double>(0.0, -0.5 * veff * dt));
    }
    if ((step + 1) % opts.sample_every == 0 || step + 1 == n_steps)
      sample(step + 1);
  }
  return traj;
}

double Trajectory::expansion_rate_vr(double tau_min) const {
  std::vector<double> t, s;
  for (const auto& ts : samples) {
    if (ts.tau >= tau_min) {
      t.push_back(ts.tau);
      s.push_back(ts.sigma);
    }
  }
  if (t.size() < 2)
    throw std::invalid_argument("not enough trajectory samples past tau_min");
  double tbar = 0.0, sbar = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tbar += t[i];
    sbar += s[i];
  }
  tbar /= t.size();
  sbar /= s.size();
  double stt = 0.0, sts = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tbar) * (t[i] - tbar);
    sts += (t[i] - tbar) * (s[i] - sbar);
  }
  // d sigma_zeta / d tau = 2 v / v_R.
  return 0.5 * sts / stt;
}

double sound_speed(double n1d_per_m, const GpeConfig& cfg, const RecoilUnits& u,
                   const LatticeParams& p) {
  if (!(n1d_per_m >= 0.0)) throw std::invalid_argument("density must be >= 0");
  (void)u;
  const double g1d = 2.0 * constants::hbar * cfg.omega_perp * cfg.scattering_length;
  return std::sqrt(g1d * n1d_per_m / p.mass);
}

double line_density_from_3d(double n3d_per_m3, const GpeConfig& cfg,
                            const LatticeParams& p) {
  const double a_perp = std::sqrt(constants::hbar / (p.mass * cfg.omega_perp));
  return n3d_per_m3 * constants::pi * a_perp * a_perp;
}

Regime classify_regime(double rate_mm_s, double sound_mm_s) {
  if (!std::isfinite(rate_mm_s) || !std::isfinite(sound_mm_s))
    throw std::invalid_argument("rate and sound speed must be finite");
  return rate_mm_s > sound_mm_s ? Regime::SingleParticleLike
                                : Regime::InteractionDominated;
}

}  // namespace latsim

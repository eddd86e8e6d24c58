#pragma once

#include <complex>
#include <vector>

#include "latsim/units.hpp"

// Quasi-1D Gross-Pitaevskii solver in recoil units:
//
//   i d(phi)/d(tau) = [ -d^2/d(zeta)^2 + V(zeta) + g |phi|^2 ] phi
//
// with zeta = kL z, tau = t E_R/hbar, norm int |phi|^2 dzeta = N and the
// tight-radial coupling g = g1D kL / E_R, g1D = 2 hbar omega_perp a_s.
// Time stepping is second-order Strang splitting with the kinetic factor
// applied exactly in momentum space.

namespace latsim {

struct GpeConfig {
  double atoms = 0.0;              // N
  double scattering_length = 0.0;  // a_s [m]
  double omega_perp = 0.0;         // radial trap [rad/s]
  double omega_z = 0.0;            // axial trap [rad/s]
  double depth = 0.0;              // lattice s
  double grid_length = 0.0;        // box length in zeta = kL z units
  int grid_points = 0;             // power of two
  double dt = 0.0;                 // real-time step [hbar/E_R]

  void validate() const;

  // Derived couplings (recoil units).
  double g_tilde(const RecoilUnits& u) const;      // g1D kL/E_R
  double omega_z_tilde(const RecoilUnits& u) const;    // hbar omega_z/E_R
  double omega_perp_tilde(const RecoilUnits& u) const; // hbar omega_perp/E_R

  /// 1D Thomas-Fermi chemical potential (E_R): (3 N g w_z / 8)^(2/3).
  double tf_chemical_potential(const RecoilUnits& u) const;
  /// TF radius in zeta units: 2 sqrt(mu)/w_z.
  double tf_radius(const RecoilUnits& u) const;
};

/// N atoms needed for a target 1D TF chemical potential (E_R units).
double atoms_for_chemical_potential(const GpeConfig& cfg, const RecoilUnits& u,
                                    double mu_target_er);

struct Wavefunction {
  std::vector<std::complex<double>> amp;  // on the zeta grid
  double grid_length = 0.0;
  double atoms = 0.0;  // norm convention: int |phi|^2 dzeta = atoms

  int points() const { return static_cast<int>(amp.size()); }
  double dz() const { return grid_length / points(); }
  double zeta(int j) const { return (j - points() / 2) * dz(); }
  double norm() const;            // int |phi|^2 dzeta
  double rms_width() const;       // zeta units, about the mean
  double peak_density() const;    // max |phi|^2 (atoms per unit zeta)
  void renormalize();             // scale norm back to `atoms`
};

/// Per-atom energy bookkeeping in E_R.
struct EnergyLedger {
  double kinetic = 0.0;
  double potential = 0.0;      // lattice + axial trap
  double interaction = 0.0;    // (g/2) int |phi|^4 / N
  double chemical_potential = 0.0;  // kin + pot + 2*int (per atom)

  double total() const { return kinetic + potential + interaction; }
};

/// Closed-form Thomas-Fermi ground state in the axial trap,
/// phi = sqrt(max(0, (mu - V_trap)/g)).  Warns (stderr) when the TF
/// radius is not large against the oscillator length; throws if the grid
/// does not cover 1.5x the TF radius.
Wavefunction tf_ground_state(const GpeConfig& cfg, const RecoilUnits& u);

struct ImaginaryTimeOptions {
  double dt = 0.1;             // imaginary step [hbar/E_R]
  double tolerance = 1e-10;    // per-step energy change [E_R/atom]
  int max_steps = 400000;
  int check_every = 50;
  bool with_lattice = true;
  bool with_axial_trap = true;
};

/// Split-step relaxation with renormalization to N after every step.
Wavefunction imaginary_time_ground_state(const GpeConfig& cfg,
                                         const RecoilUnits& u,
                                         const ImaginaryTimeOptions& opts = {});

struct EvolveOptions {
  double t_final = 0.0;        // tau [hbar/E_R]
  bool with_lattice = true;
  bool with_axial_trap = false;  // release protocol: trap off, lattice on
  double lattice_ramp = 0.0;     // linear ramp duration in tau (0 = sudden)
  int sample_every = 100;        // steps between trajectory samples
  double edge_density_limit = 1e-6;  // of peak; exceeding it aborts the run
};

struct TrajectorySample {
  double tau = 0.0;
  double sigma = 0.0;  // rms width, zeta units
  double norm = 0.0;   // int |phi|^2 dzeta
  EnergyLedger energy;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;

  /// Least-squares slope of sigma(tau) over samples with tau >= tau_min,
  /// converted to v_R units (d sigma_z/dt = v_R/2 * d sigma_zeta/d tau).
  double expansion_rate_vr(double tau_min) const;
};

/// Strang-split real-time evolution, in place.  Checks the stated step
/// bound dt <= 0.1 / max(s/2 + k_max^2, mu) and aborts loudly when density
/// reaches the grid edge.
Trajectory evolve(Wavefunction& psi, const GpeConfig& cfg, const RecoilUnits& u,
                  const EvolveOptions& opts);

EnergyLedger measure_energy(const Wavefunction& psi, const GpeConfig& cfg,
                            const RecoilUnits& u, bool with_lattice,
                            bool with_axial_trap);

/// Bogoliubov sound speed c = sqrt(g1D n1D / m) [m/s] for a 1D density
/// n1D [atoms/m].
double sound_speed(double n1d_per_m, const GpeConfig& cfg, const RecoilUnits& u,
                   const LatticeParams& p);

/// Effective 1D density of a 3D peak density through the radial ground
/// mode: n1D = n3D * pi * a_perp^2.
double line_density_from_3d(double n3d_per_m3, const GpeConfig& cfg,
                            const LatticeParams& p);

enum class Regime { SingleParticleLike, InteractionDominated };

/// rate > c: single-particle-like; the boundary rate == c counts as
/// interaction-dominated.
Regime classify_regime(double rate_mm_s, double sound_mm_s);

}  // namespace latsim

#pragma once

#include <string>

// Recoil-unit system for a 1D optical lattice.
//
// All internal computation in this library happens in recoil units:
// energies in E_R = hbar^2 kL^2 / (2 m), lengths in 1/kL, velocities in
// v_R = hbar kL / m, temperatures in T_R = 2 E_R / kB and times in
// hbar / E_R.  SI values appear only at the interface boundary.

namespace latsim {

/// Lattice light and atom parameters; the well depth s = V0/E_R is
/// dimensionless.
struct LatticeParams {
  double depth = 0.0;        // s = V0/E_R, dimensionless, >= 0
  double wavelength = 0.0;   // lattice light wavelength [m], > 0
  double mass = 0.0;         // atomic mass [kg], > 0

  /// 532 nm standing wave on sodium, the default configuration.
  static LatticeParams sodium532(double depth);

  void validate() const;  // throws std::invalid_argument on violation
};

/// Derived unit system.  All fields strictly positive.
struct RecoilUnits {
  double k_L = 0.0;  // lattice wavenumber 2*pi/lambda [1/m]
  double E_R = 0.0;  // recoil energy hbar^2 kL^2/(2m) [J]
  double T_R = 0.0;  // recoil temperature 2 E_R/kB [K]
  double v_R = 0.0;  // recoil velocity hbar kL/m [m/s]
  double t_R = 0.0;  // time unit hbar/E_R [s]
};

RecoilUnits derive_units(const LatticeParams& p);

enum class Quantity { Energy, Temperature, Velocity, Length, Time };

/// SI value -> dimensionless recoil value.  Length uses 1/k_L as the unit.
double to_recoil(double si_value, Quantity kind, const RecoilUnits& u);
/// Dimensionless recoil value -> SI.
double from_recoil(double value, Quantity kind, const RecoilUnits& u);

std::string quantity_name(Quantity kind);

}  // namespace latsim

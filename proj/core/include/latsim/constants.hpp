#pragma once

// Physical constants (CODATA 2018 / SI exact where applicable).
// Values are compiled in so that derived quantities are reproducible
// bit-for-bit across builds.

namespace latsim::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double planck_h = 6.62607015e-34;       // J s (exact)
inline constexpr double boltzmann = 1.380649e-23;        // J/K (exact)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// 23Na: 22.98976928 u
inline constexpr double sodium_mass_amu = 22.98976928;
inline constexpr double sodium_mass = sodium_mass_amu * atomic_mass_unit;

// 23Na s-wave scattering length, |F=1,m=-1>: 2.75 nm (~52 a0).
inline constexpr double sodium_scattering_length = 2.75e-9;  // m

}  // namespace latsim::constants

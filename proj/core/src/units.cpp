#include "latsim/units.hpp"

#include <cmath>
#include <stdexcept>

#include "latsim/constants.hpp"

namespace latsim {

LatticeParams LatticeParams::sodium532(double depth) {
  return LatticeParams{depth, 532e-9, constants::sodium_mass};
}

void LatticeParams::validate() const {
  if (!(depth >= 0.0)) throw std::invalid_argument("lattice depth s must be >= 0");
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be > 0");
}

RecoilUnits derive_units(const LatticeParams& p) {
  p.validate();
  RecoilUnits u;
  u.k_L = 2.0 * constants::pi / p.wavelength;
  u.E_R = constants::hbar * constants::hbar * u.k_L * u.k_L / (2.0 * p.mass);
  u.T_R = 2.0 * u.E_R / constants::boltzmann;
  u.v_R = constants::hbar * u.k_L / p.mass;
  u.t_R = constants::hbar / u.E_R;
  return u;
}

namespace {
double unit_of(Quantity kind, const RecoilUnits& u) {
  switch (kind) {
    case Quantity::Energy: return u.E_R;
    case Quantity::Temperature: return u.T_R;
    case Quantity::Velocity: return u.v_R;
    case Quantity::Length: return 1.0 / u.k_L;
    case Quantity::Time: return u.t_R;
  }
  throw std::invalid_argument("unknown quantity kind");
}
}  // namespace

double to_recoil(double si_value, Quantity kind, const RecoilUnits& u) {
  return si_value / unit_of(kind, u);
}

double from_recoil(double value, Quantity kind, const RecoilUnits& u) {
  return value * unit_of(kind, u);
}

std::string quantity_name(Quantity kind) {
  switch (kind) {
    case Quantity::Energy: return "energy";
    case Quantity::Temperature: return "temperature";
    case Quantity::Velocity: return "velocity";
    case Quantity::Length: return "length";
    case Quantity::Time: return "time";
  }
  return "unknown";
}

}  // namespace latsim

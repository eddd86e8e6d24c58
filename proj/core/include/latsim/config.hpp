#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latsim/transport.hpp"
#include "latsim/units.hpp"

// Scenario configuration: flat key-value text with dotted section
// prefixes.  Grammar:
//
//   # comment (also after values)
//   key.subkey = value
//
// Values are numbers, booleans (true/false), strings, or number lists
// (comma separated, or start:stop:step ranges).  Parsing reports every
// error with its line number, not just the first.

namespace latsim {

/// GPE block as configured (lab units at the boundary).
struct GpeSettings {
  double atoms = 12000.0;
  double scattering_length_nm = 2.75;
  double omega_perp_hz = 317.0;   // radial trap / (2 pi)
  double omega_z_hz = 600.0;      // axial trap / (2 pi)
  double grid_length = 0.0;       // zeta units; 0 = auto
  int grid_points = 0;            // power of two; 0 = auto
  double dt = 0.0;                // hbar/E_R; 0 = auto from the step bound
  double t_final_ms = 20.0;
  double ramp_ms = 0.0;           // lattice ramp duration (0 = sudden)
  int sample_every = 200;
  double peak_density_cm3 = 8e13;       // for sound-speed classification
  double chemical_potential_er = 0.0;   // >0: calibrate atoms to this mu
};

struct ScenarioConfig {
  std::string name = "custom";
  LatticeParams lattice{0.0, 532e-9, 0.0};  // mass filled from mass_amu
  double mass_amu = 22.98976928;

  std::optional<ThermalCloud> cloud;
  double bec_effective_temperature_tr = 0.061638;  // from the 8.1 mm/s free rate

  std::optional<GpeSettings> gpe;

  std::vector<double> sweep_s;
  std::vector<double> times_ms;
  std::vector<double> temperatures_tr;
  std::vector<double> profile_times_ms;

  std::string out_dir;
  bool svg = false;
  int threads = 1;
  int nsub = 512;            // Simpson subintervals per zone
  int profile_points = 4096;

  LatticeParams lattice_params() const;  // with mass resolved from amu
};

struct ParseError {
  int line = 0;
  std::string message;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;  // set only when errors is empty
  std::vector<ParseError> errors;
  std::vector<std::string> warnings;
};

/// Parses `text` on top of `base` (built-in scenario defaults).  All
/// validation failures are collected; `config` is set only if none occur.
ParseResult parse_config(const std::string& text, const ScenarioConfig& base);
ParseResult parse_config(const std::string& text);

/// Final invariant check used by both the parser and the built-ins:
/// exactly one physics block, ranges valid.  Returns error strings.
std::vector<std::string> validate_scenario(const ScenarioConfig& sc,
                                           std::vector<std::string>* warnings);

}  // namespace latsim

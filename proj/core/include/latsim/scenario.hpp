#pragma once

#include <string>
#include <vector>

#include "latsim/config.hpp"
#include "latsim/meanfield.hpp"
#include "latsim/transport.hpp"

// Named scenario runner.  Built-ins:
//
//   bands    band table for the configured depth
//   expand   thermal expansion: sigma(t) series + profile snapshots
//   gpe      mean-field release run: trajectory + profile snapshots
//   fig1     sigma(t) for s = 1.6, 4.9 at the thermal and BEC-effective T
//   fig2     expansion rate vs s, thermal + BEC-effective curves
//   fig3a    hot-cloud profiles at s = 2.25 with edge tracking
//   fig3b    deep-lattice comparison: GPE vs single-particle profiles
//   regimes  rate vs sound speed classification across s
//
// Every run writes CSV datasets (optionally SVG) plus manifest.json with
// per-output checksums; the manifest is written atomically after all
// outputs succeed.

namespace latsim {

struct OutputRecord {
  std::string file;      // relative to the output directory
  std::string fnv1a64;   // checksum of the bytes
};

struct RunManifest {
  std::string scenario;
  std::string version;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::pair<std::string, double>> constants;
  double wall_clock_s = 0.0;
  std::vector<OutputRecord> outputs;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

RunManifest run_scenario(const ScenarioConfig& sc);

/// Built-in defaults for a named scenario (used by the CLI before any
/// config overlay).
ScenarioConfig default_scenario(const std::string& name);

// -- pieces shared by fig3b / regimes / the acceptance suite --------------

struct GpeExpansionResult {
  GpeConfig cfg;
  double sigma0_um = 0.0;     // rms width of the released state
  double rate_mm_s = 0.0;     // sigma slope over the late half of the run
  double theta_eff = 0.0;     // (rate / v_R)^2
  Trajectory trajectory;
  Wavefunction psi;           // final state
};

/// Ground state in (axial trap [+ lattice]) then release into the lattice
/// and track sigma(t).  Grid geometry is auto-sized when not configured.
GpeExpansionResult run_gpe_expansion(const GpeSettings& g,
                                     const LatticeParams& lattice,
                                     double depth, double t_final_ms,
                                     int threads);

/// Asymptotic single-particle rate sqrt(<v^2>) at (s, theta), mm/s.
double single_particle_rate_mm_s(double depth, double theta,
                                 const RecoilUnits& u, int nsub = 512,
                                 int threads = 1);

void write_manifest(const RunManifest& manifest, const std::string& dir);

}  // namespace latsim

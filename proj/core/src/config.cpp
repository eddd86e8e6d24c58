#include "latsim/config.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "latsim/constants.hpp"

namespace latsim {

LatticeParams ScenarioConfig::lattice_params() const {
  LatticeParams p = lattice;
  p.mass = mass_amu * constants::atomic_mass_unit;
  return p;
}

namespace {

struct Entry {
  int line = 0;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_double(const std::string& s, double* out) {
  try {
    std::size_t pos = 0;
    *out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(*out);
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int* out) {
  double d;
  if (!parse_double(s, &d)) return false;
  if (d != std::floor(d) || std::abs(d) > 2e9) return false;
  *out = static_cast<int>(d);
  return true;
}

bool parse_bool(const std::string& s, bool* out) {
  if (s == "true") { *out = true; return true; }
  if (s == "false") { *out = false; return true; }
  return false;
}

// "a,b,c" or "start:stop:step" (endpoint included up to rounding).
bool parse_list(const std::string& s, std::vector<double>* out) {
  out->clear();
  if (s.find(':') != std::string::npos) {
    std::stringstream ss(s);
    std::string part;
    std::vector<double> spec;
    while (std::getline(ss, part, ':')) {
      double v;
      if (!parse_double(trim(part), &v)) return false;
      spec.push_back(v);
    }
    if (spec.size() != 3 || spec[2] <= 0.0) return false;
    const double start = spec[0], stop = spec[1], step = spec[2];
    if (stop < start) return false;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) out->push_back(start + i * step);
    return !out->empty();
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    double v;
    if (!parse_double(trim(part), &v)) return false;
    out->push_back(v);
  }
  return !out->empty();
}

class Applier {
 public:
  Applier(ScenarioConfig* cfg, std::vector<ParseError>* errors,
          std::vector<std::string>* warnings)
      : cfg_(cfg), errors_(errors), warnings_(warnings) {}

  bool cloud_touched = false;
  bool gpe_touched = false;

  void apply(const Entry& e) {
    const std::string& k = e.key;
    if (k.rfind("cloud.", 0) == 0) {
      cloud_touched = true;
      if (!cfg_->cloud) cfg_->cloud = ThermalCloud{0.16, 0.9e6, 2.0 * constants::pi * 75.0};
    }
    if (k.rfind("gpe.", 0) == 0) {
      gpe_touched = true;
      if (!cfg_->gpe) cfg_->gpe = GpeSettings{};
    }

    if (k == "scenario.name") cfg_->name = e.value;
    else if (k == "output.dir") cfg_->out_dir = e.value;
    else if (k == "output.svg") get_bool(e, &cfg_->svg);
    else if (k == "run.threads") get_int(e, &cfg_->threads, 1, "must be >= 1");
    else if (k == "transport.nsub") {
      if (get_int(e, &cfg_->nsub, 2, "must be >= 2") && cfg_->nsub % 2 != 0)
        error(e, "must be even");
    }
    else if (k == "transport.profile_points")
      get_int(e, &cfg_->profile_points, 64, "must be >= 64");
    else if (k == "lattice.depth") {
      if (get_double(e, &cfg_->lattice.depth, 0.0, "must be >= 0") &&
          cfg_->lattice.depth > 18.0)
        warn(e, "depth above the validated range [0, 18]");
    }
    else if (k == "lattice.wavelength_nm") {
      double nm;
      if (get_double(e, &nm, 1e-12, "must be > 0")) cfg_->lattice.wavelength = nm * 1e-9;
    }
    else if (k == "lattice.mass_amu") get_double(e, &cfg_->mass_amu, 1e-12, "must be > 0");
    else if (k == "cloud.temperature_tr")
      get_double(e, &cfg_->cloud->temperature_tr, 1e-12, "must be > 0");
    else if (k == "cloud.effective_temperature_tr")
      get_double(e, &cfg_->bec_effective_temperature_tr, 1e-12, "must be > 0");
    else if (k == "cloud.atoms") get_double(e, &cfg_->cloud->atoms, 1e-12, "must be > 0");
    else if (k == "cloud.omega_z_hz") {
      double hz;
      if (get_double(e, &hz, 1e-12, "must be > 0"))
        cfg_->cloud->omega_z = 2.0 * constants::pi * hz;
    }
    else if (k == "gpe.atoms") get_double(e, &cfg_->gpe->atoms, 1e-12, "must be > 0");
    else if (k == "gpe.scattering_length_nm")
      get_double(e, &cfg_->gpe->scattering_length_nm, 0.0, "must be >= 0");
    else if (k == "gpe.omega_perp_hz")
      get_double(e, &cfg_->gpe->omega_perp_hz, 1e-12, "must be > 0");
    else if (k == "gpe.omega_z_hz")
      get_double(e, &cfg_->gpe->omega_z_hz, 1e-12, "must be > 0");
    else if (k == "gpe.grid_length")
      get_double(e, &cfg_->gpe->grid_length, 0.0, "must be >= 0");
    else if (k == "gpe.grid_points") {
      int n;
      if (get_int(e, &n, 0, "must be >= 0")) {
        if (n != 0 && (n & (n - 1)) != 0) error(e, "must be a power of two");
        else cfg_->gpe->grid_points = n;
      }
    }
    else if (k == "gpe.dt") get_double(e, &cfg_->gpe->dt, 0.0, "must be >= 0");
    else if (k == "gpe.t_final_ms")
      get_double(e, &cfg_->gpe->t_final_ms, 1e-12, "must be > 0");
    else if (k == "gpe.ramp_ms") get_double(e, &cfg_->gpe->ramp_ms, 0.0, "must be >= 0");
    else if (k == "gpe.sample_every")
      get_int(e, &cfg_->gpe->sample_every, 1, "must be >= 1");
    else if (k == "gpe.peak_density_cm3")
      get_double(e, &cfg_->gpe->peak_density_cm3, 0.0, "must be >= 0");
    else if (k == "gpe.chemical_potential_er")
      get_double(e, &cfg_->gpe->chemical_potential_er, 0.0, "must be >= 0");
    else if (k == "sweep.s") {
      if (get_list(e, &cfg_->sweep_s)) {
        for (const double s : cfg_->sweep_s) {
          if (s < 0.0) error(e, "sweep.s: depth must be >= 0");
          else if (s > 18.0) warn(e, "sweep.s: depth above the validated range [0, 18]");
        }
      }
    }
    else if (k == "sweep.times_ms") get_list(e, &cfg_->times_ms);
    else if (k == "sweep.temperatures_tr") {
      if (get_list(e, &cfg_->temperatures_tr))
        for (const double t : cfg_->temperatures_tr)
          if (t <= 0.0) error(e, "temperatures must be > 0");
    }
    else if (k == "sweep.profile_times_ms") get_list(e, &cfg_->profile_times_ms);
    else error(e, "unknown key");
  }

 private:
  void error(const Entry& e, const std::string& msg) {
    errors_->push_back({e.line, e.key + ": " + msg});
  }
  void warn(const Entry& e, const std::string& msg) {
    warnings_->push_back("line " + std::to_string(e.line) + ": " + e.key + ": " + msg);
  }
  bool get_double(const Entry& e, double* out, double min, const char* range_msg) {
    double v;
    if (!parse_double(e.value, &v)) {
      error(e, "expected a number, got '" + e.value + "'");
      return false;
    }
    if (v < min) {
      error(e, std::string(range_msg) + " (got " + e.value + ")");
      return false;
    }
    *out = v;
    return true;
  }
  bool get_int(const Entry& e, int* out, int min, const char* range_msg) {
    int v;
    if (!parse_int(e.value, &v)) {
      error(e, "expected an integer, got '" + e.value + "'");
      return false;
    }
    if (v < min) {
      error(e, std::string(range_msg) + " (got " + e.value + ")");
      return false;
    }
    *out = v;
    return true;
  }
  bool get_bool(const Entry& e, bool* out) {
    if (!parse_bool(e.value, out)) {
      error(e, "expected true or false, got '" + e.value + "'");
      return false;
    }
    return true;
  }
  bool get_list(const Entry& e, std::vector<double>* out) {
    if (!parse_list(e.value, out)) {
      error(e, "expected a number list (a,b,c) or range (start:stop:step)");
      return false;
    }
    return true;
  }

  ScenarioConfig* cfg_;
  std::vector<ParseError>* errors_;
  std::vector<std::string>* warnings_;
};

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioConfig& sc,
                                           std::vector<std::string>* warnings) {
  std::vector<std::string> errors;
  const bool has_cloud = sc.cloud.has_value();
  const bool has_gpe = sc.gpe.has_value();
  if (has_cloud && has_gpe)
    errors.push_back(
        "scenario must have exactly one physics block: both cloud.* and gpe.* "
        "are configured");
  if (!has_cloud && !has_gpe)
    errors.push_back(
        "scenario must have exactly one physics block (cloud.* or gpe.*)");

  if (sc.lattice.depth < 0.0) errors.push_back("lattice.depth: must be >= 0");
  if (sc.lattice.depth > 18.0 && warnings)
    warnings->push_back("lattice.depth above the validated range [0, 18]");
  if (sc.lattice.wavelength <= 0.0)
    errors.push_back("lattice.wavelength_nm: must be > 0");
  if (sc.mass_amu <= 0.0) errors.push_back("lattice.mass_amu: must be > 0");
  if (sc.threads < 1) errors.push_back("run.threads: must be >= 1");

  if (has_cloud) {
    const ThermalCloud& c = *sc.cloud;
    if (c.temperature_tr <= 0.0)
      errors.push_back("cloud.temperature_tr: must be > 0");
    if (c.atoms <= 0.0) errors.push_back("cloud.atoms: must be > 0");
    if (c.omega_z <= 0.0) errors.push_back("cloud.omega_z_hz: must be > 0");
  }
  if (has_gpe) {
    const GpeSettings& g = *sc.gpe;
    if (g.atoms <= 0.0 && g.chemical_potential_er <= 0.0)
      errors.push_back("gpe.atoms: must be > 0 (or set gpe.chemical_potential_er)");
    if (g.omega_perp_hz <= 0.0) errors.push_back("gpe.omega_perp_hz: must be > 0");
    if (g.omega_z_hz <= 0.0) errors.push_back("gpe.omega_z_hz: must be > 0");
    if (g.grid_points != 0 && (g.grid_points & (g.grid_points - 1)) != 0)
      errors.push_back("gpe.grid_points: must be a power of two");
    if (g.t_final_ms <= 0.0) errors.push_back("gpe.t_final_ms: must be > 0");
  }
  for (const double s : sc.sweep_s)
    if (s < 0.0) errors.push_back("sweep.s: depth must be >= 0");
  return errors;
}

ParseResult parse_config(const std::string& text, const ScenarioConfig& base) {
  ParseResult result;
  ScenarioConfig cfg = base;

  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back({lineno, "expected 'key = value', got '" + line + "'"});
      continue;
    }
    Entry e;
    e.line = lineno;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    if (e.key.empty()) {
      result.errors.push_back({lineno, "missing key before '='"});
      continue;
    }
    if (e.value.empty()) {
      result.errors.push_back({lineno, e.key + ": missing value"});
      continue;
    }
    entries.push_back(std::move(e));
  }

  Applier applier(&cfg, &result.errors, &result.warnings);
  for (const Entry& e : entries) applier.apply(e);

  for (const std::string& msg : validate_scenario(cfg, &result.warnings))
    result.errors.push_back({0, msg});

  if (result.errors.empty()) result.config = cfg;
  return result;
}

ParseResult parse_config(const std::string& text) {
  return parse_config(text, ScenarioConfig{});
}

}  // namespace latsim

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "omcool/experiment.hpp"
#include "omcool/quantum_spectra.hpp"
#include "omcool/thermal_models.hpp"

#ifndef OMCOOL_VERSION
#define OMCOOL_VERSION "0.0.0"
#endif

namespace omcool {

const char* tool_version() { return OMCOOL_VERSION; }

std::vector<KeySpec> experiment_schema() {
  using Q = Quantity;
  return {
      {"device", "lambda", Q::Length},
      {"device", "omega_o", Q::Frequency},
      {"device", "kappa", Q::Frequency},
      {"device", "kappa_e", Q::Frequency},
      {"device", "contrast", Q::Dimensionless},
      {"device", "omega_m", Q::Frequency},
      {"device", "gamma_i", Q::Frequency},
      {"device", "Q_m", Q::Dimensionless},
      {"device", "mass", Q::Mass},
      {"device", "g", Q::Frequency},
      {"device", "T_b", Q::Temperature},

      {"drive", "detuning", Q::Frequency},

      {"sweep", "n_c", Q::Dimensionless, true},
      {"sweep", "P_in", Q::Power, true},

      {"detection", "responsivity", Q::AmpPerWatt},
      {"detection", "transimpedance_gain", Q::VoltPerAmp},
      {"detection", "load", Q::Ohm},
      {"detection", "electronic_gain", Q::VoltPerWatt},
      {"detection", "edfa_gain", Q::Dimensionless},
      {"detection", "L_0", Q::Dimensionless},
      {"detection", "L_1", Q::Dimensionless},
      {"detection", "excess_ratio", Q::Dimensionless},

      {"synthesis", "averages", Q::Integer},
      {"synthesis", "points", Q::Integer},
      {"synthesis", "span_linewidths", Q::Dimensionless},
      {"synthesis", "seed", Q::Integer},
      {"synthesis", "optical_spring", Q::Boolean},

      {"thermal", "enabled", Q::Boolean},
      {"thermal", "T_ref", Q::Temperature},
      {"thermal", "heating_rise", Q::Temperature},
      {"thermal", "heating_n_ref", Q::Dimensionless},

      {"eit", "omega_LI", Q::Frequency},
      {"eit", "points", Q::Integer},
      {"eit", "span_widths", Q::Dimensionless},

      {"analysis", "monte_carlo_draws", Q::Integer},
      {"analysis", "errors", Q::Text},

      {"run", "output_dir", Q::Text},
      {"run", "parallelism", Q::Integer},
  };
}

namespace {

/// Exactly one of two alternative keys must be present.
const char* one_of(const StructuredConfig& c, const char* section, const char* a, const char* b) {
  const bool ha = c.has(section, a), hb = c.has(section, b);
  if (ha && hb) c.fail(section, b, std::string("give either ") + a + " or " + b + ", not both");
  if (!ha && !hb)
    throw ConfigError(c.source(), 0,
                      std::string("[") + section + "] needs " + a + " or " + b);
  return ha ? a : b;
}

double positive_key(const StructuredConfig& c, const char* section, const char* key) {
  const double v = c.number(section, key);
  if (!(v > 0.0)) c.fail(section, key, "must be positive");
  return v;
}

double fraction_key(const StructuredConfig& c, const char* section, const char* key) {
  if (!c.has(section, key)) return 1.0;
  const double v = c.number(section, key);
  if (!(v > 0.0 && v <= 1.0)) c.fail(section, key, "must lie in (0, 1]");
  return v;
}

int count_key(const StructuredConfig& c, const char* section, const char* key, int fallback,
              int minimum) {
  const int v = c.integer_or(section, key, fallback);
  if (v < minimum) c.fail(section, key, "must be at least " + std::to_string(minimum));
  return v;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source) {
  const StructuredConfig c = StructuredConfig::parse(text, source, experiment_schema());

  const char* freq_key = one_of(c, "device", "omega_o", "lambda");
  const double omega_o = freq_key == std::string("omega_o")
                             ? positive_key(c, "device", "omega_o")
                             : kTwoPi * PhysicalConstants::c / positive_key(c, "device", "lambda");
  const double kappa = positive_key(c, "device", "kappa");
  double kappa_e = 0.0;
  if (one_of(c, "device", "kappa_e", "contrast") == std::string("kappa_e")) {
    kappa_e = positive_key(c, "device", "kappa_e");
  } else {
    try {
      kappa_e = kappa_e_from_contrast(c.number("device", "contrast"), kappa);
    } catch (const std::invalid_argument& e) {
      c.fail("device", "contrast", e.what());
    }
  }
  const double omega_m = positive_key(c, "device", "omega_m");
  const double gamma_i0 = one_of(c, "device", "gamma_i", "Q_m") == std::string("gamma_i")
                              ? positive_key(c, "device", "gamma_i")
                              : omega_m / positive_key(c, "device", "Q_m");
  const double mass = positive_key(c, "device", "mass");
  const double g = c.number("device", "g");
  if (!(g >= 0.0)) c.fail("device", "g", "must be non-negative");
  const double T_b = positive_key(c, "device", "T_b");

  std::optional<CavityParams> cavity;
  try {
    cavity.emplace(omega_o, kappa, kappa_e);
  } catch (const std::invalid_argument& e) {
    c.fail("device", c.has("device", "kappa_e") ? "kappa_e" : "contrast", e.what());
  }
  ExperimentConfig cfg(SystemParams{*cavity, MechParams(omega_m, gamma_i0, mass), g, T_b});
  cfg.text = text;
  cfg.source = source;

  cfg.detuning = c.number_or("drive", "detuning", omega_m);

  const bool has_nc = c.has("sweep", "n_c"), has_p = c.has("sweep", "P_in");
  if (has_nc && has_p) c.fail("sweep", "P_in", "give either n_c or P_in, not both");
  if (has_nc || has_p) {
    const char* key = has_nc ? "n_c" : "P_in";
    cfg.axis = has_nc ? SweepAxis::PhotonNumber : SweepAxis::InputPower;
    cfg.sweep = c.numbers("sweep", key);
    for (double v : cfg.sweep)
      if (!(has_nc ? v >= 0.0 : v > 0.0)) c.fail("sweep", key, "sweep values must be positive");
  }

  DetectorParams& d = cfg.detector;
  d.responsivity = c.number_or("detection", "responsivity", d.responsivity);
  d.transimpedance_gain = c.number_or("detection", "transimpedance_gain", d.transimpedance_gain);
  d.load = c.number_or("detection", "load", d.load);
  d.electronic_gain = c.number_or("detection", "electronic_gain", d.electronic_gain);
  d.edfa_gain = c.number_or("detection", "edfa_gain", d.edfa_gain);
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, c.line_of("detection", "electronic_gain"), e.what());
  }
  cfg.L_0 = fraction_key(c, "detection", "L_0");
  cfg.L_1 = fraction_key(c, "detection", "L_1");
  cfg.excess_ratio = c.number_or("detection", "excess_ratio", 0.0);
  if (!(cfg.excess_ratio >= 0.0)) c.fail("detection", "excess_ratio", "must be non-negative");

  cfg.averages = count_key(c, "synthesis", "averages", cfg.averages, 1);
  cfg.points = count_key(c, "synthesis", "points", cfg.points, 16);
  cfg.span_linewidths = c.number_or("synthesis", "span_linewidths", cfg.span_linewidths);
  if (!(cfg.span_linewidths >= 4.0)) c.fail("synthesis", "span_linewidths", "must be at least 4");
  const int seed = c.integer_or("synthesis", "seed", 1);
  if (seed < 0) c.fail("synthesis", "seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.optical_spring = c.flag_or("synthesis", "optical_spring", false);

  cfg.thermal = c.flag_or("thermal", "enabled", false);
  cfg.T_ref = c.number_or("thermal", "T_ref", T_b);
  cfg.heating_rise = c.number_or("thermal", "heating_rise", cfg.heating_rise);
  cfg.heating_n_ref = c.number_or("thermal", "heating_n_ref", cfg.heating_n_ref);
  if (!(cfg.heating_rise >= 0.0)) c.fail("thermal", "heating_rise", "must be non-negative");
  if (!(cfg.heating_n_ref > 0.0)) c.fail("thermal", "heating_n_ref", "must be positive");

  cfg.omega_LI = c.number_or("eit", "omega_LI", cfg.omega_LI);
  if (!(cfg.omega_LI > 0.0)) c.fail("eit", "omega_LI", "must be positive");
  cfg.eit_points = count_key(c, "eit", "points", cfg.eit_points, 16);
  cfg.eit_span_widths = c.number_or("eit", "span_widths", cfg.eit_span_widths);
  if (!(cfg.eit_span_widths >= 2.0)) c.fail("eit", "span_widths", "must be at least 2");

  cfg.monte_carlo_draws = count_key(c, "analysis", "monte_carlo_draws", 0, 0);
  const std::string errors = c.text_or("analysis", "errors", "quoted");
  if (errors != "quoted" && errors != "fit") c.fail("analysis", "errors", "expected quoted or fit");
  cfg.quoted_errors = errors == "quoted";

  cfg.output_dir = c.text_or("run", "output_dir", "");
  cfg.parallelism = count_key(c, "run", "parallelism", 0, 0);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), path);
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string default_output_dir() {
  if (const char* env = std::getenv("OMCOOL_OUTPUT_DIR"); env && *env) return env;
  return "omcool_out";
}

std::string resolve_output_dir(const std::optional<std::string>& explicit_dir,
                               const ExperimentConfig& config) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (!config.output_dir.empty()) return config.output_dir;
  return default_output_dir();
}

ModelPoint evaluate_point(const ExperimentConfig& config, double sweep_value) {
  const SystemParams& sys = config.system;
  const CavityParams& cav = sys.cavity;
  ModelPoint p;
  if (config.axis == SweepAxis::InputPower) {
    p.P_in = sweep_value;
    p.drive = intracavity_state(p.P_in, config.detuning, cav);
  } else {
    p.P_in = input_power_for_photons(sweep_value, config.detuning, cav);
    p.drive = intracavity_state(p.P_in, config.detuning, cav);
  }
  p.n_c = p.drive.n_c;
  p.G = sys.g * std::sqrt(p.n_c);
  p.gamma_OM = backaction_rate(sys.g, p.n_c, cav.kappa());

  const double omega_m = sys.mech.omega_m();
  p.omega_m = omega_m;
  if (config.optical_spring)
    p.omega_m += optical_spring_shift(p.G, config.detuning, omega_m, cav.kappa());

  p.T = sys.T_b;
  p.gamma_i = sys.mech.gamma_i0();
  if (config.thermal) {
    DampingDecomposition d = DampingDecomposition::synthetic_default(sys.mech.gamma_i0(), config.T_ref);
    d.temperature = linear_heating(config.T_ref, config.heating_rise, config.heating_n_ref);
    const DampingBreakdown b = total_intrinsic_damping(p.n_c, d);
    p.T = b.T;
    p.gamma_i = b.total;
  }
  p.n_b = thermal_occupancy(p.T, omega_m);

  const CoolingResult heated = cooled_occupancy(p.n_b, p.gamma_i, p.gamma_OM, cav.kappa(), omega_m);
  const CoolingResult ideal = cooled_occupancy(thermal_occupancy(sys.T_b, omega_m),
                                               sys.mech.gamma_i0(), p.gamma_OM, cav.kappa(), omega_m);
  p.C = heated.C;
  p.n_bar = heated.n_bar;
  p.n_bar_ideal = ideal.n_bar;
  return p;
}

std::string describe_config(const ExperimentConfig& c) {
  const auto hz = [](double w) { return w / kTwoPi; };
  std::ostringstream os;
  os << "source: " << c.source << "\n"
     << "config hash: " << config_hash(c.text) << "\n"
     << "omega_o/2pi = " << hz(c.system.cavity.omega_o()) << " Hz, kappa/2pi = "
     << hz(c.system.cavity.kappa()) << " Hz, kappa_e/kappa = "
     << c.system.cavity.kappa_e() / c.system.cavity.kappa() << "\n"
     << "omega_m/2pi = " << hz(c.system.mech.omega_m()) << " Hz, gamma_i/2pi = "
     << hz(c.system.mech.gamma_i0()) << " Hz, g/2pi = " << hz(c.system.g) << " Hz, T_b = "
     << c.system.T_b << " K\n"
     << "sweep: "
     << (c.axis == SweepAxis::None ? "none"
         : c.axis == SweepAxis::PhotonNumber ? "n_c"
                                             : "P_in")
     << " (" << c.sweep.size() << " points)\n"
     << "thermal models: " << (c.thermal ? "on" : "off") << "\n";
  return os.str();
}

}  // namespace omcool

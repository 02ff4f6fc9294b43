#include "omcool/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "omcool/analysis.hpp"
#include "omcool/lorentz_fit.hpp"
#include "omcool/quantum_spectra.hpp"
#include "omcool/rng.hpp"
#include "omcool/spectrum_io.hpp"

namespace omcool {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTableSchema = "omcool-table/1";
constexpr const char* kLedgerName = "calibration.txt";

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return stem + "_" + buf + ext;
}

std::string num(double v) { return format_double(v); }
std::string hz(double w) { return format_double(rad_to_hz(w)); }

int worker_count(int requested, std::size_t tasks) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t want = requested > 0 ? static_cast<std::size_t>(requested) : hw;
  return static_cast<int>(std::max<std::size_t>(1, std::min(want, tasks)));
}

/// Runs task(i) for i in [0, n) on up to `parallelism` threads. Failures are
/// captured per index; results are consumed in index order by the caller.
std::vector<std::exception_ptr> parallel_for(std::size_t n, int parallelism,
                                             const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int workers = worker_count(parallelism, n);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return failures;
}

std::string what_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown error";
  }
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> metadata;
};

void write_table(const std::string& path, const Table& t) {
  std::string out = std::string("# schema: ") + kTableSchema + "\n# table: " + t.name + "\n";
  for (const auto& [k, v] : t.metadata) out += "# " + k + ": " + v + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
    out += "\n";
  }
  write_text_file(path, out);
}

struct Manifest {
  std::string command;
  std::string hash;
  std::string started = utc_now();
  std::vector<std::pair<std::string, std::string>> outputs;  // step, file
  std::vector<std::string> errors;

  void add(const std::string& step, const std::string& file) { outputs.emplace_back(step, file); }
};

std::string write_manifest(const std::string& dir, const Manifest& m) {
  json j;
  j["tool"] = "omcool";
  j["version"] = tool_version();
  j["command"] = m.command;
  j["config_hash"] = m.hash;
  j["started_utc"] = m.started;
  j["finished_utc"] = utc_now();
  j["outputs"] = json::array();
  for (const auto& [step, file] : m.outputs) j["outputs"].push_back({{"step", step}, {"file", file}});
  j["errors"] = m.errors;
  const std::string path = (fs::path(dir) / "manifest.json").string();
  write_text_file(path, j.dump(2) + "\n");
  return path;
}

RunReport finish(const std::string& dir, const Manifest& m, int code) {
  RunReport r;
  r.exit_code = code;
  r.output_dir = dir;
  for (const auto& o : m.outputs) r.outputs.push_back(o.second);
  r.errors = m.errors;
  r.manifest = write_manifest(dir, m);
  return r;
}

void require_resonant_drive(const ExperimentConfig& cfg, const char* command) {
  const double wm = cfg.system.mech.omega_m();
  if (std::abs(cfg.detuning - wm) > 1e-9 * wm)
    throw ConfigError(cfg.source, 0,
                      std::string(command) + " models the drive at detuning = omega_m; "
                                             "[drive] detuning differs");
}

/// Detection budget for one chain: loss L between cavity and detector,
/// excess noise as a multiple of the amplified shot-noise power.
struct ChainPoint {
  NoiseBudget budget;
  double signal_scale = 0.0;
  double n_bar = 0.0;  // occupancy carried by the spectrum, gamma_i n_b / gamma
};

ChainPoint chain_point(const CavityParams& cav, const ModelPoint& p, double detuning, double L,
                       double excess_ratio, const DetectorParams& det) {
  const double P_in = input_power_for_photons(p.n_c, detuning, cav);
  const double gamma = p.gamma_i + p.gamma_OM;
  ChainPoint c;
  c.n_bar = p.gamma_i * p.n_b / gamma;
  c.signal_scale = L * L * sideband_signal_scale(P_in, cav.omega_o());
  BudgetInputs in;
  in.gamma_total = gamma;
  in.omega_o = cav.omega_o();
  in.P_SB_prime = c.signal_scale * (cav.kappa_e() / (2.0 * cav.kappa())) * p.gamma_OM * c.n_bar;
  in.P_in_prime = L * P_in * std::norm(cavity_transmission(detuning, cav));
  in.S_excess = std::sqrt(excess_ratio) * amplified_shot_noise_level(in.P_in_prime, cav.omega_o(), det);
  in.n_bar = c.n_bar;
  c.budget = snr_budget(in, det);
  return c;
}

/// Forward-constructed taper calibration reproducing L_0 and L_1.
CalibrationRecord calibration_for(double L_0, double L_1, const DetectorParams& det) {
  CalibrationRecord r;
  r.P_0 = 1e-3;
  r.P_1 = 1e-3;
  r.L_taper = 0.9;
  r.P_RSA_0 = 1e-4;
  r.P_RSA_1 = 1e-4;
  r.P_RSA_0_prime = r.P_RSA_0 * L_0 * L_1 / r.L_taper;
  r.P_RSA_1_prime = r.P_RSA_1 * L_0 * L_1 / r.L_taper;
  r.dlambda_1 = 50e-12;
  r.dlambda_0 = r.dlambda_1 * L_0 / L_1;
  r.G_e = det.electronic_gain;
  r.G_EDFA = det.edfa_gain;
  r.R_L = det.load;
  return r;
}

std::vector<KeySpec> ledger_schema() {
  using Q = Quantity;
  return {
      {"global", "omega_o", Q::Frequency},
      {"global", "kappa", Q::Frequency},
      {"global", "kappa_e", Q::Frequency},
      {"global", "G_e", Q::VoltPerWatt},
      {"global", "G_EDFA", Q::Dimensionless},
      {"global", "R_L", Q::Ohm},
      {"global", "L_1", Q::Dimensionless},
      {"calibration", "P_0", Q::Power},
      {"calibration", "P_1", Q::Power},
      {"calibration", "L_taper", Q::Dimensionless},
      {"calibration", "P_RSA_0", Q::Power},
      {"calibration", "P_RSA_0_prime", Q::Power},
      {"calibration", "P_RSA_1", Q::Power},
      {"calibration", "P_RSA_1_prime", Q::Power},
      {"calibration", "dlambda_0", Q::Length},
      {"calibration", "dlambda_1", Q::Length},
      {"calibration", "tolerance", Q::Dimensionless},
      {"point.*", "spectrum", Q::Text},
      {"point.*", "background", Q::Text},
      {"point.*", "n_c", Q::Dimensionless},
      {"point.*", "P_in", Q::Power},
      {"point.*", "detuning", Q::Frequency},
      {"point.*", "gamma_i", Q::Frequency},
  };
}

std::string ledger_text(const ExperimentConfig& cfg, const std::vector<ModelPoint>& points) {
  const CavityParams& cav = cfg.system.cavity;
  const DetectorParams& det = cfg.detector;
  const CalibrationRecord rec = calibration_for(cfg.L_0, cfg.L_1, det);
  std::ostringstream os;
  os << "# calibration ledger written by omcool simulate\n"
     << "[global]\n"
     << "omega_o = " << hz(cav.omega_o()) << " Hz\n"
     << "kappa = " << hz(cav.kappa()) << " Hz\n"
     << "kappa_e = " << hz(cav.kappa_e()) << " Hz\n"
     << "G_e = " << num(det.electronic_gain) << " V/W\n"
     << "G_EDFA = " << num(det.edfa_gain) << "\n"
     << "R_L = " << num(det.load) << " Ohm\n\n"
     << "[calibration]\n"
     << "P_0 = " << num(rec.P_0) << " W\n"
     << "P_1 = " << num(rec.P_1) << " W\n"
     << "L_taper = " << num(rec.L_taper) << "\n"
     << "P_RSA_0 = " << num(rec.P_RSA_0) << " W\n"
     << "P_RSA_0_prime = " << num(rec.P_RSA_0_prime) << " W\n"
     << "P_RSA_1 = " << num(rec.P_RSA_1) << " W\n"
     << "P_RSA_1_prime = " << num(rec.P_RSA_1_prime) << " W\n"
     << "dlambda_0 = " << num(rec.dlambda_0) << " m\n"
     << "dlambda_1 = " << num(rec.dlambda_1) << " m\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ModelPoint& p = points[i];
    char section[32];
    std::snprintf(section, sizeof section, "point.%03zu", i);
    os << "\n[" << section << "]\n"
       << "spectrum = " << indexed("spectrum", i, ".csv") << "\n"
       << "background = " << indexed("background", i, ".csv") << "\n"
       << "n_c = " << num(p.n_c) << "\n"
       << "P_in = " << num(p.P_in) << " W\n"
       << "detuning = " << hz(cfg.detuning) << " Hz\n"
       << "gamma_i = " << hz(p.gamma_i) << " Hz\n";
  }
  return os.str();
}

std::vector<ModelPoint> model_points(const ExperimentConfig& cfg) {
  std::vector<ModelPoint> pts;
  for (double v : cfg.sweep) pts.push_back(evaluate_point(cfg, v));
  return pts;
}

RunReport simulate_into(const ExperimentConfig& cfg, const std::string& dir, Manifest& m) {
  require_resonant_drive(cfg, "simulate");
  const std::vector<ModelPoint> points = model_points(cfg);
  if (points.empty()) return finish(dir, m, kExitOk);

  fs::create_directories(fs::path(dir) / "spectra");
  fs::create_directories(fs::path(dir) / "truth");
  const CavityParams& cav = cfg.system.cavity;

  std::vector<double> truth_n(points.size());
  const auto failures = parallel_for(points.size(), cfg.parallelism, [&](std::size_t i) {
    const ModelPoint& p = points[i];
    const double gamma = p.gamma_i + p.gamma_OM;
    const FrequencyGrid grid =
        FrequencyGrid::centered(p.omega_m, 0.5 * cfg.span_linewidths * gamma, cfg.points);
    const ScatteringElements el = scattering_elements(cav, p.omega_m, p.gamma_i, p.G, grid);
    const PhotocurrentPSD psd = photocurrent_psd(el, p.n_b);
    const ChainPoint chain = chain_point(cav, p, cfg.detuning, cfg.L_1, cfg.excess_ratio, cfg.detector);

    const std::uint64_t seed = split_seed(cfg.seed, 2 * i);
    const std::uint64_t bg_seed = split_seed(cfg.seed, 2 * i + 1);
    const SyntheticSpectrum syn = synthesize_rsa_spectrum(
        psd, cfg.detector, chain.budget, chain.signal_scale, seed, cfg.averages,
        SpectrumTruth{psd.n_bar, gamma, p.omega_m});
    const Spectrum bg = synthesize_background(grid, chain.budget, bg_seed, cfg.averages);
    truth_n[i] = psd.n_bar;

    const std::map<std::string, std::string> meta{{"point", std::to_string(i)},
                                                  {"averages", std::to_string(cfg.averages)},
                                                  {"rng_seed", std::to_string(seed)}};
    write_spectrum_csv((fs::path(dir) / "spectra" / indexed("spectrum", i, ".csv")).string(),
                       syn.spectrum, meta);
    std::map<std::string, std::string> bg_meta = meta;
    bg_meta["rng_seed"] = std::to_string(bg_seed);
    bg_meta["kind"] = "background";
    write_spectrum_csv((fs::path(dir) / "spectra" / indexed("background", i, ".csv")).string(), bg,
                       bg_meta);

    json t;
    t["point"] = i;
    t["n_c"] = p.n_c;
    t["P_in_W"] = p.P_in;
    t["n_bar"] = psd.n_bar;
    t["n_bar_with_floor"] = p.n_bar;
    t["gamma_Hz"] = rad_to_hz(gamma);
    t["gamma_i_Hz"] = rad_to_hz(p.gamma_i);
    t["omega_m_Hz"] = rad_to_hz(p.omega_m);
    t["T_K"] = p.T;
    t["SNR_predicted"] = chain.budget.SNR_predicted;
    write_text_file((fs::path(dir) / "truth" / indexed("truth", i, ".json")).string(),
                    t.dump(2) + "\n");
  });
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  for (std::size_t i = 0; i < points.size(); ++i) {
    m.add("simulate", "spectra/" + indexed("spectrum", i, ".csv"));
    m.add("simulate", "spectra/" + indexed("background", i, ".csv"));
    m.add("simulate", "truth/" + indexed("truth", i, ".json"));
  }

  write_text_file((fs::path(dir) / kLedgerName).string(), ledger_text(cfg, points));
  m.add("simulate", kLedgerName);

  Table model{"cooling_model", {"index", "n_c", "P_in_W", "T_K", "n_b", "gamma_i_Hz", "gamma_OM_Hz",
                                "C", "n_bar", "n_bar_ideal", "n_bar_spectrum"}, {}, {}};
  model.metadata["config_hash"] = m.hash;
  model.metadata["thermal_models"] = cfg.thermal ? "on" : "off";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ModelPoint& p = points[i];
    model.rows.push_back({std::to_string(i), num(p.n_c), num(p.P_in), num(p.T), num(p.n_b),
                          hz(p.gamma_i), hz(p.gamma_OM), num(p.C), num(p.n_bar),
                          num(p.n_bar_ideal), num(truth_n[i])});
  }
  write_table((fs::path(dir) / "cooling_model.csv").string(), model);
  m.add("simulate", "cooling_model.csv");
  return finish(dir, m, kExitOk);
}

struct AnalysisRow {
  std::size_t index = 0;
  std::string section;
  double n_c = 0.0, P_in = 0.0;
  double n_bar = NAN, sigma = NAN, rel = NAN, mc = NAN;
  double gamma = NAN, omega_m = NAN, C = NAN, T_b = NAN;
  std::string status = "ok";
  bool ok() const { return status == "ok"; }
  bool failed() const { return status.rfind("error", 0) == 0; }
};

std::size_t point_index(const std::string& section) {
  try {
    return static_cast<std::size_t>(std::stoul(section.substr(6)));
  } catch (const std::exception&) {
    return 0;
  }
}

std::vector<AnalysisRow> analyze_rows(const std::string& spectra_dir, const std::string& ledger_path,
                                      const AnalyzeOptions& opts) {
  StructuredConfig L = [&] {
    try {
      return StructuredConfig::load(ledger_path, ledger_schema());
    } catch (const ConfigError& e) {
      throw DataError(std::string("calibration ledger: ") + e.what());
    }
  }();

  std::optional<CavityParams> cav;
  DetectorParams det;
  double L_1 = 1.0;
  try {
    cav.emplace(L.number("global", "omega_o"), L.number("global", "kappa"),
                L.number("global", "kappa_e"));
    det.electronic_gain = L.number("global", "G_e");
    det.edfa_gain = L.number_or("global", "G_EDFA", 1.0);
    det.load = L.number_or("global", "R_L", 50.0);
    det.validate();
    if (L.has("calibration", "P_0")) {
      CalibrationRecord rec;
      rec.P_0 = L.number("calibration", "P_0");
      rec.P_1 = L.number("calibration", "P_1");
      rec.L_taper = L.number("calibration", "L_taper");
      rec.P_RSA_0 = L.number("calibration", "P_RSA_0");
      rec.P_RSA_0_prime = L.number("calibration", "P_RSA_0_prime");
      rec.P_RSA_1 = L.number("calibration", "P_RSA_1");
      rec.P_RSA_1_prime = L.number("calibration", "P_RSA_1_prime");
      rec.dlambda_0 = L.number("calibration", "dlambda_0");
      rec.dlambda_1 = L.number("calibration", "dlambda_1");
      rec.tolerance = L.number_or("calibration", "tolerance", rec.tolerance);
      L_1 = extract_insertion_losses(rec).L_1;
    } else {
      L_1 = L.number_or("global", "L_1", 1.0);
    }
  } catch (const std::exception& e) {
    throw DataError(std::string("calibration ledger: ") + e.what());
  }

  InputErrors errors = InputErrors::quoted();
  if (!opts.quoted_errors) {
    errors.omega_m.reset();
    errors.gamma.reset();
    errors.P_RSA.reset();
  }

  const std::vector<std::string> sections = L.sections_with_prefix("point.");
  std::vector<AnalysisRow> rows(sections.size());
  const auto failures = parallel_for(sections.size(), opts.parallelism, [&](std::size_t i) {
    AnalysisRow& row = rows[i];
    row.section = sections[i];
    row.index = point_index(sections[i]);
    row.n_c = L.number_or(sections[i], "n_c", NAN);
    row.P_in = L.number(sections[i], "P_in");
    const double detuning = L.number(sections[i], "detuning");
    const double gamma_i = L.number(sections[i], "gamma_i");
    if (!L.has(sections[i], "background"))
      throw DataError(sections[i] + ": no background file listed");
    const std::string sp = (fs::path(spectra_dir) / L.text(sections[i], "spectrum")).string();
    const std::string bp = (fs::path(spectra_dir) / L.text(sections[i], "background")).string();
    if (!fs::exists(bp)) throw DataError("missing background file " + bp);
    const Spectrum s = read_spectrum_csv(sp);
    const Spectrum b = read_spectrum_csv(bp);
    const LorentzFit fit = fit_lorentzian(subtract_background(s, b));
    row.gamma = fit.gamma;
    row.omega_m = fit.omega_m;
    if (!fit.converged) {
      row.status = "flagged: fit did not converge";
      return;
    }
    if (!(fit.gamma > gamma_i)) {
      row.status = "flagged: gamma <= gamma_i";
      return;
    }
    LorentzFit corrected = fit;
    corrected.integrated_power /= L_1 * L_1;
    corrected.integrated_power_sigma /= L_1 * L_1;
    const ThermometryResult r =
        phonon_number(corrected, det, *cav, detuning, row.P_in, gamma_i, errors);
    row.n_bar = r.n_bar;
    row.sigma = r.n_bar_sigma;
    row.rel = r.relative_uncertainty;
    row.C = r.C;
    row.T_b = r.T_b;
    if (opts.monte_carlo_draws > 1)
      row.mc = phonon_uncertainty_monte_carlo(r.ledger, opts.monte_carlo_draws,
                                              split_seed(0x5eed, row.index));
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!failures[i]) continue;
    rows[i].section = sections[i];
    rows[i].index = point_index(sections[i]);
    rows[i].status = "error: " + what_of(failures[i]);
  }
  return rows;
}

std::string csv_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

RunReport analyze_into(const std::string& spectra_dir, const std::string& ledger_path,
                       const std::string& dir, const AnalyzeOptions& opts, Manifest& m,
                       std::vector<AnalysisRow>* rows_out) {
  const std::vector<AnalysisRow> rows = analyze_rows(spectra_dir, ledger_path, opts);

  Table all{"thermometry",
            {"index", "n_c", "P_in_W", "n_bar", "n_bar_sigma", "relative_uncertainty",
             "mc_relative_uncertainty", "gamma_Hz", "omega_m_Hz", "C", "T_b_K", "status"},
            {}, {}};
  Table agg{"cooling_curve", {"index", "n_c", "n_bar", "n_bar_sigma"}, {}, {}};
  std::size_t failed = 0;
  for (const auto& r : rows) {
    all.rows.push_back({std::to_string(r.index), num(r.n_c), num(r.P_in), num(r.n_bar),
                        num(r.sigma), num(r.rel), num(r.mc), hz(r.gamma), hz(r.omega_m), num(r.C),
                        num(r.T_b), csv_text(r.status)});
    if (r.ok()) agg.rows.push_back({std::to_string(r.index), num(r.n_c), num(r.n_bar), num(r.sigma)});
    if (r.failed()) {
      ++failed;
      m.errors.push_back(r.section + ": " + r.status.substr(7));
    }
  }
  all.metadata["errors"] = opts.quoted_errors ? "quoted" : "fit";
  write_table((fs::path(dir) / "thermometry.csv").string(), all);
  write_table((fs::path(dir) / "cooling_curve.csv").string(), agg);
  m.add("analyze", "thermometry.csv");
  m.add("analyze", "cooling_curve.csv");
  if (rows_out) *rows_out = rows;

  const int code = failed == 0 ? kExitOk : failed == rows.size() ? kExitData : kExitPartial;
  return finish(dir, m, code);
}

}  // namespace

RunReport cmd_simulate(const ExperimentConfig& config, const std::string& output_dir) {
  Manifest m;
  m.command = "simulate";
  m.hash = config_hash(config.text);
  return simulate_into(config, output_dir, m);
}

RunReport cmd_analyze(const std::string& spectra_dir, const std::string& calibration_path,
                      const std::string& output_dir, const AnalyzeOptions& options) {
  Manifest m;
  m.command = "analyze";
  m.hash = config_hash(read_text_file(calibration_path));
  return analyze_into(spectra_dir, calibration_path, output_dir, options, m, nullptr);
}

RunReport cmd_eit(const ExperimentConfig& cfg, const std::string& dir) {
  Manifest m;
  m.command = "eit";
  m.hash = config_hash(cfg.text);
  const std::vector<ModelPoint> points = model_points(cfg);
  if (points.empty()) return finish(dir, m, kExitOk);

  const CavityParams& cav = cfg.system.cavity;
  EitOptions opts;
  opts.omega_LI = cfg.omega_LI;
  opts.optical_spring = cfg.optical_spring;

  std::vector<EitSpectrum> spectra(points.size());
  const auto failures = parallel_for(points.size(), cfg.parallelism, [&](std::size_t i) {
    const ModelPoint& p = points[i];
    const double expected = p.gamma_i + 4.0 * p.G * p.G / cav.kappa();
    const FrequencyGrid grid =
        FrequencyGrid::centered(p.omega_m, 0.5 * cfg.eit_span_widths * expected, cfg.eit_points);
    spectra[i] = eit_reflection(cav, cfg.system.mech.omega_m(), p.gamma_i, p.G, cfg.detuning, grid, opts);

    Table t{"eit", {"two_photon_detuning_Hz", "reflection", "phase_rad", "group_delay_s"}, {}, {}};
    t.metadata["point"] = std::to_string(i);
    t.metadata["n_c"] = num(p.n_c);
    const EitSpectrum& e = spectra[i];
    for (std::size_t k = 0; k < e.grid.size(); ++k)
      t.rows.push_back({hz(e.grid[k]), num(e.reflection[k]), num(e.phase[k]), num(e.group_delay[k])});
    write_table((fs::path(dir) / "eit" / indexed("eit", i, ".csv")).string(), t);
  });
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  Table widths{"eit_widths",
               {"index", "n_c", "G_Hz", "gamma_i_Hz", "dip_width_Hz", "expected_width_Hz",
                "dip_center_Hz", "delay_valid", "reportable"},
               {}, {}};
  widths.metadata["omega_LI_Hz"] = hz(cfg.omega_LI);
  widths.metadata["reportable"] = "dip width >= 2 omega_LI";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ModelPoint& p = points[i];
    const EitSpectrum& e = spectra[i];
    const double expected = p.gamma_i + 4.0 * p.G * p.G / cav.kappa();
    const bool reportable = e.dip_width > 0.0 && e.dip_width >= 2.0 * cfg.omega_LI;
    widths.rows.push_back({std::to_string(i), num(p.n_c), hz(p.G), hz(p.gamma_i), hz(e.dip_width),
                           hz(expected), hz(e.dip_center), e.delay_valid ? "1" : "0",
                           reportable ? "1" : "0"});
    m.add("eit", "eit/" + indexed("eit", i, ".csv"));
  }
  write_table((fs::path(dir) / "eit_widths.csv").string(), widths);
  m.add("eit", "eit_widths.csv");
  return finish(dir, m, kExitOk);
}

RunReport cmd_budget(const ExperimentConfig& cfg, const std::string& dir) {
  require_resonant_drive(cfg, "budget");
  Manifest m;
  m.command = "budget";
  m.hash = config_hash(cfg.text);
  const std::vector<ModelPoint> points = model_points(cfg);
  if (points.empty()) return finish(dir, m, kExitOk);

  const CavityParams& cav = cfg.system.cavity;
  const CavityParams over(cav.omega_o(), cav.kappa(), cav.kappa());
  Table t{"noise_budget",
          {"index", "n_c", "P_in_W", "n_bar", "C", "SNR_predicted", "SNR_shot", "n_imp_modeled",
           "n_imp_shot_limited", "n_imp_overcoupled", "n_imp_overcoupled_lossless"},
          {}, {}};
  t.metadata["L_1"] = num(cfg.L_1);
  t.metadata["excess_ratio"] = num(cfg.excess_ratio);
  t.metadata["n_imp_units"] = "phonons";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ModelPoint& p = points[i];
    const ChainPoint modeled = chain_point(cav, p, cfg.detuning, cfg.L_1, cfg.excess_ratio, cfg.detector);
    const ChainPoint shot = chain_point(cav, p, cfg.detuning, cfg.L_1, 0.0, cfg.detector);
    const ChainPoint oc = chain_point(over, p, cfg.detuning, cfg.L_1, 0.0, cfg.detector);
    const ChainPoint ideal = chain_point(over, p, cfg.detuning, 1.0, 0.0, cfg.detector);
    t.rows.push_back({std::to_string(i), num(p.n_c), num(p.P_in), num(p.n_bar), num(p.C),
                      num(modeled.budget.SNR_predicted), num(modeled.budget.SNR_shot),
                      num(modeled.budget.n_imp), num(shot.budget.n_imp), num(oc.budget.n_imp),
                      num(ideal.budget.n_imp)});
  }
  write_table((fs::path(dir) / "noise_budget.csv").string(), t);
  m.add("budget", "noise_budget.csv");
  return finish(dir, m, kExitOk);
}

RunReport cmd_cool_curve(const ExperimentConfig& cfg, const std::string& dir) {
  Manifest m;
  m.command = "cool-curve";
  m.hash = config_hash(cfg.text);
  const RunReport sim = simulate_into(cfg, dir, m);
  if (cfg.sweep.empty()) return sim;

  AnalyzeOptions opts;
  opts.quoted_errors = cfg.quoted_errors;
  opts.monte_carlo_draws = cfg.monte_carlo_draws;
  opts.parallelism = cfg.parallelism;
  std::vector<AnalysisRow> rows;
  const RunReport ana = analyze_into((fs::path(dir) / "spectra").string(),
                                     (fs::path(dir) / kLedgerName).string(), dir, opts, m, &rows);

  const std::vector<ModelPoint> points = model_points(cfg);
  Table t{"cool_curve",
          {"index", "n_c", "T_K", "n_bar_model", "n_bar_ideal", "n_bar_recovered", "n_bar_sigma",
           "status"},
          {}, {}};
  for (const auto& r : rows) {
    const bool known = r.index < points.size();
    const ModelPoint p = known ? points[r.index] : ModelPoint{};
    t.rows.push_back({std::to_string(r.index), num(r.n_c), num(known ? p.T : NAN),
                      num(known ? p.n_bar : NAN), num(known ? p.n_bar_ideal : NAN), num(r.n_bar),
                      num(r.sigma), csv_text(r.status)});
  }
  write_table((fs::path(dir) / "cool_curve.csv").string(), t);
  m.add("cool-curve", "cool_curve.csv");
  return finish(dir, m, ana.exit_code);
}

}  // namespace omcool

#pragma once

// Config-driven experiment runs: the sweep definition, per-point forward
// model, and the simulate / analyze / eit / budget / cool-curve drivers used
// by the command-line tool. Every driver writes CSV tables with '#' metadata
// lines and a JSON run manifest into its output directory.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omcool/config.hpp"
#include "omcool/constants.hpp"
#include "omcool/core_model.hpp"
#include "omcool/measurement_chain.hpp"

namespace omcool {

/// Exit codes shared by the drivers and the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitData = 2,
  kExitPartial = 3,
};

const char* tool_version();

enum class SweepAxis { None, PhotonNumber, InputPower };

struct ExperimentConfig {
  explicit ExperimentConfig(SystemParams params) : system(std::move(params)) {}

  SystemParams system;
  double detuning = 0.0;  // rad/s; defaults to omega_m

  SweepAxis axis = SweepAxis::None;
  std::vector<double> sweep;  // n_c values or input powers (W)

  DetectorParams detector;
  double L_0 = 1.0;           // insertion loss before the device
  double L_1 = 1.0;           // insertion loss from the device to the detector
  double excess_ratio = 0.0;  // S_excess^2 / (S_shot_amplified)^2

  int averages = 1000;
  int points = 2001;
  double span_linewidths = 20.0;  // analyzer span in units of the damped linewidth
  std::uint64_t seed = 1;
  bool optical_spring = false;

  bool thermal = false;
  double T_ref = 17.6;          // K
  double heating_rise = 13.2;   // K at heating_n_ref
  double heating_n_ref = 2000.0;

  double omega_LI = kTwoPi * 100e3;
  int eit_points = 2001;
  double eit_span_widths = 6.0;  // EIT span in units of the expected window width

  int monte_carlo_draws = 0;
  bool quoted_errors = true;

  std::string output_dir;  // empty: environment or built-in default
  int parallelism = 0;     // 0: hardware concurrency

  std::string text;    // verbatim config text
  std::string source;  // file name for diagnostics
};

std::vector<KeySpec> experiment_schema();

/// Validates every key, unit and cross-field constraint; throws ConfigError
/// with the offending line.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source);
ExperimentConfig load_experiment_config(const std::string& path);

/// 64-bit FNV-1a of the config text, hex encoded.
std::string config_hash(const std::string& text);

/// $OMCOOL_OUTPUT_DIR if set, else "omcool_out".
std::string default_output_dir();

/// Explicit path, else the config's [run] output_dir, else $OMCOOL_OUTPUT_DIR,
/// else "omcool_out".
std::string resolve_output_dir(const std::optional<std::string>& explicit_dir,
                               const ExperimentConfig& config);

/// Forward-model state at one sweep point.
struct ModelPoint {
  double n_c = 0.0;
  double P_in = 0.0;     // W at the cavity
  double T = 0.0;        // bath temperature used, K
  double n_b = 0.0;
  double gamma_i = 0.0;  // rad/s, including heating if enabled
  double gamma_OM = 0.0;
  double omega_m = 0.0;  // effective mechanical frequency
  double C = 0.0;
  double n_bar = 0.0;        // includes the quantum back-action floor
  double n_bar_ideal = 0.0;  // unheated bath, intrinsic damping only
  double G = 0.0;            // g sqrt(n_c)
  DriveState drive;
};

ModelPoint evaluate_point(const ExperimentConfig& config, double sweep_value);

struct RunReport {
  int exit_code = kExitOk;
  std::string output_dir;
  std::string manifest;
  std::vector<std::string> outputs;  // relative to output_dir
  std::vector<std::string> errors;
};

RunReport cmd_simulate(const ExperimentConfig& config, const std::string& output_dir);

struct AnalyzeOptions {
  bool quoted_errors = true;
  int monte_carlo_draws = 0;
  int parallelism = 0;
};

/// Reads the calibration ledger, fits each listed spectrum after background
/// subtraction and writes thermometry.csv (every row, with a status column)
/// and cooling_curve.csv (rows that passed). Per-file failures are reported
/// and the batch continues; the exit code is kExitPartial if any point
/// failed, kExitData if all did.
RunReport cmd_analyze(const std::string& spectra_dir, const std::string& calibration_path,
                      const std::string& output_dir, const AnalyzeOptions& options = {});

RunReport cmd_eit(const ExperimentConfig& config, const std::string& output_dir);
RunReport cmd_budget(const ExperimentConfig& config, const std::string& output_dir);

/// simulate followed by analyze, plus a merged model / recovered table.
RunReport cmd_cool_curve(const ExperimentConfig& config, const std::string& output_dir);

/// One-paragraph summary of a validated config.
std::string describe_config(const ExperimentConfig& config);

}  // namespace omcool

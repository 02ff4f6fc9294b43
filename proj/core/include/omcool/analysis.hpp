#pragma once

// Inverse pipeline: calibration bookkeeping, phonon-number thermometry from a
// fitted sideband line, and uncertainty propagation.

#include <cstdint>
#include <optional>
#include <vector>

#include "omcool/core_model.hpp"
#include "omcool/lorentz_fit.hpp"
#include "omcool/measurement_chain.hpp"
#include "omcool/spectrum.hpp"

namespace omcool {

/// (gamma_red + gamma_blue) / 2. Throws if gamma_blue <= 0.
double intrinsic_linewidth(double gamma_red, double gamma_blue);

struct CalibrationRecord {
  double P_0 = 0.0;  // W, taper input, switch path 0
  double P_1 = 0.0;  // W, switch path 1
  double L_taper = 0.0;
  double P_RSA_0 = 0.0;        // W, uncoupled
  double P_RSA_0_prime = 0.0;  // W, taper coupled to the device
  double P_RSA_1 = 0.0;
  double P_RSA_1_prime = 0.0;
  double dlambda_0 = 0.0;  // bistability shift, m
  double dlambda_1 = 0.0;
  double G_e = 0.0;        // V/W
  double G_EDFA = 1.0;
  double V_DC = 0.0;       // V
  double P_RSA_prime = 0.0;  // W, contemporaneous reading without the EDFA
  double R_L = 50.0;       // Ohm
  /// Allowed relative disagreement of the two L_0 L_1 estimates.
  double tolerance = 0.02;
};

struct InsertionLosses {
  double L_0 = 0.0;
  double L_1 = 0.0;
  double product = 0.0;           // L_0 L_1
  double product_mismatch = 0.0;  // relative difference of the two estimates
};

/// Solves P_0 L_0 / (P_1 L_1) = dlambda_0 / dlambda_1 and
/// L_0 L_1 = L_taper P'_RSA / P_RSA. Throws if the two product estimates
/// disagree beyond the record's tolerance or a loss falls outside (0, 1].
InsertionLosses extract_insertion_losses(const CalibrationRecord& record);

/// G_e = V_DC / P_RSA at zero attenuation.
double electronic_gain(double V_DC, double P_RSA);

/// beta = sqrt(2 P_Omega R_L) / (G_EDFA G_e P'_RSA).
double modulation_depth(double P_Omega, const CalibrationRecord& record);

struct Measured {
  double value = 0.0;
  double sigma = 0.0;  // absolute uncertainty entering the propagation
};

/// Every quantity that enters the phonon-number expression.
struct ThermometryLedger {
  Measured omega_o;
  Measured kappa;
  Measured kappa_e;
  Measured detuning;
  Measured omega_m;
  Measured gamma;
  Measured gamma_i;
  Measured P_in;
  Measured P_RSA;  // integrated line power at the analyzer, W
  double G_e = 1.0;
  double G_EDFA = 1.0;
  double R_L = 50.0;
};

/// Relative (fractional) input errors. Empty entries for the fitted line
/// quantities fall back to the fit's 95% interval.
struct InputErrors {
  double omega_o = 0.0;
  double kappa = 0.0;
  double kappa_e = 0.0;
  double detuning = 0.0;
  double gamma_i = 0.0;
  double P_in = 0.0;
  std::optional<double> omega_m;
  std::optional<double> gamma;
  std::optional<double> P_RSA;

  /// Input errors quoted for the measured device.
  static InputErrors quoted();
};

/// n = (2R_L/(G_e G_EDFA)^2)(P/(hbar w_o))(1/(k(gamma - gamma_i)))
///     (((D - w_m)^2 + (k/2)^2)/((k_e/2) P_in)).
/// Throws when gamma <= gamma_i.
double phonon_number_formula(const ThermometryLedger& ledger);

/// Quadrature sum of the first-order sensitivities (relative).
double phonon_uncertainty_analytic(const ThermometryLedger& ledger);

/// Relative standard deviation of n over `draws` independent normal
/// perturbations of the ledger entries.
double phonon_uncertainty_monte_carlo(const ThermometryLedger& ledger, int draws = 10000,
                                      std::uint64_t seed = 0x5eed);

struct ThermometryResult {
  double n_bar = 0.0;
  double n_bar_sigma = 0.0;  // absolute, from the analytic formula
  double relative_uncertainty = 0.0;
  double C = 0.0;            // (gamma - gamma_i) / gamma_i
  double n_b = 0.0;          // n_bar (1 + C)
  double T_b = 0.0;          // K
  ThermometryLedger ledger;
};

ThermometryResult phonon_number(const LorentzFit& fit, const DetectorParams& gains,
                                const CavityParams& cavity, double detuning, double P_in,
                                double gamma_i, const InputErrors& errors = {});

struct UncertaintyReport {
  double analytic = 0.0;     // relative
  double monte_carlo = 0.0;  // relative
};

UncertaintyReport phonon_uncertainty(const ThermometryResult& result, int draws = 10000,
                                     std::uint64_t seed = 0x5eed);

struct ThermometryPoint {
  double T_c = 0.0;  // cryostat, K
  double T_b = 0.0;  // inferred mode temperature, K
};

struct ThermometryCurve {
  std::vector<ThermometryPoint> points;
  bool plateau_detected = false;
  double plateau_level = 0.0;  // K, mean of the plateau segment
  double plateau_spread = 0.0; // K, standard deviation within the plateau
  double onset_T_c = 0.0;      // first T_c at which the mode follows the cryostat
  std::size_t plateau_count = 0;
};

/// Two-segment change-point fit: a constant plateau below the change point,
/// T_b = T_c above it, selected against the plain identity line by a BIC
/// penalty. Points are sorted by T_c. Throws with fewer than 3 points.
ThermometryCurve mode_thermometry_curve(std::vector<ThermometryPoint> points);

}  // namespace omcool

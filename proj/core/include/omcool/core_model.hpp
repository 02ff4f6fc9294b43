#pragma once

// Closed-form resolved-sideband cooling model: cavity/mechanics parameters,
// intracavity drive state, back-action damping and cooled occupancy.
//
// All rates and frequencies are angular (rad/s). Conversion from Hz happens at
// the configuration boundary.

#include <complex>
#include <optional>

namespace omcool {

class CavityParams {
 public:
  /// Throws std::invalid_argument unless 0 < kappa_e <= 2*kappa. When
  /// `stored_Q_o` is given it must agree with omega_o/kappa within 1%.
  CavityParams(double omega_o, double kappa, double kappa_e,
               std::optional<double> stored_Q_o = std::nullopt);

  double omega_o() const { return omega_o_; }
  double kappa() const { return kappa_; }
  double kappa_e() const { return kappa_e_; }
  /// Undetected loss channels, kappa - kappa_e/2.
  double kappa_prime() const { return kappa_ - 0.5 * kappa_e_; }
  double Q_o() const { return omega_o_ / kappa_; }

 private:
  double omega_o_;
  double kappa_;
  double kappa_e_;
};

class MechParams {
 public:
  /// Throws unless all inputs are positive. A stored Q_m must agree with
  /// omega_m/gamma_i0 within 1%.
  MechParams(double omega_m, double gamma_i0, double mass,
             std::optional<double> stored_Q_m = std::nullopt);

  double omega_m() const { return omega_m_; }
  double gamma_i0() const { return gamma_i0_; }
  double mass() const { return mass_; }
  double Q_m() const { return omega_m_ / gamma_i0_; }
  /// Zero-point amplitude sqrt(hbar / (2 m omega_m)); derived, never stored.
  double x_zpf() const;

 private:
  double omega_m_;
  double gamma_i0_;
  double mass_;
};

struct DriveState {
  double detuning = 0.0;  // omega_o - omega_l
  double P_in = 0.0;      // W at the cavity
  double N_in = 0.0;      // photons/s
  double n_c = 0.0;       // |alpha_0|^2
  std::complex<double> alpha_0{};
};

class BathState {
 public:
  BathState(double T_b, double omega_m);
  double T_b() const { return T_b_; }
  double n_b() const { return n_b_; }

 private:
  double T_b_;
  double n_b_;
};

struct CoolingResult {
  double gamma_i = 0.0;
  double gamma_OM = 0.0;
  double gamma_total = 0.0;
  double C = 0.0;
  /// n_b/(1+C) + n_min (default, floored).
  double n_bar = 0.0;
  /// gamma_i n_b / (gamma_i + gamma_OM); differs from n_bar by the n_min floor.
  double n_bar_unfloored = 0.0;
  double n_min = 0.0;
};

struct DecoherenceFigures {
  double tau = 0.0;    // s
  double N_osc = 0.0;  // coherent oscillation periods
};

/// Everything the forward models need about one device.
struct SystemParams {
  CavityParams cavity;
  MechParams mech;
  double g = 0.0;    // vacuum coupling rate, rad/s
  double T_b = 0.0;  // bath temperature, K
};

/// alpha_0 = -sqrt(kappa_e/2) sqrt(N_in) / (i Delta + kappa/2).
DriveState intracavity_state(double P_in, double detuning, const CavityParams& cavity);

/// Input power that produces `n_c` intracavity photons at `detuning`.
double input_power_for_photons(double n_c, double detuning, const CavityParams& cavity);

/// gamma_OM = 4 g^2 n_c / kappa.
double backaction_rate(double g, double n_c, double kappa);

/// Intracavity photon number for a given cooperativity at Delta = omega_m.
double photons_for_cooperativity(double C, double g, double kappa, double gamma_i);

CoolingResult cooled_occupancy(double n_b, double gamma_i, double gamma_OM, double kappa,
                               double omega_m);

/// n_min = (kappa / (4 omega_m))^2.
double quantum_backaction_floor(double kappa, double omega_m);

/// tau = hbar Q_m / (k_B T_b), N_osc = tau omega_m / 2 pi.
DecoherenceFigures decoherence_figures(double T_b, double Q_m, double omega_m);

/// Undercoupled root of (1 - kappa_e/kappa)^2 = 1 - contrast.
double kappa_e_from_contrast(double contrast, double kappa);

double thermal_occupancy(double T_b, double omega_m);

/// Inverse of thermal_occupancy.
double bath_temperature(double n_b, double omega_m);

}  // namespace omcool

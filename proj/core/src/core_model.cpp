#include "omcool/core_model.hpp"

#include <cmath>
#include <stdexcept>

#include "checks.hpp"
#include "omcool/constants.hpp"

namespace omcool {

using detail::finite;
using detail::nonnegative;
using detail::positive;
using detail::require;

namespace {

bool within_relative(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

CavityParams::CavityParams(double omega_o, double kappa, double kappa_e,
                           std::optional<double> stored_Q_o)
    : omega_o_(positive(omega_o, "omega_o")),
      kappa_(positive(kappa, "kappa")),
      kappa_e_(positive(kappa_e, "kappa_e")) {
  require(kappa_e_ <= 2.0 * kappa_, "kappa_e must not exceed 2*kappa");
  if (stored_Q_o) {
    require(within_relative(Q_o(), *stored_Q_o, 0.01),
            "stored Q_o disagrees with omega_o/kappa by more than 1%");
  }
}

MechParams::MechParams(double omega_m, double gamma_i0, double mass,
                       std::optional<double> stored_Q_m)
    : omega_m_(positive(omega_m, "omega_m")),
      gamma_i0_(positive(gamma_i0, "gamma_i0")),
      mass_(positive(mass, "motional mass")) {
  if (stored_Q_m) {
    require(within_relative(Q_m(), *stored_Q_m, 0.01),
            "stored Q_m disagrees with omega_m/gamma_i0 by more than 1%");
  }
}

double MechParams::x_zpf() const {
  return std::sqrt(PhysicalConstants::hbar / (2.0 * mass_ * omega_m_));
}

BathState::BathState(double T_b, double omega_m)
    : T_b_(nonnegative(T_b, "T_b")), n_b_(thermal_occupancy(T_b, omega_m)) {}

double thermal_occupancy(double T_b, double omega_m) {
  nonnegative(T_b, "T_b");
  positive(omega_m, "omega_m");
  return PhysicalConstants::k_B * T_b / (PhysicalConstants::hbar * omega_m);
}

double bath_temperature(double n_b, double omega_m) {
  finite(n_b, "n_b");
  positive(omega_m, "omega_m");
  return n_b * PhysicalConstants::hbar * omega_m / PhysicalConstants::k_B;
}

DriveState intracavity_state(double P_in, double detuning, const CavityParams& cavity) {
  nonnegative(P_in, "P_in");
  finite(detuning, "detuning");

  DriveState s;
  s.detuning = detuning;
  s.P_in = P_in;
  s.N_in = P_in / (PhysicalConstants::hbar * cavity.omega_o());
  const std::complex<double> denom{0.5 * cavity.kappa(), detuning};
  s.alpha_0 = -std::sqrt(0.5 * cavity.kappa_e()) * std::sqrt(s.N_in) / denom;
  s.n_c = std::norm(s.alpha_0);
  return s;
}

double input_power_for_photons(double n_c, double detuning, const CavityParams& cavity) {
  nonnegative(n_c, "n_c");
  finite(detuning, "detuning");
  const double k2 = 0.5 * cavity.kappa();
  const double N_in = n_c * (detuning * detuning + k2 * k2) / (0.5 * cavity.kappa_e());
  return N_in * PhysicalConstants::hbar * cavity.omega_o();
}

double backaction_rate(double g, double n_c, double kappa) {
  nonnegative(g, "g");
  nonnegative(n_c, "n_c");
  positive(kappa, "kappa");
  return 4.0 * g * g * n_c / kappa;
}

double photons_for_cooperativity(double C, double g, double kappa, double gamma_i) {
  nonnegative(C, "C");
  positive(g, "g");
  positive(kappa, "kappa");
  positive(gamma_i, "gamma_i");
  return C * gamma_i * kappa / (4.0 * g * g);
}

double quantum_backaction_floor(double kappa, double omega_m) {
  positive(kappa, "kappa");
  positive(omega_m, "omega_m");
  const double r = kappa / (4.0 * omega_m);
  return r * r;
}

CoolingResult cooled_occupancy(double n_b, double gamma_i, double gamma_OM, double kappa,
                               double omega_m) {
  nonnegative(n_b, "n_b");
  positive(gamma_i, "gamma_i");
  nonnegative(gamma_OM, "gamma_OM");

  CoolingResult r;
  r.gamma_i = gamma_i;
  r.gamma_OM = gamma_OM;
  r.gamma_total = gamma_i + gamma_OM;
  r.C = gamma_OM / gamma_i;
  r.n_min = quantum_backaction_floor(kappa, omega_m);
  r.n_bar = n_b / (1.0 + r.C) + r.n_min;
  r.n_bar_unfloored = gamma_i * n_b / (gamma_i + gamma_OM);
  return r;
}

DecoherenceFigures decoherence_figures(double T_b, double Q_m, double omega_m) {
  positive(T_b, "T_b");
  nonnegative(Q_m, "Q_m");
  positive(omega_m, "omega_m");
  DecoherenceFigures d;
  d.tau = PhysicalConstants::hbar * Q_m / (PhysicalConstants::k_B * T_b);
  d.N_osc = d.tau * omega_m / kTwoPi;
  return d;
}

double kappa_e_from_contrast(double contrast, double kappa) {
  finite(contrast, "contrast");
  positive(kappa, "kappa");
  require(contrast >= 0.0 && contrast < 1.0, "transmission contrast must lie in [0, 1)");
  return kappa * (1.0 - std::sqrt(1.0 - contrast));
}

}  // namespace omcool

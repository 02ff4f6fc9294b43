#pragma once

// Three-parameter Lorentzian least-squares fit,
//   L(w) = A / (1 + ((w - w_m) / (gamma/2))^2),
// with gamma the full width at half maximum in rad/s. The line integrates to
// P = A gamma / 4 over ordinary frequency.

#include <array>
#include <optional>
#include <string>

#include "omcool/spectrum.hpp"

namespace omcool {

struct LorentzParams {
  double A = 0.0;
  double omega_m = 0.0;
  double gamma = 0.0;
};

/// Evaluates L(w) for the given parameters.
double lorentzian(double omega, const LorentzParams& p);

struct LorentzFitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-13;
};

struct LorentzFit {
  double A = 0.0;
  double omega_m = 0.0;
  double gamma = 0.0;
  double integrated_power = 0.0;      // A gamma / 4
  double integrated_power_sigma = 0.0;
  double residual_norm = 0.0;
  /// Residual-scaled covariance of (A, omega_m, gamma).
  std::array<std::array<double, 3>, 3> covariance{};
  /// Half-widths of the 95% intervals (1.96 sigma) of (A, omega_m, gamma).
  std::array<double, 3> ci95{};
  int iterations = 0;
  bool converged = false;
  std::string diagnostic;

  LorentzParams params() const { return {A, omega_m, gamma}; }
};

/// Damped Gauss-Newton (Levenberg-Marquardt) with an analytic Jacobian.
/// Candidates with gamma <= 0 are rejected. On non-convergence the best point
/// is returned with converged = false and a diagnostic. Throws if fewer than
/// 10 samples lie within +-2 gamma of the peak, for either the initial
/// estimate or the fitted line.
LorentzFit fit_lorentzian(const Spectrum& spectrum,
                          const std::optional<LorentzParams>& initial_guess = std::nullopt,
                          const LorentzFitOptions& options = {});

/// Peak, location and half-maximum width read directly off the samples.
LorentzParams estimate_lorentzian(const Spectrum& spectrum);

}  // namespace omcool

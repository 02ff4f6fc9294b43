#pragma once

// Classical Fourier-sideband decomposition of the driven cavity field.
//
// With the mechanics replaced by a coherent amplitude beta_0 e^{-i omega_m t}
// the intracavity field is expanded as sum_q alpha_q e^{-i q omega_m t}. The
// amplitudes satisfy the tridiagonal system M alpha = a_in, which is truncated
// at |q| <= order and solved directly.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "omcool/core_model.hpp"
#include "omcool/spectrum.hpp"

namespace omcool {

using cdouble = std::complex<double>;

struct SidebandProblem {
  CavityParams cavity;
  DriveState drive;
  double g = 0.0;
  cdouble beta_0{};
  double omega_m = 0.0;
  int order = 2;

  /// |g beta_0| / omega_m.
  double modulation_factor() const;
  /// True when the modulation factor is below 1e-3.
  bool resolved() const { return modulation_factor() <= 1e-3; }
  cdouble alpha_in() const;
};

struct SidebandSolution {
  int order = 0;
  std::vector<cdouble> amplitudes;  // index q + order, q = -order..order

  cdouble at(int q) const { return amplitudes.at(static_cast<std::size_t>(q + order)); }
};

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

Eigen::MatrixXcd build_coupling_matrix(const SidebandProblem& problem);
Eigen::VectorXcd build_drive_vector(const SidebandProblem& problem);

/// Direct solve at `problem.order`. Throws SingularSystemError when the
/// reciprocal condition estimate falls below 1e-14.
SidebandSolution solve_sidebands(const SidebandProblem& problem);

struct RefinedSolution {
  SidebandSolution solution;
  int iterations = 0;
  bool converged = false;
};

/// Starts at `problem.order` and raises the truncation by 2 until alpha_{+-1}
/// change by less than `rel_tol`, up to `max_order`.
RefinedSolution solve_sidebands_refined(const SidebandProblem& problem, double rel_tol = 1e-9,
                                        int max_order = 40);

struct ClosedFormSidebands {
  cdouble alpha_0;
  cdouble alpha_plus;
  cdouble alpha_minus;
};

/// Resolved-sideband truncation at q = 0, +-1.
ClosedFormSidebands closed_form_sidebands(const SidebandProblem& problem);

struct SidebandPower {
  cdouble A_plus;
  cdouble A_minus;
  double A_cos = 0.0;  // photons/s
  double A_sin = 0.0;  // photons/s
  /// hbar omega_o sqrt(A_cos^2 + A_sin^2), W.
  double P_SB = 0.0;
  /// hbar omega_o |A_+|: the anti-Stokes beat alone, which is what the
  /// single-Lorentzian spectral density integrates to.
  double P_SB_upper = 0.0;
};

SidebandPower detected_sideband_power(const SidebandProblem& problem);

/// Weight multiplying the spectral line in the detected-power PSD (W^2).
double spp_prefactor(const SidebandProblem& problem);

/// Single-sided detected-power PSD around omega_m (W^2/Hz) with the line
/// broadened into a unit-area (over Hz) Lorentzian of FWHM `gamma`.
/// Throws if the grid does not straddle omega_m.
Spectrum spp_spectral_density(const SidebandProblem& problem, const FrequencyGrid& grid,
                              double gamma);

}  // namespace omcool

#pragma once

// Linearized quantum Langevin spectra in the rotating-wave approximation at
// Delta = omega_m: scattering elements, normalized photocurrent PSD, sideband
// Lorentzians and the optomechanically induced transparency (OMIT) response.

#include <complex>
#include <span>
#include <vector>

#include "omcool/constants.hpp"
#include "omcool/core_model.hpp"
#include "omcool/spectrum.hpp"

namespace omcool {

using cdouble = std::complex<double>;

/// Weak-coupling optical-spring shift of the mechanical frequency,
/// G^2 [ (D - w)/((D - w)^2 + (k/2)^2) + (D + w)/((D + w)^2 + (k/2)^2) ].
double optical_spring_shift(double G, double detuning, double omega_m, double kappa);

struct SpectraOptions {
  /// Shift omega_m by optical_spring_shift before evaluating any lineshape.
  bool optical_spring = false;
};

struct ScatteringElements {
  FrequencyGrid grid;
  std::vector<cdouble> s11;
  std::vector<cdouble> s12;
  std::vector<cdouble> n_opt;

  double G = 0.0;
  double kappa = 0.0;
  double kappa_e = 0.0;
  double gamma_i = 0.0;
  double gamma_OM = 0.0;  // 4 G^2 / kappa
  double omega_m = 0.0;   // effective (possibly spring-shifted) frequency
  /// False when G is not small against kappa and the RWA forms are suspect.
  bool weak_coupling = true;

  double gamma() const { return gamma_i + gamma_OM; }
  cdouble s11_at(double omega) const;
  cdouble s12_at(double omega) const;
  cdouble n_opt_at(double omega) const;
};

ScatteringElements scattering_elements(const CavityParams& cavity, double omega_m, double gamma_i,
                                       double G, const FrequencyGrid& grid);

/// G = g |alpha_0|; requires drive.detuning == omega_m to 1e-9 relative.
ScatteringElements scattering_elements(const SystemParams& params, const DriveState& drive,
                                       const FrequencyGrid& grid,
                                       const SpectraOptions& options = {});

/// Explicit samples; throws if they are not uniformly spaced.
ScatteringElements scattering_elements(const SystemParams& params, const DriveState& drive,
                                       std::span<const double> omega,
                                       const SpectraOptions& options = {});

struct PhotocurrentPSD {
  Spectrum spectrum;  // dimensionless, flat background = 1
  double n_bar = 0.0;
};

/// S_II = 1 + n_b (|s12(w)|^2 + |s12(-w)|^2).
PhotocurrentPSD photocurrent_psd(const ScatteringElements& elements, double n_b);

enum class SidebandSide { Red, Blue };

/// gamma_i (1 + C) on the red side, gamma_i (1 - C) on the blue side.
/// Throws for the blue side when C >= 1 (self-oscillation).
double sideband_linewidth(double gamma_i, double C, SidebandSide side);

/// Red: n gamma / ((w - w_m)^2 + (gamma/2)^2); blue: (n + 1) in place of n.
/// Integrates to n (resp. n + 1) over ordinary frequency.
Spectrum sb_lorentzians(double n_bar, double gamma, double omega_m, const FrequencyGrid& grid,
                        SidebandSide side);

struct EitOptions {
  double omega_LI = kTwoPi * 100e3;
  bool optical_spring = false;
};

struct EitSpectrum {
  FrequencyGrid grid;               // two-photon detuning, rad/s
  std::vector<cdouble> r;           // complex reflection coefficient
  std::vector<double> reflection;   // |r|^2
  /// Lock-in phase [arg r(w - w_LI) - arg r(w + w_LI)] / 2, rad. Positive
  /// inside the transparency window, where the envelope is delayed.
  std::vector<double> phase;
  std::vector<double> group_delay;  // phase / omega_LI, s
  double dip_width = 0.0;           // half-depth full width of the transparency window
  double dip_center = 0.0;
  double omega_m = 0.0;             // effective mechanical frequency used
  double omega_LI = 0.0;
  /// False when omega_LI is not small against half the window width.
  bool delay_valid = true;
};

/// r(w) = (k_e/2) / (i(D - w) + k/2 + G^2/(i(w_m - w) + gamma_i/2)).
cdouble reflection_coefficient(double omega, const CavityParams& cavity, double detuning,
                               double omega_m, double gamma_i, double G);

EitSpectrum eit_reflection(const CavityParams& cavity, double omega_m, double gamma_i, double G,
                           double detuning, const FrequencyGrid& grid,
                           const EitOptions& options = {});

EitSpectrum eit_reflection(const SystemParams& params, const DriveState& drive,
                           const FrequencyGrid& grid, const EitOptions& options = {});

/// Full width at half of the maximum of `depth` on `grid`, linearly
/// interpolated between samples. Throws if either half-level crossing lies
/// outside the grid.
double half_maximum_width(const FrequencyGrid& grid, std::span<const double> depth);

}  // namespace omcool

#pragma once

// Forward model of the detection electronics: gains, shot noise, amplifier
// excess noise, spectrum-analyzer synthesis and lock-in demodulation.
//
// Power spectral densities follow the analyzer convention S = S_VV / 2R_L,
// with S_VV = (G_EDFA G_e)^2 S_PP. G_EDFA scales optical power, G_e converts
// optical power to detector volts.

#include <complex>
#include <cstdint>

#include "omcool/core_model.hpp"
#include "omcool/quantum_spectra.hpp"
#include "omcool/spectrum.hpp"

namespace omcool {

struct DetectorParams {
  double responsivity = 1.0;           // R_PD, A/W
  double transimpedance_gain = 40e3;   // G_PD, V/A
  double load = 50.0;                  // R_L, Ohm
  double electronic_gain = 1.0;        // G_e, V/W
  double edfa_gain = 1.0;              // G_EDFA

  void validate() const;
  /// (G_e G_EDFA)^2 / (2 R_L): optical-power PSD (W^2/Hz) to analyzer PSD (W/Hz).
  double rsa_scale() const;
};

/// sqrt(2 hbar omega_l P), single-sided, in W/sqrt(Hz).
double shot_noise_level(double P, double omega_l);

/// Amplified shot-noise level sqrt(2 hbar omega_o G_EDFA^2 G_e^2 P'), V/sqrt(Hz).
double amplified_shot_noise_level(double P_prime, double omega_o, const DetectorParams& det);

/// Field transmission past the side-coupled cavity, 1 - (k_e/2)/(i Delta + k/2).
std::complex<double> cavity_transmission(double detuning, const CavityParams& cavity);

struct BudgetInputs {
  double P_SB_prime = 0.0;    // integrated sideband power after losses, W^2
  double P_in_prime = 0.0;    // optical power reaching the detector, W
  double gamma_total = 0.0;   // gamma_i + gamma_OM, rad/s
  double omega_o = 0.0;       // rad/s
  double S_excess = 0.0;      // V/sqrt(Hz)
  /// Occupancy that produced P_SB_prime; sets the per-phonon peak for n_imp.
  double n_bar = 1.0;
};

struct NoiseBudget {
  double S_shot = 0.0;             // W/sqrt(Hz), unamplified
  double S_shot_amplified = 0.0;   // V/sqrt(Hz)
  double S_excess = 0.0;           // V/sqrt(Hz)
  double S_background = 0.0;       // V/sqrt(Hz), sqrt(S_shot_amp^2 + S_excess^2)
  double SNR_shot = 0.0;
  double SNR_predicted = 0.0;
  /// Analyzer background expressed in phonons: background / (peak height per phonon).
  double n_imp = 0.0;
  /// Flat analyzer background S_background^2 / (2 R_L), W/Hz.
  double background_rsa = 0.0;
};

NoiseBudget snr_budget(const BudgetInputs& in, const DetectorParams& det);

/// Excess level that makes the budget background equal `S_background`.
/// Throws if S_background is below the amplified shot level.
double excess_from_background(double S_background, double P_prime, double omega_o,
                              const DetectorParams& det);

/// Optical-power PSD (W^2/Hz) per unit of (S_II - 1) at Delta = omega_m:
/// 4 hbar omega_o P_in. With it the sideband line integrates to the
/// integrated sideband power of the classical transduction model.
double sideband_signal_scale(double P_in, double omega_o);

struct SpectrumTruth {
  double n_bar = 0.0;
  double gamma = 0.0;
  double omega_m = 0.0;
};

struct SyntheticSpectrum {
  Spectrum spectrum;  // W/Hz at the analyzer
  Spectrum noiseless;
  std::uint64_t rng_seed = 0;
  int averages = 1;
  double background_rsa = 0.0;
  SpectrumTruth truth;  // for oracle checks only; analysis never reads it
};

/// Scales S_II - 1 by `signal_scale` and the analyzer gain chain, adds the flat
/// budget background and applies the trace-averaged power statistics: each
/// bin is mean * Gamma(N, 1/N) for N = averages.
SyntheticSpectrum synthesize_rsa_spectrum(const PhotocurrentPSD& psd, const DetectorParams& det,
                                          const NoiseBudget& noise, double signal_scale,
                                          std::uint64_t seed, int averages,
                                          const SpectrumTruth& truth = {});

/// Background-only trace with the same statistics (the far-detuned reference).
Spectrum synthesize_background(const FrequencyGrid& grid, const NoiseBudget& noise,
                               std::uint64_t seed, int averages);

struct LockinReading {
  double X = 0.0;  // W
  double Y = 0.0;  // W
  /// omega_LI < gamma_total/2, the slowly varying reflection assumption.
  bool valid = true;
};

/// a_o^2 beta^2 R_PD G_PD / (4 R_L) |r|^2 (cos phi, sin phi).
LockinReading lockin_demodulate(double reflection, double phase, double a_o, double beta,
                                const DetectorParams& det, double omega_LI, double gamma_total);

struct LockinInversion {
  double reflection = 0.0;  // |r|^2
  double phase = 0.0;       // rad, atan2(Y, X)
};

LockinInversion lockin_invert(const LockinReading& reading, double a_o, double beta,
                              const DetectorParams& det);

}  // namespace omcool

#include "omcool/measurement_chain.hpp"

#include <cmath>

#include "checks.hpp"
#include "omcool/constants.hpp"
#include "omcool/rng.hpp"

namespace omcool {

void DetectorParams::validate() const {
  detail::positive(responsivity, "detector responsivity");
  detail::positive(transimpedance_gain, "transimpedance gain");
  detail::positive(load, "load resistance");
  detail::positive(electronic_gain, "electronic gain G_e");
  detail::positive(edfa_gain, "EDFA gain");
}

double DetectorParams::rsa_scale() const {
  const double G = electronic_gain * edfa_gain;
  return G * G / (2.0 * load);
}

double shot_noise_level(double P, double omega_l) {
  detail::nonnegative(P, "optical power");
  detail::positive(omega_l, "optical frequency");
  return std::sqrt(2.0 * PhysicalConstants::hbar * omega_l * P);
}

double amplified_shot_noise_level(double P_prime, double omega_o, const DetectorParams& det) {
  return det.edfa_gain * det.electronic_gain * shot_noise_level(P_prime, omega_o);
}

std::complex<double> cavity_transmission(double detuning, const CavityParams& cavity) {
  return 1.0 - 0.5 * cavity.kappa_e() / std::complex<double>(0.5 * cavity.kappa(), detuning);
}

NoiseBudget snr_budget(const BudgetInputs& in, const DetectorParams& det) {
  det.validate();
  detail::positive(in.gamma_total, "gamma_total");
  detail::nonnegative(in.P_SB_prime, "P_SB'");
  detail::nonnegative(in.S_excess, "S_excess");
  detail::positive(in.n_bar, "n_bar");

  NoiseBudget b;
  b.S_shot = shot_noise_level(in.P_in_prime, in.omega_o);
  b.S_shot_amplified = amplified_shot_noise_level(in.P_in_prime, in.omega_o, det);
  b.S_excess = in.S_excess;
  b.S_background = std::hypot(b.S_shot_amplified, b.S_excess);

  const double G2 = std::pow(det.edfa_gain * det.electronic_gain, 2);
  const double peak = 4.0 * in.P_SB_prime / in.gamma_total;
  const double shot2 = b.S_shot * b.S_shot;
  b.SNR_shot = shot2 > 0.0 ? peak / shot2 : INFINITY;
  const double bg2 = G2 * shot2 + b.S_excess * b.S_excess;
  b.SNR_predicted = bg2 > 0.0 ? G2 * peak / bg2 : INFINITY;
  b.background_rsa = b.S_background * b.S_background / (2.0 * det.load);
  b.n_imp = in.n_bar / b.SNR_predicted;
  return b;
}

double excess_from_background(double S_background, double P_prime, double omega_o,
                              const DetectorParams& det) {
  const double shot = amplified_shot_noise_level(P_prime, omega_o, det);
  const double d = S_background * S_background - shot * shot;
  if (d < -1e-12 * shot * shot)
    throw std::invalid_argument("measured background lies below the amplified shot-noise level");
  return std::sqrt(std::max(d, 0.0));
}

double sideband_signal_scale(double P_in, double omega_o) {
  detail::nonnegative(P_in, "P_in");
  return 4.0 * PhysicalConstants::hbar * omega_o * P_in;
}

namespace {

void apply_averaging(std::vector<double>& values, std::uint64_t seed, int averages) {
  detail::require(averages >= 1, "averages must be >= 1");
  Rng rng(seed);
  const double N = averages;
  for (double& v : values) v *= rng.gamma(N) / N;
}

}  // namespace

SyntheticSpectrum synthesize_rsa_spectrum(const PhotocurrentPSD& psd, const DetectorParams& det,
                                          const NoiseBudget& noise, double signal_scale,
                                          std::uint64_t seed, int averages,
                                          const SpectrumTruth& truth) {
  det.validate();
  detail::nonnegative(signal_scale, "signal scale");

  SyntheticSpectrum s;
  s.rng_seed = seed;
  s.averages = averages;
  s.background_rsa = noise.background_rsa;
  s.truth = truth;

  s.noiseless.grid = psd.spectrum.grid;
  s.noiseless.units = "W/Hz";
  s.noiseless.sidedness = Sidedness::Single;
  s.noiseless.values.resize(psd.spectrum.size());
  const double scale = det.rsa_scale() * signal_scale;
  for (std::size_t k = 0; k < psd.spectrum.size(); ++k)
    s.noiseless.values[k] = scale * (psd.spectrum.values[k] - 1.0) + noise.background_rsa;

  s.spectrum = s.noiseless;
  apply_averaging(s.spectrum.values, seed, averages);
  return s;
}

Spectrum synthesize_background(const FrequencyGrid& grid, const NoiseBudget& noise,
                               std::uint64_t seed, int averages) {
  Spectrum s;
  s.grid = grid;
  s.units = "W/Hz";
  s.sidedness = Sidedness::Single;
  s.values.assign(grid.size(), noise.background_rsa);
  apply_averaging(s.values, seed, averages);
  return s;
}

LockinReading lockin_demodulate(double reflection, double phase, double a_o, double beta,
                                const DetectorParams& det, double omega_LI, double gamma_total) {
  det.validate();
  detail::nonnegative(reflection, "|r|^2");
  const double k =
      a_o * a_o * beta * beta * det.responsivity * det.transimpedance_gain / (4.0 * det.load);
  LockinReading r;
  r.X = k * reflection * std::cos(phase);
  r.Y = k * reflection * std::sin(phase);
  r.valid = omega_LI < 0.5 * gamma_total;
  return r;
}

LockinInversion lockin_invert(const LockinReading& reading, double a_o, double beta,
                              const DetectorParams& det) {
  det.validate();
  const double k =
      a_o * a_o * beta * beta * det.responsivity * det.transimpedance_gain / (4.0 * det.load);
  detail::positive(k, "lock-in scale");
  LockinInversion inv;
  inv.reflection = std::hypot(reading.X, reading.Y) / k;
  inv.phase = std::atan2(reading.Y, reading.X);
  return inv;
}

}  // namespace omcool

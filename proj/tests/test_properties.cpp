// Randomized invariants over a broad box of device parameters.

#include <cmath>
#include <random>

#include "approx.hpp"
#include "doctest.h"
#include "omcool/analysis.hpp"
#include "omcool/constants.hpp"
#include "omcool/measurement_chain.hpp"
#include "omcool/quantum_spectra.hpp"
#include "omcool/sideband_solver.hpp"

using namespace omcool;

namespace {

struct Device {
  CavityParams cavity;
  double omega_m, gamma_i, g, n_b;
};

/// Log-uniform draw in [lo, hi].
double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

Device draw(std::mt19937_64& rng) {
  const double kappa = hz_to_rad(log_uniform(rng, 50e6, 5e9));
  const double ratio = std::uniform_real_distribution<double>(0.02, 1.98)(rng);
  return Device{CavityParams(kTwoPi * 195e12, kappa, ratio * kappa), hz_to_rad(log_uniform(rng, 1e9, 10e9)),
                hz_to_rad(log_uniform(rng, 1e3, 1e6)), hz_to_rad(log_uniform(rng, 1e4, 2e6)),
                log_uniform(rng, 0.1, 1e4)};
}

constexpr int kTrials = 300;

}  // namespace

TEST_CASE("scattering is unitary and the photocurrent never dips below shot noise") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < kTrials; ++t) {
    const Device d = draw(rng);
    const double n_c = log_uniform(rng, 0.01, 1e5);
    const double G = d.g * std::sqrt(n_c);
    const double gamma = d.gamma_i + 4.0 * G * G / d.cavity.kappa();
    const FrequencyGrid grid = FrequencyGrid::centered(d.omega_m, 10.0 * gamma, 201);
    const ScatteringElements el = scattering_elements(d.cavity, d.omega_m, d.gamma_i, G, grid);
    const PhotocurrentPSD psd = photocurrent_psd(el, d.n_b);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double sum = std::norm(el.s11[k]) + std::norm(el.n_opt[k]) + std::norm(el.s12[k]);
      CHECK(std::abs(sum - 1.0) < 1e-12);
      CHECK(psd.spectrum.values[k] >= 1.0);
    }
  }
}

TEST_CASE("cooling never beats the back-action floor and never heats") {
  std::mt19937_64 rng(202);
  for (int t = 0; t < kTrials; ++t) {
    const Device d = draw(rng);
    const double n_c = log_uniform(rng, 0.01, 1e6);
    const CoolingResult r =
        cooled_occupancy(d.n_b, d.gamma_i, backaction_rate(d.g, n_c, d.cavity.kappa()), d.cavity.kappa(), d.omega_m);
    CHECK(r.n_bar >= quantum_backaction_floor(d.cavity.kappa(), d.omega_m));
    CHECK(r.n_bar_unfloored <= d.n_b);
    CHECK(r.n_bar_unfloored * (1.0 + r.C) == rel(d.n_b).epsilon(1e-12));
  }
}

TEST_CASE("predicted SNR is bounded by the shot-noise SNR") {
  std::mt19937_64 rng(303);
  for (int t = 0; t < kTrials; ++t) {
    DetectorParams det;
    det.electronic_gain = log_uniform(rng, 1.0, 1e4);
    det.edfa_gain = log_uniform(rng, 1.0, 1e3);
    BudgetInputs in;
    in.P_SB_prime = log_uniform(rng, 1e-24, 1e-16);
    in.P_in_prime = log_uniform(rng, 1e-7, 1e-2);
    in.gamma_total = hz_to_rad(log_uniform(rng, 1e3, 1e8));
    in.omega_o = kTwoPi * 195e12;
    in.S_excess = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.2 ? 0.0 : log_uniform(rng, 1e-12, 1e-4);
    const NoiseBudget b = snr_budget(in, det);
    CHECK(b.S_background >= b.S_shot_amplified);
    CHECK(b.SNR_predicted <= b.SNR_shot * (1.0 + 1e-14));
    if (in.S_excess == 0.0) CHECK(b.SNR_predicted == rel(b.SNR_shot).epsilon(1e-14));
  }
}

TEST_CASE("thermometry inverts the forward transduction for any device") {
  std::mt19937_64 rng(404);
  for (int t = 0; t < kTrials; ++t) {
    const Device d = draw(rng);
    DetectorParams det;
    det.electronic_gain = log_uniform(rng, 1.0, 1e4);
    det.edfa_gain = log_uniform(rng, 1.0, 1e3);
    const double P_in = log_uniform(rng, 1e-7, 1e-2);
    const double gom = log_uniform(rng, 1e-2, 1e3) * d.gamma_i;
    const double n = log_uniform(rng, 0.1, 1e3);
    LorentzFit f;
    f.omega_m = d.omega_m;
    f.gamma = d.gamma_i + gom;
    f.integrated_power = det.rsa_scale() * sideband_signal_scale(P_in, d.cavity.omega_o()) *
                         d.cavity.kappa_e() / (2.0 * d.cavity.kappa()) * gom * n;
    f.A = 4.0 * f.integrated_power / f.gamma;
    const ThermometryResult r = phonon_number(f, det, d.cavity, d.omega_m, P_in, d.gamma_i);
    CHECK(r.n_bar == rel(n).epsilon(1e-11));
  }
}

TEST_CASE("matrix and closed-form sidebands agree for small modulation") {
  std::mt19937_64 rng(505);
  for (int t = 0; t < kTrials; ++t) {
    const Device d = draw(rng);
    const DriveState drive =
        intracavity_state(log_uniform(rng, 1e-6, 1e-3), d.omega_m, d.cavity);
    const double m = log_uniform(rng, 1e-8, 1e-6);
    const SidebandProblem p{d.cavity, drive, d.g, cdouble(m * d.omega_m / d.g, 0.0), d.omega_m, 2};
    const ClosedFormSidebands cf = closed_form_sidebands(p);
    const SidebandSolution s = solve_sidebands(p);
    CHECK(std::abs(s.at(1) - cf.alpha_plus) <= 1e-6 * std::abs(cf.alpha_plus));
    CHECK(std::abs(s.at(-1) - cf.alpha_minus) <= 1e-6 * std::abs(cf.alpha_minus));
  }
}

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <numeric>

#include "approx.hpp"
#include "doctest.h"
#include "omcool/constants.hpp"
#include "omcool/lorentz_fit.hpp"
#include "omcool/quantum_spectra.hpp"

using namespace omcool;

namespace {

const double kKappa = hz_to_rad(500e6);
const double kOmegaM = hz_to_rad(3.68e9);
const double kGammaI = hz_to_rad(35e3);
const double kG = hz_to_rad(910e3);
const CavityParams kCav(kTwoPi * 195e12, kKappa, kappa_e_from_contrast(0.25, kKappa));

double G_of(double n_c) { return kG * std::sqrt(n_c); }
double width_of(double n_c) { return kGammaI + 4.0 * G_of(n_c) * G_of(n_c) / kKappa; }

/// Composite Simpson over a vector of uniformly spaced samples (odd count).
double simpson(const std::vector<double>& y, double h) {
  double s = y.front() + y.back();
  for (std::size_t k = 1; k + 1 < y.size(); ++k) s += (k % 2 ? 4.0 : 2.0) * y[k];
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("scattering elements are unitary") {
  for (double n_c : {0.0, 1.0, 100.0, 2000.0, 2e5}) {
    const double gamma = width_of(n_c);
    const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 30.0 * gamma, 2001);
    const ScatteringElements el = scattering_elements(kCav, kOmegaM, kGammaI, G_of(n_c), grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
      CHECK(std::norm(el.s11[k]) + std::norm(el.n_opt[k]) + std::norm(el.s12[k]) ==
            rel(1.0).epsilon(1e-13));
  }
}

TEST_CASE("elements match their closed forms pointwise") {
  const double G = G_of(700.0);
  const double gamma = width_of(700.0);
  const ScatteringElements el =
      scattering_elements(kCav, kOmegaM, kGammaI, G, FrequencyGrid::centered(kOmegaM, gamma, 11));
  const double k = kKappa, ke = kCav.kappa_e();
  for (double w : {kOmegaM - 0.3 * gamma, kOmegaM, kOmegaM + 2.0 * gamma}) {
    const cdouble x = 1.0 / cdouble(0.5 * gamma, kOmegaM - w);
    const cdouble s12 = cdouble(0.0, 1.0) * G * std::sqrt(2.0 * kGammaI * ke / (k * k)) * x;
    CHECK(std::abs(el.s12_at(w) - s12) < 1e-12 * std::abs(s12));
    const double gom = 4.0 * G * G / k;
    const cdouble s11 = 1.0 - ke / k + gom * (0.5 * ke / k) * x;
    CHECK(std::abs(el.s11_at(w) - s11) < 1e-12);
    const double kp = k - 0.5 * ke;
    const cdouble nopt = -std::sqrt(2.0 * kp * ke / (k * k)) + gom * std::sqrt(kp * ke / (2.0 * k * k)) * x;
    CHECK(std::abs(el.n_opt_at(w) - nopt) < 1e-12);
  }
  CHECK(el.gamma_OM == rel(4.0 * G * G / k));
  CHECK(el.weak_coupling);
  const ScatteringElements strong =
      scattering_elements(kCav, kOmegaM, kGammaI, 0.2 * kKappa, FrequencyGrid::centered(kOmegaM, 1e6, 11));
  CHECK_FALSE(strong.weak_coupling);
}

TEST_CASE("photocurrent PSD sits above shot noise and its excess integrates to the sideband weight") {
  for (double n_c : {2.0, 80.0, 2000.0}) {
    const double gamma = width_of(n_c);
    const double n_b = 99.66;
    const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 100.0 * gamma, 200001);
    const PhotocurrentPSD psd =
        photocurrent_psd(scattering_elements(kCav, kOmegaM, kGammaI, G_of(n_c), grid), n_b);
    CHECK(psd.n_bar == rel(kGammaI * n_b / gamma).epsilon(1e-12));
    std::vector<double> excess(psd.spectrum.values);
    for (double& v : excess) {
      CHECK(v >= 1.0);
      v -= 1.0;
    }
    // exact integral of both Lorentzian terms over the finite span, in units of the full weight
    const auto span_fraction = [&](double d1, double d2) {
      return (std::atan(2.0 * d2 / gamma) - std::atan(2.0 * d1 / gamma)) / std::numbers::pi;
    };
    const double fraction = span_fraction(grid.start() - kOmegaM, grid.stop() - kOmegaM) +
                            span_fraction(grid.start() + kOmegaM, grid.stop() + kOmegaM);
    const double gom = gamma - kGammaI;
    const double area = simpson(excess, rad_to_hz(grid.step()));
    CHECK(area == rel(kCav.kappa_e() / (2.0 * kKappa) * gom * psd.n_bar * fraction).epsilon(1e-6));
  }
}

TEST_CASE("fitted width of the photocurrent line is additive") {
  for (double C : {0.1, 1.0, 10.0, 100.0, 300.0}) {
    const double n_c = photons_for_cooperativity(C, kG, kKappa, kGammaI);
    const double gamma = width_of(n_c);
    const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 10.0 * gamma, 4001);
    PhotocurrentPSD psd = photocurrent_psd(scattering_elements(kCav, kOmegaM, kGammaI, G_of(n_c), grid), 100.0);
    for (double& v : psd.spectrum.values) v -= 1.0;
    const LorentzFit fit = fit_lorentzian(psd.spectrum);
    CHECK(fit.gamma == rel(kGammaI * (1.0 + C)).epsilon(5e-3));
  }
}

TEST_CASE("system-level overload requires the resonant red drive") {
  const SystemParams sys{kCav, MechParams(kOmegaM, kGammaI, 300e-18), kG, 17.6};
  const DriveState on = intracavity_state(1e-4, kOmegaM, kCav);
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 1e7, 101);
  CHECK_NOTHROW(scattering_elements(sys, on, grid));
  const DriveState off = intracavity_state(1e-4, 0.9 * kOmegaM, kCav);
  CHECK_THROWS_AS(scattering_elements(sys, off, grid), std::invalid_argument);
  const std::vector<double> ragged{kOmegaM, kOmegaM + 1.0, kOmegaM + 3.0};
  CHECK_THROWS_AS(scattering_elements(sys, on, ragged), std::invalid_argument);
}

TEST_CASE("sideband linewidths and Lorentzians") {
  CHECK(sideband_linewidth(kGammaI, 3.0, SidebandSide::Red) == rel(4.0 * kGammaI));
  CHECK(sideband_linewidth(kGammaI, 0.5, SidebandSide::Blue) == rel(0.5 * kGammaI));
  CHECK_THROWS_AS(sideband_linewidth(kGammaI, 1.0, SidebandSide::Blue), std::invalid_argument);

  const double gamma = hz_to_rad(1e6);
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 5000.0 * gamma, 500001);
  const Spectrum red = sb_lorentzians(2.5, gamma, kOmegaM, grid, SidebandSide::Red);
  const Spectrum blue = sb_lorentzians(2.5, gamma, kOmegaM, grid, SidebandSide::Blue);
  const double tail = 1.0 - 1.0 / (std::numbers::pi * 5000.0);
  CHECK(red.integrate_hz() == rel(2.5 * tail).epsilon(1e-5));
  CHECK(blue.integrate_hz() == rel(3.5 * tail).epsilon(1e-5));
  CHECK(blue.integrate_hz() / red.integrate_hz() == rel(3.5 / 2.5).epsilon(1e-12));
}

TEST_CASE("optical spring shift vanishes without coupling and is shared by both spectra") {
  CHECK(optical_spring_shift(0.0, kOmegaM, kOmegaM, kKappa) == 0.0);
  const double G = G_of(2000.0);
  const double shift = optical_spring_shift(G, kOmegaM, kOmegaM, kKappa);
  const double k2 = 0.25 * kKappa * kKappa;
  CHECK(shift == rel(G * G * (2.0 * kOmegaM / (4.0 * kOmegaM * kOmegaM + k2))));

  const SystemParams sys{kCav, MechParams(kOmegaM, kGammaI, 300e-18), kG, 17.6};
  const DriveState drive = intracavity_state(input_power_for_photons(2000.0, kOmegaM, kCav), kOmegaM, kCav);
  const double gamma = width_of(2000.0);
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM + shift, 3.0 * gamma, 6001);
  const ScatteringElements el = scattering_elements(sys, drive, grid, SpectraOptions{true});
  CHECK(el.omega_m == rel(kOmegaM + shift).epsilon(1e-15));
  EitOptions eo;
  eo.optical_spring = true;
  const EitSpectrum eit = eit_reflection(sys, drive, grid, eo);
  CHECK(eit.omega_m == el.omega_m);
  const PhotocurrentPSD psd = photocurrent_psd(el, 100.0);
  const auto peak = std::max_element(psd.spectrum.values.begin(), psd.spectrum.values.end());
  CHECK(grid[static_cast<std::size_t>(peak - psd.spectrum.values.begin())] == eit.dip_center);
}

TEST_CASE("EIT without coupling shows no transparency window") {
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 1e6, 501);
  const EitSpectrum e = eit_reflection(kCav, kOmegaM, kGammaI, 0.0, kOmegaM, grid);
  CHECK(e.dip_width == 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k)
    CHECK(e.reflection[k] == rel(e.reflection[0]).epsilon(1e-4));
}

TEST_CASE("EIT window at low power and at unit cooperativity") {
  for (double n_c : {1.4, photons_for_cooperativity(1.0, kG, kKappa, kGammaI)}) {
    const double expected = width_of(n_c);
    const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 4.0 * expected, 8001);
    const EitSpectrum e = eit_reflection(kCav, kOmegaM, kGammaI, G_of(n_c), kOmegaM, grid);
    CHECK(e.dip_width == rel(expected).epsilon(1e-3));
    CHECK(std::abs(e.dip_center - kOmegaM) <= grid.step());
  }
  const double n1 = photons_for_cooperativity(1.0, kG, kKappa, kGammaI);
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 8.0 * kGammaI, 8001);
  const EitSpectrum e = eit_reflection(kCav, kOmegaM, kGammaI, G_of(n1), kOmegaM, grid);
  CHECK(e.dip_width == rel(2.0 * kGammaI).epsilon(1e-3));
  // on two-photon resonance the reflection falls to (1/(1+C))^2 of the bare value
  const double bare = std::norm(reflection_coefficient(kOmegaM, kCav, kOmegaM, kOmegaM, kGammaI, 0.0));
  CHECK(std::norm(reflection_coefficient(kOmegaM, kCav, kOmegaM, kOmegaM, kGammaI, G_of(n1))) / bare ==
        rel(0.25).epsilon(1e-3));
}

TEST_CASE("EIT width grows with the back-action slope in the weak-coupling range") {
  // least squares width = a + b n_c over n_c <= 300 (gamma_OM / kappa < 0.4%)
  std::vector<double> x, y;
  for (double n_c = 1.0; n_c <= 300.0; n_c *= 1.5) {
    const double expected = width_of(n_c);
    const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 3.0 * expected, 4001);
    x.push_back(n_c);
    y.push_back(eit_reflection(kCav, kOmegaM, kGammaI, G_of(n_c), kOmegaM, grid).dip_width);
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  CHECK(sxy / sxx == rel(backaction_rate(kG, 1.0, kKappa)).epsilon(0.01));
}

TEST_CASE("group delay is positive inside the window and flagged when the modulation is too fast") {
  const double n_c = 50.0;
  const double gamma = width_of(n_c);
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 3.0 * gamma, 601);
  EitOptions opts;
  opts.omega_LI = 0.02 * kGammaI;
  const EitSpectrum e = eit_reflection(kCav, kOmegaM, kGammaI, G_of(n_c), kOmegaM, grid, opts);
  CHECK(e.delay_valid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(grid[k] - kOmegaM) < 0.3 * kGammaI) CHECK(e.group_delay[k] > 0.0);
    CHECK(e.group_delay[k] == rel(e.phase[k] / opts.omega_LI));
  }
  opts.omega_LI = gamma;
  CHECK_FALSE(eit_reflection(kCav, kOmegaM, kGammaI, G_of(n_c), kOmegaM, grid, opts).delay_valid);
}

TEST_CASE("half-maximum width on a sampled triangle") {
  const FrequencyGrid grid(0.0, 1.0, 11);
  std::vector<double> tri(11);
  for (int k = 0; k <= 10; ++k) tri[static_cast<std::size_t>(k)] = 5.0 - std::abs(k - 5);
  CHECK(half_maximum_width(grid, tri) == rel(5.0));
  std::vector<double> edge{3.0, 2.0, 1.0, 0.5};
  CHECK_THROWS(half_maximum_width(FrequencyGrid(0.0, 1.0, 4), edge));
}

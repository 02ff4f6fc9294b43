#include <cmath>
#include <stdexcept>
#include <random>

#include "approx.hpp"
#include "doctest.h"
#include "omcool/constants.hpp"
#include "omcool/lorentz_fit.hpp"

using namespace omcool;

namespace {

Spectrum sampled(const LorentzParams& p, double half_span, std::size_t n) {
  Spectrum s;
  s.grid = FrequencyGrid::centered(p.omega_m, half_span, n);
  s.units = "W/Hz";
  for (std::size_t k = 0; k < n; ++k) s.values.push_back(lorentzian(s.grid[k], p));
  return s;
}

}  // namespace

TEST_CASE("lorentzian shape") {
  const LorentzParams p{3.0, 10.0, 4.0};
  CHECK(lorentzian(10.0, p) == 3.0);
  CHECK(lorentzian(12.0, p) == rel(1.5));
  CHECK(lorentzian(8.0, p) == rel(1.5));
}

TEST_CASE("noiseless data are recovered exactly") {
  for (double gamma : {hz_to_rad(35e3), hz_to_rad(1e6), hz_to_rad(13e6)}) {
    const LorentzParams truth{2.5e-12, hz_to_rad(3.68e9), gamma};
    const Spectrum s = sampled(truth, 10.0 * gamma, 2001);
    const LorentzFit f = fit_lorentzian(s);
    CHECK(f.converged);
    CHECK(f.A == rel(truth.A).epsilon(1e-9));
    CHECK(f.omega_m == rel(truth.omega_m).epsilon(1e-12));
    CHECK(f.gamma == rel(truth.gamma).epsilon(1e-9));
    CHECK(f.integrated_power == rel(f.A * rad_to_hz(f.gamma) * kTwoPi / 4.0));
  }
}

TEST_CASE("integrated power is the area over ordinary frequency") {
  const double gamma = hz_to_rad(1e6);
  const LorentzParams truth{1.0, hz_to_rad(3.68e9), gamma};
  const Spectrum s = sampled(truth, 5000.0 * gamma, 500001);
  const LorentzFit f = fit_lorentzian(s);
  const double tail = 1.0 / (std::acos(-1.0) * 5000.0);
  CHECK(s.integrate_hz() == rel(f.integrated_power * (1.0 - tail)).epsilon(1e-6));
}

TEST_CASE("noisy data are recovered within the reported intervals") {
  const LorentzParams truth{1.0, hz_to_rad(3.68e9), hz_to_rad(2e6)};
  std::mt19937_64 rng(42);
  int inside = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Spectrum s = sampled(truth, 10.0 * truth.gamma, 801);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (double& v : s.values) v += noise(rng);
    const LorentzFit f = fit_lorentzian(s);
    REQUIRE(f.converged);
    CHECK(f.gamma == rel(truth.gamma).epsilon(0.05));
    if (std::abs(f.gamma - truth.gamma) <= f.ci95[2]) ++inside;
  }
  // nominal 95% coverage
  CHECK(inside >= 180);
}

TEST_CASE("an explicit initial guess is honoured") {
  const LorentzParams truth{1.0, 0.0, 2.0};
  const Spectrum s = sampled(truth, 30.0, 601);
  const LorentzFit f = fit_lorentzian(s, LorentzParams{0.7, 0.5, 3.0});
  CHECK(f.converged);
  CHECK(f.gamma == rel(2.0).epsilon(1e-9));
  const LorentzParams e = estimate_lorentzian(s);
  CHECK(std::abs(e.omega_m) < 1e-9);
  CHECK(e.gamma == rel(2.0).epsilon(0.15));
}

TEST_CASE("too few samples across the line is an error") {
  const LorentzParams truth{1.0, 0.0, 2.0};
  CHECK_THROWS_AS(fit_lorentzian(sampled(truth, 500.0, 101)), std::invalid_argument);
}

#include <cmath>
#include <stdexcept>

#include "approx.hpp"
#include "doctest.h"
#include "omcool/constants.hpp"
#include "omcool/core_model.hpp"

using namespace omcool;

namespace {

const double kKappa = hz_to_rad(500e6);
const double kOmegaM = hz_to_rad(3.68e9);
const double kGammaI = hz_to_rad(35e3);
const double kG = hz_to_rad(910e3);
const double kOmegaO = kTwoPi * 195e12;

}  // namespace

TEST_CASE("cavity parameters validate their coupling range") {
  CHECK_NOTHROW(CavityParams(kOmegaO, kKappa, 0.134 * kKappa));
  CHECK_NOTHROW(CavityParams(kOmegaO, kKappa, 2.0 * kKappa));
  CHECK_THROWS_AS(CavityParams(kOmegaO, kKappa, 2.01 * kKappa), std::invalid_argument);
  CHECK_THROWS_AS(CavityParams(kOmegaO, kKappa, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CavityParams(kOmegaO, -kKappa, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(CavityParams(kOmegaO, kKappa, 0.1 * kKappa, 2.0 * kOmegaO / kKappa),
                  std::invalid_argument);
  const CavityParams c(kOmegaO, kKappa, 0.2 * kKappa);
  CHECK(c.kappa_prime() == rel(0.9 * kKappa));
}

TEST_CASE("mechanical Q and zero-point amplitude are derived") {
  const MechParams m(kOmegaM, kGammaI, 300e-18);
  CHECK(m.Q_m() == rel(kOmegaM / kGammaI));
  const double x_zpf = std::sqrt(1.054571817e-34 / (2.0 * 300e-18 * kOmegaM));
  CHECK(m.x_zpf() == rel(x_zpf).epsilon(1e-14));
  CHECK_THROWS_AS(MechParams(kOmegaM, kGammaI, 300e-18, 2.0 * kOmegaM / kGammaI), std::invalid_argument);
  CHECK_NOTHROW(MechParams(kOmegaM, kGammaI, 300e-18, 1.005 * kOmegaM / kGammaI));
}

TEST_CASE("intracavity photon number follows the Lorentzian drive response") {
  const CavityParams c(kOmegaO, kKappa, 0.134 * kKappa);
  const double P = 1e-3;
  const DriveState d = intracavity_state(P, kOmegaM, c);
  const double N_in = P / (1.054571817e-34 * kOmegaO);
  const double oracle = 0.5 * c.kappa_e() * N_in / (kOmegaM * kOmegaM + 0.25 * kKappa * kKappa);
  CHECK(d.n_c == rel(oracle).epsilon(1e-12));
  CHECK(std::norm(d.alpha_0) == rel(d.n_c).epsilon(1e-12));
  CHECK(input_power_for_photons(d.n_c, kOmegaM, c) == rel(P).epsilon(1e-12));
}

TEST_CASE("unit cooperativity needs about five photons") {
  const double n = photons_for_cooperativity(1.0, kG, kKappa, kGammaI);
  CHECK(n == rel(kKappa * kGammaI / (4.0 * kG * kG)));
  CHECK(n == rel(5.283).epsilon(1e-3));
  CHECK(backaction_rate(kG, n, kKappa) == rel(kGammaI));
}

TEST_CASE("back-action rate at the top of the sweep") {
  CHECK(rad_to_hz(backaction_rate(kG, 2000.0, kKappa)) == rel(13.25e6).epsilon(1e-3));
}

TEST_CASE("cooled occupancy, floor and bath occupancy") {
  const double n_b = thermal_occupancy(17.6, kOmegaM);
  CHECK(n_b == rel(1.380649e-23 * 17.6 / (1.054571817e-34 * kOmegaM)));
  CHECK(n_b == rel(99.66).epsilon(1e-3));
  CHECK(bath_temperature(n_b, kOmegaM) == rel(17.6).epsilon(1e-14));

  const double n_min = quantum_backaction_floor(kKappa, kOmegaM);
  CHECK(n_min == rel(std::pow(500.0 / (4.0 * 3680.0), 2)).epsilon(1e-12));

  const double g_om = backaction_rate(kG, 2000.0, kKappa);
  const CoolingResult r = cooled_occupancy(n_b, kGammaI, g_om, kKappa, kOmegaM);
  CHECK(r.C == rel(378.6).epsilon(1e-3));
  CHECK(r.n_bar == rel(n_b / (1.0 + r.C) + n_min).epsilon(1e-14));
  CHECK(r.n_bar == rel(0.2637).epsilon(1e-3));
  CHECK(r.n_bar_unfloored == rel(kGammaI * n_b / (kGammaI + g_om)));
}

TEST_CASE("cooled occupancy decreases monotonically with photon number") {
  const double n_b = thermal_occupancy(17.6, kOmegaM);
  double prev = INFINITY;
  for (double n_c = 0.5; n_c < 1e5; n_c *= 1.7) {
    const double n = cooled_occupancy(n_b, kGammaI, backaction_rate(kG, n_c, kKappa), kKappa, kOmegaM).n_bar;
    CHECK(n < prev);
    CHECK(n > quantum_backaction_floor(kKappa, kOmegaM));
    prev = n;
  }
}

TEST_CASE("undercoupled root of the contrast equation") {
  const double ke = kappa_e_from_contrast(0.25, kKappa);
  CHECK(std::pow(1.0 - ke / kKappa, 2) == rel(0.75).epsilon(1e-14));
  CHECK(ke / kKappa == rel(0.134).epsilon(1e-3));
  CHECK(ke < kKappa);
  CHECK_THROWS_AS(kappa_e_from_contrast(1.5, kKappa), std::invalid_argument);
  CHECK_THROWS_AS(kappa_e_from_contrast(-0.1, kKappa), std::invalid_argument);
}

TEST_CASE("decoherence figures") {
  const double Q = 1.06e5;
  const DecoherenceFigures f = decoherence_figures(17.6, Q, kOmegaM);
  CHECK(f.tau == rel(1.054571817e-34 * Q / (1.380649e-23 * 17.6)));
  CHECK(f.N_osc == rel(f.tau * kOmegaM / kTwoPi));
}

TEST_CASE("invalid physical inputs are rejected") {
  CHECK_THROWS_AS(thermal_occupancy(-1.0, kOmegaM), std::invalid_argument);
  CHECK_THROWS_AS(thermal_occupancy(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(backaction_rate(kG, -1.0, kKappa), std::invalid_argument);
  CHECK_THROWS_AS(cooled_occupancy(10.0, 0.0, 1.0, kKappa, kOmegaM), std::invalid_argument);
  CHECK_THROWS_AS(BathState(NAN, kOmegaM), std::invalid_argument);
}

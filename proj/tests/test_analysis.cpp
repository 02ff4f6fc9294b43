#include <cmath>
#include <stdexcept>

#include "approx.hpp"
#include "doctest.h"
#include "omcool/analysis.hpp"
#include "omcool/constants.hpp"

using namespace omcool;

namespace {

const double kHbar = 1.054571817e-34;
const double kKappa = hz_to_rad(500e6);
const double kOmegaM = hz_to_rad(3.68e9);
const double kGammaI = hz_to_rad(35e3);
const CavityParams kCav(kTwoPi * 195e12, kKappa, kappa_e_from_contrast(0.25, kKappa));

/// Builds a calibration record forward from known losses.
CalibrationRecord record_for(double L0, double L1) {
  CalibrationRecord r;
  r.P_0 = 1.2e-3;
  r.P_1 = 0.9e-3;
  r.L_taper = 0.85;
  r.P_RSA_0 = 2e-4;
  r.P_RSA_1 = 3e-4;
  r.P_RSA_0_prime = r.P_RSA_0 * L0 * L1 / r.L_taper;
  r.P_RSA_1_prime = r.P_RSA_1 * L0 * L1 / r.L_taper;
  r.dlambda_1 = 40e-12;
  r.dlambda_0 = r.dlambda_1 * (r.P_0 * L0) / (r.P_1 * L1);
  return r;
}

/// A fitted line consistent with the forward model at occupancy n.
LorentzFit forward_fit(double n, double gamma_OM, double P_in, const DetectorParams& det) {
  LorentzFit f;
  f.omega_m = kOmegaM;
  f.gamma = kGammaI + gamma_OM;
  const double area = 4.0 * kHbar * kCav.omega_o() * P_in * kCav.kappa_e() / (2.0 * kKappa) * gamma_OM * n;
  f.integrated_power = det.rsa_scale() * area;
  f.A = 4.0 * f.integrated_power / f.gamma;
  f.integrated_power_sigma = 0.003 * f.integrated_power;
  f.ci95 = {0.0, 1.96 * 1e3, 1.96 * 1e3};
  f.converged = true;
  return f;
}

DetectorParams gains() {
  DetectorParams d;
  d.electronic_gain = 2000.0;
  d.edfa_gain = 30.0;
  return d;
}

}  // namespace

TEST_CASE("insertion losses recovered from a forward-built record") {
  for (auto [L0, L1] : {std::pair{0.8, 0.6}, std::pair{0.7, 0.7}, std::pair{0.95, 0.5}}) {
    const InsertionLosses l = extract_insertion_losses(record_for(L0, L1));
    CHECK(l.L_0 == rel(L0).epsilon(1e-12));
    CHECK(l.L_1 == rel(L1).epsilon(1e-12));
    CHECK(l.product == rel(L0 * L1).epsilon(1e-12));
    CHECK(l.product_mismatch < 1e-14);
  }
}

TEST_CASE("inconsistent or unphysical calibration records are rejected") {
  CalibrationRecord r = record_for(0.8, 0.6);
  r.P_RSA_1_prime *= 1.05;
  CHECK_THROWS_AS(extract_insertion_losses(r), std::invalid_argument);
  r.tolerance = 0.1;
  CHECK_NOTHROW(extract_insertion_losses(r));
  CHECK_THROWS_AS(extract_insertion_losses(record_for(1.3, 0.5)), std::invalid_argument);
  CalibrationRecord z = record_for(0.8, 0.6);
  z.P_0 = 0.0;
  CHECK_THROWS_AS(extract_insertion_losses(z), std::invalid_argument);
}

TEST_CASE("gain and modulation-depth bookkeeping") {
  CHECK(electronic_gain(2.0, 1e-3) == rel(2000.0));
  CalibrationRecord r;
  r.G_e = 2000.0;
  r.G_EDFA = 30.0;
  r.P_RSA_prime = 1e-4;
  r.R_L = 50.0;
  const double beta = modulation_depth(1e-9, r);
  CHECK(beta == rel(std::sqrt(2.0 * 1e-9 * 50.0) / (30.0 * 2000.0 * 1e-4)));
}

TEST_CASE("intrinsic linewidth from the red and blue sidebands") {
  const double C = 0.4;
  CHECK(intrinsic_linewidth(kGammaI * (1.0 + C), kGammaI * (1.0 - C)) == rel(kGammaI));
  CHECK_THROWS_AS(intrinsic_linewidth(kGammaI, 0.0), std::invalid_argument);
}

TEST_CASE("phonon-number expression inverts the forward model") {
  const DetectorParams det = gains();
  for (double n : {0.26, 3.0, 99.0}) {
    for (double gom : {0.1 * kGammaI, 10.0 * kGammaI, 378.6 * kGammaI}) {
      const double P_in = 3e-4;
      const ThermometryResult r = phonon_number(forward_fit(n, gom, P_in, det), det, kCav, kOmegaM, P_in, kGammaI);
      CHECK(r.n_bar == rel(n).epsilon(1e-12));
      CHECK(r.C == rel(gom / kGammaI).epsilon(1e-12));
      CHECK(r.n_b == rel(n * (1.0 + gom / kGammaI)).epsilon(1e-12));
      CHECK(r.T_b == rel(bath_temperature(r.n_b, kOmegaM)));
    }
  }
}

TEST_CASE("occupancy cannot be inferred without back-action damping") {
  const DetectorParams det = gains();
  LorentzFit f = forward_fit(1.0, kGammaI, 1e-4, det);
  f.gamma = kGammaI;
  CHECK_THROWS_AS(phonon_number(f, det, kCav, kOmegaM, 1e-4, kGammaI), std::invalid_argument);
  f.gamma = 0.9 * kGammaI;
  CHECK_THROWS_AS(phonon_number(f, det, kCav, kOmegaM, 1e-4, kGammaI), std::invalid_argument);
}

TEST_CASE("quoted input errors give about four percent at strong damping") {
  const DetectorParams det = gains();
  const ThermometryResult r = phonon_number(forward_fit(0.26, 378.6 * kGammaI, 3e-4, det), det, kCav, kOmegaM,
                                            3e-4, kGammaI, InputErrors::quoted());
  // first-order oracle: unit sensitivities plus gamma/(gamma - gamma_i) weights
  const double C = 378.6;
  const double oracle = std::sqrt(3.0 * 0.007 * 0.007 + 0.04 * 0.04 + 0.006 * 0.006 +
                                  std::pow(0.006 * (1.0 + C) / C, 2) + std::pow(0.016 / C, 2));
  CHECK(r.relative_uncertainty == rel(oracle).epsilon(1e-10));
  CHECK(r.relative_uncertainty == rel(0.0427).epsilon(0.01));
  CHECK(r.n_bar_sigma == rel(r.relative_uncertainty * r.n_bar));
}

TEST_CASE("analytic propagation matches finite-difference sensitivities off resonance") {
  const DetectorParams det = gains();
  const double detuning = 1.1 * kOmegaM;
  const LorentzFit fit = forward_fit(2.0, 20.0 * kGammaI, 3e-4, det);
  InputErrors e = InputErrors::quoted();
  const ThermometryResult r = phonon_number(fit, det, kCav, detuning, 3e-4, kGammaI, e);
  const ThermometryLedger& l = r.ledger;
  double sum = 0.0;
  const auto add = [&](Measured ThermometryLedger::*field) {
    ThermometryLedger up = l, dn = l;
    const double h = 1e-6 * (l.*field).value;
    (up.*field).value += h;
    (dn.*field).value -= h;
    const double d = (phonon_number_formula(up) - phonon_number_formula(dn)) / (2.0 * h);
    sum += std::pow(d * (l.*field).sigma / r.n_bar, 2);
  };
  for (auto f : {&ThermometryLedger::omega_o, &ThermometryLedger::kappa, &ThermometryLedger::kappa_e,
                 &ThermometryLedger::detuning, &ThermometryLedger::omega_m, &ThermometryLedger::gamma,
                 &ThermometryLedger::gamma_i, &ThermometryLedger::P_in, &ThermometryLedger::P_RSA})
    add(f);
  CHECK(phonon_uncertainty_analytic(l) == rel(std::sqrt(sum)).epsilon(1e-5));
}

TEST_CASE("Monte-Carlo propagation agrees with the linear estimate for small errors") {
  const DetectorParams det = gains();
  InputErrors e = InputErrors::quoted();
  e.detuning = 0.0;
  e.omega_m = 0.0;
  const ThermometryResult r =
      phonon_number(forward_fit(0.5, 100.0 * kGammaI, 3e-4, det), det, kCav, kOmegaM, 3e-4, kGammaI, e);
  const UncertaintyReport u = phonon_uncertainty(r, 40000, 3);
  CHECK(u.analytic == rel(r.relative_uncertainty));
  CHECK(u.monte_carlo == rel(u.analytic).epsilon(0.03));
  CHECK(phonon_uncertainty_monte_carlo(r.ledger, 1000, 9) == phonon_uncertainty_monte_carlo(r.ledger, 1000, 9));
}

TEST_CASE("detuning errors enter only at second order on resonance") {
  const DetectorParams det = gains();
  const ThermometryResult r = phonon_number(forward_fit(0.5, 100.0 * kGammaI, 3e-4, det), det, kCav, kOmegaM,
                                            3e-4, kGammaI, InputErrors::quoted());
  const UncertaintyReport u = phonon_uncertainty(r, 40000, 3);
  // (D - w_m)^2 / (k/2)^2 is a scaled chi-square variable with standard deviation sqrt(2) s^2 / (k/2)^2
  const double s2 = std::pow(0.003 * kOmegaM, 2) + std::pow(0.006 * kOmegaM, 2);
  const double quad = std::sqrt(2.0) * s2 / (0.25 * kKappa * kKappa);
  CHECK(u.monte_carlo > u.analytic);
  CHECK(u.monte_carlo == rel(std::hypot(u.analytic, quad)).epsilon(0.03));
}

TEST_CASE("fit intervals stand in for missing line-quantity errors") {
  const DetectorParams det = gains();
  const LorentzFit fit = forward_fit(1.0, 10.0 * kGammaI, 3e-4, det);
  const ThermometryResult r = phonon_number(fit, det, kCav, kOmegaM, 3e-4, kGammaI, InputErrors{});
  CHECK(r.ledger.gamma.sigma == fit.ci95[2]);
  CHECK(r.ledger.P_RSA.sigma == rel(1.96 * fit.integrated_power_sigma));
  CHECK(r.ledger.kappa.sigma == 0.0);
}

TEST_CASE("mode thermometry finds a plateau below a change point") {
  std::vector<ThermometryPoint> pts;
  for (double T : {0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 2.8, 3.5, 5.0, 7.0, 10.0})
    pts.push_back({T, T < 2.0 ? 2.0 + 0.01 * std::sin(10.0 * T) : T});
  const ThermometryCurve c = mode_thermometry_curve(pts);
  CHECK(c.plateau_detected);
  CHECK(c.plateau_count == 6);
  CHECK(c.plateau_level == rel(2.0).epsilon(0.01));
  CHECK(c.onset_T_c == rel(2.0));

  std::vector<ThermometryPoint> line;
  for (double T : {5.0, 1.0, 3.0, 2.0, 4.0}) line.push_back({T, T});
  const ThermometryCurve d = mode_thermometry_curve(line);
  CHECK_FALSE(d.plateau_detected);
  CHECK(d.points.front().T_c == 1.0);
  CHECK(d.onset_T_c == 1.0);
  CHECK_THROWS_AS(mode_thermometry_curve({{1.0, 1.0}, {2.0, 2.0}}), std::invalid_argument);
}

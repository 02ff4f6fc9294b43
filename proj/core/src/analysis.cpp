#include "omcool/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "checks.hpp"
#include "omcool/constants.hpp"
#include "omcool/rng.hpp"

namespace omcool {

using detail::positive;
using detail::require;

double intrinsic_linewidth(double gamma_red, double gamma_blue) {
  positive(gamma_red, "gamma_red");
  if (!(gamma_blue > 0.0))
    throw std::invalid_argument("gamma_blue <= 0: blue-side data is above the lasing threshold");
  return 0.5 * (gamma_red + gamma_blue);
}

InsertionLosses extract_insertion_losses(const CalibrationRecord& r) {
  positive(r.P_0, "P_0");
  positive(r.P_1, "P_1");
  positive(r.dlambda_0, "dlambda_0");
  positive(r.dlambda_1, "dlambda_1");
  positive(r.L_taper, "L_taper");
  positive(r.P_RSA_0, "P_RSA,0");
  positive(r.P_RSA_1, "P_RSA,1");
  positive(r.P_RSA_0_prime, "P'_RSA,0");
  positive(r.P_RSA_1_prime, "P'_RSA,1");
  require(r.L_taper <= 1.0, "L_taper must lie in (0, 1]");

  const double ratio = (r.dlambda_0 / r.dlambda_1) * (r.P_1 / r.P_0);  // L_0 / L_1
  const double prod0 = r.L_taper * r.P_RSA_0_prime / r.P_RSA_0;
  const double prod1 = r.L_taper * r.P_RSA_1_prime / r.P_RSA_1;

  InsertionLosses out;
  out.product = 0.5 * (prod0 + prod1);
  out.product_mismatch = std::abs(prod0 - prod1) / out.product;
  if (out.product_mismatch > r.tolerance)
    throw std::invalid_argument("the two L_0 L_1 estimates disagree by " +
                                std::to_string(100.0 * out.product_mismatch) + "%");
  out.L_0 = std::sqrt(out.product * ratio);
  out.L_1 = std::sqrt(out.product / ratio);
  require(out.L_0 > 0.0 && out.L_0 <= 1.0 + 1e-12, "derived L_0 outside (0, 1]");
  require(out.L_1 > 0.0 && out.L_1 <= 1.0 + 1e-12, "derived L_1 outside (0, 1]");
  return out;
}

double electronic_gain(double V_DC, double P_RSA) {
  positive(V_DC, "V_DC");
  positive(P_RSA, "P_RSA");
  return V_DC / P_RSA;
}

double modulation_depth(double P_Omega, const CalibrationRecord& record) {
  detail::nonnegative(P_Omega, "P_Omega");
  positive(record.R_L, "R_L");
  const double denom = record.G_EDFA * record.G_e * record.P_RSA_prime;
  if (!(denom > 0.0)) throw std::invalid_argument("modulation depth denominator is zero");
  return std::sqrt(2.0 * P_Omega * record.R_L) / denom;
}

InputErrors InputErrors::quoted() {
  InputErrors e;
  e.omega_o = 0.007;
  e.kappa = 0.007;
  e.kappa_e = 0.007;
  e.detuning = 0.003;
  e.gamma_i = 0.016;
  e.P_in = 0.04;
  e.omega_m = 0.006;
  e.gamma = 0.006;
  e.P_RSA = 0.006;
  return e;
}

namespace {

void check_ledger(const ThermometryLedger& l) {
  positive(l.omega_o.value, "ledger omega_o");
  positive(l.kappa.value, "ledger kappa");
  positive(l.kappa_e.value, "ledger kappa_e");
  detail::finite(l.detuning.value, "ledger detuning");
  positive(l.omega_m.value, "ledger omega_m");
  positive(l.gamma.value, "ledger gamma");
  positive(l.gamma_i.value, "ledger gamma_i");
  positive(l.P_in.value, "ledger P_in");
  detail::finite(l.P_RSA.value, "ledger P_RSA");
  positive(l.G_e, "ledger G_e");
  positive(l.G_EDFA, "ledger G_EDFA");
  positive(l.R_L, "ledger R_L");
}

struct LedgerValues {
  double omega_o, kappa, kappa_e, detuning, omega_m, gamma, gamma_i, P_in, P_RSA;
};

LedgerValues values_of(const ThermometryLedger& l) {
  return {l.omega_o.value, l.kappa.value, l.kappa_e.value, l.detuning.value, l.omega_m.value,
          l.gamma.value,   l.gamma_i.value, l.P_in.value,  l.P_RSA.value};
}

double formula(const LedgerValues& v, double G_e, double G_EDFA, double R_L) {
  const double G2 = std::pow(G_e * G_EDFA, 2);
  const double d = v.detuning - v.omega_m;
  const double k2 = 0.5 * v.kappa;
  return (2.0 * R_L / G2) * (v.P_RSA / (PhysicalConstants::hbar * v.omega_o)) *
         (1.0 / (v.kappa * (v.gamma - v.gamma_i))) * ((d * d + k2 * k2) / (0.5 * v.kappa_e * v.P_in));
}

}  // namespace

double phonon_number_formula(const ThermometryLedger& ledger) {
  check_ledger(ledger);
  if (!(ledger.gamma.value > ledger.gamma_i.value))
    throw std::invalid_argument("gamma <= gamma_i: no back-action damping to infer occupancy from");
  return formula(values_of(ledger), ledger.G_e, ledger.G_EDFA, ledger.R_L);
}

double phonon_uncertainty_analytic(const ThermometryLedger& l) {
  check_ledger(l);
  const double gm = l.gamma.value - l.gamma_i.value;
  require(gm > 0.0, "gamma <= gamma_i");
  const auto rel = [](const Measured& m) { return m.sigma / m.value; };
  const double d = l.detuning.value - l.omega_m.value;
  const double k = l.kappa.value;
  const double den = 0.25 * k * k + d * d;
  const double s_kappa = (0.5 * k) / den - 1.0 / k;
  const double s_delta = 2.0 * d / den;

  const double sum = std::pow(rel(l.omega_o), 2) + std::pow(rel(l.kappa_e), 2) +
                     std::pow(rel(l.P_in), 2) + std::pow(rel(l.P_RSA), 2) +
                     std::pow(l.gamma_i.sigma / gm, 2) + std::pow(l.gamma.sigma / gm, 2) +
                     std::pow(s_kappa * l.kappa.sigma, 2) +
                     std::pow(s_delta * l.detuning.sigma, 2) +
                     std::pow(s_delta * l.omega_m.sigma, 2);
  return std::sqrt(sum);
}

double phonon_uncertainty_monte_carlo(const ThermometryLedger& l, int draws, std::uint64_t seed) {
  const double nominal = phonon_number_formula(l);
  require(draws >= 2, "Monte-Carlo propagation needs at least two draws");
  Rng rng(seed);
  const auto perturb = [&](const Measured& m) { return m.value + m.sigma * rng.normal(); };

  double mean = 0.0, m2 = 0.0;
  int count = 0;
  for (int i = 0; i < draws; ++i) {
    LedgerValues v{perturb(l.omega_o), perturb(l.kappa),  perturb(l.kappa_e),
                   perturb(l.detuning), perturb(l.omega_m), perturb(l.gamma),
                   perturb(l.gamma_i), perturb(l.P_in),   perturb(l.P_RSA)};
    if (!(v.gamma > v.gamma_i)) continue;
    const double n = formula(v, l.G_e, l.G_EDFA, l.R_L);
    ++count;
    const double delta = n - mean;
    mean += delta / count;
    m2 += delta * (n - mean);
  }
  require(count >= 2, "Monte-Carlo draws all fell outside gamma > gamma_i");
  return std::sqrt(m2 / (count - 1)) / nominal;
}

ThermometryResult phonon_number(const LorentzFit& fit, const DetectorParams& gains,
                                const CavityParams& cavity, double detuning, double P_in,
                                double gamma_i, const InputErrors& errors) {
  ThermometryLedger l;
  l.omega_o = {cavity.omega_o(), errors.omega_o * cavity.omega_o()};
  l.kappa = {cavity.kappa(), errors.kappa * cavity.kappa()};
  l.kappa_e = {cavity.kappa_e(), errors.kappa_e * cavity.kappa_e()};
  l.detuning = {detuning, errors.detuning * std::abs(detuning)};
  l.omega_m = {fit.omega_m, errors.omega_m ? *errors.omega_m * fit.omega_m : fit.ci95[1]};
  l.gamma = {fit.gamma, errors.gamma ? *errors.gamma * fit.gamma : fit.ci95[2]};
  l.gamma_i = {gamma_i, errors.gamma_i * gamma_i};
  l.P_in = {P_in, errors.P_in * P_in};
  l.P_RSA = {fit.integrated_power, errors.P_RSA ? *errors.P_RSA * fit.integrated_power
                                                : 1.96 * fit.integrated_power_sigma};
  l.G_e = gains.electronic_gain;
  l.G_EDFA = gains.edfa_gain;
  l.R_L = gains.load;

  ThermometryResult r;
  r.ledger = l;
  r.n_bar = phonon_number_formula(l);
  r.relative_uncertainty = phonon_uncertainty_analytic(l);
  r.n_bar_sigma = r.relative_uncertainty * std::abs(r.n_bar);
  r.C = (l.gamma.value - l.gamma_i.value) / l.gamma_i.value;
  r.n_b = r.n_bar * (1.0 + r.C);
  r.T_b = bath_temperature(r.n_b, l.omega_m.value);
  return r;
}

UncertaintyReport phonon_uncertainty(const ThermometryResult& result, int draws,
                                     std::uint64_t seed) {
  UncertaintyReport u;
  u.analytic = phonon_uncertainty_analytic(result.ledger);
  u.monte_carlo = phonon_uncertainty_monte_carlo(result.ledger, draws, seed);
  return u;
}

ThermometryCurve mode_thermometry_curve(std::vector<ThermometryPoint> points) {
  require(points.size() >= 3, "thermometry curve needs at least 3 points");
  std::sort(points.begin(), points.end(),
            [](const ThermometryPoint& a, const ThermometryPoint& b) { return a.T_c < b.T_c; });

  const std::size_t n = points.size();
  const double nd = static_cast<double>(n);
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, std::abs(p.T_c));
  const double floor = std::pow(1e-9 * std::max(scale, 1.0), 2);

  const auto bic = [&](double rss, int k) {
    return nd * std::log(std::max(rss / nd, floor)) + k * std::log(nd);
  };

  // j = number of plateau points; j = 0 is the pure identity model
  double best = 0.0;
  std::size_t best_j = 0;
  double best_level = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    if (j == 1) continue;
    double level = 0.0;
    for (std::size_t i = 0; i < j; ++i) level += points[i].T_b;
    if (j > 0) level /= static_cast<double>(j);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double model = i < j ? level : points[i].T_c;
      rss += std::pow(points[i].T_b - model, 2);
    }
    const double score = bic(rss, j == 0 ? 0 : 2);
    if (j == 0 || score < best) {
      best = score;
      best_j = j;
      best_level = level;
    }
  }

  ThermometryCurve c;
  c.points = points;
  c.plateau_detected = best_j >= 2;
  c.plateau_count = best_j;
  if (c.plateau_detected) {
    c.plateau_level = best_level;
    double ss = 0.0;
    for (std::size_t i = 0; i < best_j; ++i) ss += std::pow(points[i].T_b - best_level, 2);
    c.plateau_spread = std::sqrt(ss / static_cast<double>(best_j - 1));
  }
  c.onset_T_c = best_j < n ? points[best_j].T_c : std::numeric_limits<double>::quiet_NaN();
  return c;
}

}  // namespace omcool

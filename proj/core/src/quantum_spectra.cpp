#include "omcool/quantum_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "checks.hpp"

namespace omcool {

namespace {

constexpr cdouble I{0.0, 1.0};

double wrap_phase(double phi) { return std::remainder(phi, 2.0 * std::numbers::pi); }

double spring_shifted(double G, double detuning, double omega_m, double kappa, bool enabled) {
  return enabled ? omega_m + optical_spring_shift(G, detuning, omega_m, kappa) : omega_m;
}

void require_red_resonant(const DriveState& drive, double omega_m) {
  detail::require(std::abs(drive.detuning - omega_m) <= 1e-9 * omega_m,
                  "RWA spectra require the drive detuning to equal omega_m");
}

}  // namespace

double optical_spring_shift(double G, double detuning, double omega_m, double kappa) {
  const double h = 0.5 * kappa;
  const double a = detuning - omega_m;
  const double b = detuning + omega_m;
  return G * G * (a / (a * a + h * h) + b / (b * b + h * h));
}

// x(w) = 1 / (i(w_m - w) + gamma/2)

cdouble ScatteringElements::s11_at(double omega) const {
  const cdouble x = 1.0 / (I * (omega_m - omega) + 0.5 * gamma());
  const double e = kappa_e / kappa;
  return 1.0 - e + gamma_OM * 0.5 * e * x;
}

cdouble ScatteringElements::n_opt_at(double omega) const {
  const cdouble x = 1.0 / (I * (omega_m - omega) + 0.5 * gamma());
  const double kp = kappa - 0.5 * kappa_e;
  const double k2 = kappa * kappa;
  return -std::sqrt(2.0 * kp * kappa_e / k2) + gamma_OM * std::sqrt(kp * kappa_e / (2.0 * k2)) * x;
}

cdouble ScatteringElements::s12_at(double omega) const {
  const cdouble x = 1.0 / (I * (omega_m - omega) + 0.5 * gamma());
  return I * G * std::sqrt(2.0 * gamma_i * kappa_e / (kappa * kappa)) * x;
}

ScatteringElements scattering_elements(const CavityParams& cavity, double omega_m, double gamma_i,
                                       double G, const FrequencyGrid& grid) {
  detail::positive(omega_m, "omega_m");
  detail::positive(gamma_i, "gamma_i");
  detail::nonnegative(G, "G");

  ScatteringElements e;
  e.grid = grid;
  e.G = G;
  e.kappa = cavity.kappa();
  e.kappa_e = cavity.kappa_e();
  e.gamma_i = gamma_i;
  e.gamma_OM = 4.0 * G * G / cavity.kappa();
  e.omega_m = omega_m;
  e.weak_coupling = G < 0.1 * cavity.kappa();

  const std::size_t n = grid.size();
  e.s11.resize(n);
  e.s12.resize(n);
  e.n_opt.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    e.s11[k] = e.s11_at(grid[k]);
    e.s12[k] = e.s12_at(grid[k]);
    e.n_opt[k] = e.n_opt_at(grid[k]);
  }
  return e;
}

ScatteringElements scattering_elements(const SystemParams& params, const DriveState& drive,
                                       const FrequencyGrid& grid, const SpectraOptions& options) {
  require_red_resonant(drive, params.mech.omega_m());
  const double G = params.g * std::sqrt(drive.n_c);
  const double omega_m = spring_shifted(G, drive.detuning, params.mech.omega_m(),
                                        params.cavity.kappa(), options.optical_spring);
  return scattering_elements(params.cavity, omega_m, params.mech.gamma_i0(), G, grid);
}

ScatteringElements scattering_elements(const SystemParams& params, const DriveState& drive,
                                       std::span<const double> omega,
                                       const SpectraOptions& options) {
  return scattering_elements(params, drive, FrequencyGrid::from_samples(omega), options);
}

PhotocurrentPSD photocurrent_psd(const ScatteringElements& elements, double n_b) {
  detail::nonnegative(n_b, "n_b");
  PhotocurrentPSD p;
  p.n_bar = elements.gamma_i * n_b / elements.gamma();
  p.spectrum.grid = elements.grid;
  p.spectrum.units = "1";
  p.spectrum.sidedness = Sidedness::Single;
  p.spectrum.values.resize(elements.grid.size());
  for (std::size_t k = 0; k < elements.grid.size(); ++k) {
    const double w = elements.grid[k];
    p.spectrum.values[k] =
        1.0 + n_b * (std::norm(elements.s12[k]) + std::norm(elements.s12_at(-w)));
  }
  return p;
}

double sideband_linewidth(double gamma_i, double C, SidebandSide side) {
  detail::positive(gamma_i, "gamma_i");
  detail::nonnegative(C, "C");
  if (side == SidebandSide::Red) return gamma_i * (1.0 + C);
  detail::require(C < 1.0, "blue-detuned drive with C >= 1 is past the self-oscillation threshold");
  return gamma_i * (1.0 - C);
}

Spectrum sb_lorentzians(double n_bar, double gamma, double omega_m, const FrequencyGrid& grid,
                        SidebandSide side) {
  detail::nonnegative(n_bar, "n_bar");
  detail::positive(gamma, "gamma");
  const double weight = side == SidebandSide::Red ? n_bar : n_bar + 1.0;
  const double h = 0.5 * gamma;
  Spectrum s;
  s.grid = grid;
  s.units = "1/Hz";
  s.sidedness = Sidedness::Single;
  s.values.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid[k] - omega_m;
    s.values[k] = weight * gamma / (x * x + h * h);
  }
  return s;
}

cdouble reflection_coefficient(double omega, const CavityParams& cavity, double detuning,
                               double omega_m, double gamma_i, double G) {
  const cdouble mech = I * (omega_m - omega) + 0.5 * gamma_i;
  return 0.5 * cavity.kappa_e() / (I * (detuning - omega) + 0.5 * cavity.kappa() + G * G / mech);
}

double half_maximum_width(const FrequencyGrid& grid, std::span<const double> depth) {
  detail::require(depth.size() == grid.size() && depth.size() >= 3, "depth/grid size mismatch");
  const auto peak = std::max_element(depth.begin(), depth.end());
  const std::size_t kp = static_cast<std::size_t>(peak - depth.begin());
  const double level = 0.5 * *peak;
  detail::require(*peak > 0.0, "no dip present");

  std::size_t lo = kp;
  while (lo > 0 && depth[lo] > level) --lo;
  std::size_t hi = kp;
  while (hi + 1 < depth.size() && depth[hi] > level) ++hi;
  if (depth[lo] > level || depth[hi] > level)
    throw std::invalid_argument("half-depth crossing lies outside the grid");

  const auto cross = [&](std::size_t a, std::size_t b) {
    const double t = (level - depth[a]) / (depth[b] - depth[a]);
    return grid[a] + t * (grid[b] - grid[a]);
  };
  return cross(hi - 1, hi) - cross(lo + 1, lo);
}

EitSpectrum eit_reflection(const CavityParams& cavity, double omega_m, double gamma_i, double G,
                           double detuning, const FrequencyGrid& grid, const EitOptions& options) {
  detail::positive(omega_m, "omega_m");
  detail::positive(gamma_i, "gamma_i");
  detail::nonnegative(G, "G");
  detail::positive(options.omega_LI, "omega_LI");
  detail::require(grid.contains(omega_m), "two-photon detuning grid must contain omega_m");

  const double wm = spring_shifted(G, detuning, omega_m, cavity.kappa(), options.optical_spring);
  const auto r_at = [&](double w) { return reflection_coefficient(w, cavity, detuning, wm, gamma_i, G); };

  EitSpectrum s;
  s.grid = grid;
  s.omega_m = wm;
  s.omega_LI = options.omega_LI;
  s.delay_valid = options.omega_LI < 0.5 * (gamma_i + 4.0 * G * G / cavity.kappa());

  const std::size_t n = grid.size();
  s.r.resize(n);
  s.reflection.resize(n);
  s.phase.resize(n);
  s.group_delay.resize(n);
  std::vector<double> depth(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = grid[k];
    s.r[k] = r_at(w);
    s.reflection[k] = std::norm(s.r[k]);
    const double bare = std::norm(reflection_coefficient(w, cavity, detuning, wm, gamma_i, 0.0));
    depth[k] = 1.0 - s.reflection[k] / bare;
    s.phase[k] =
        0.5 * wrap_phase(std::arg(r_at(w - options.omega_LI)) - std::arg(r_at(w + options.omega_LI)));
    s.group_delay[k] = s.phase[k] / options.omega_LI;
  }

  const auto peak = std::max_element(depth.begin(), depth.end());
  s.dip_center = grid[static_cast<std::size_t>(peak - depth.begin())];
  s.dip_width = G > 0.0 ? half_maximum_width(grid, depth) : 0.0;
  return s;
}

EitSpectrum eit_reflection(const SystemParams& params, const DriveState& drive,
                           const FrequencyGrid& grid, const EitOptions& options) {
  return eit_reflection(params.cavity, params.mech.omega_m(), params.mech.gamma_i0(),
                        params.g * std::sqrt(drive.n_c), drive.detuning, grid, options);
}

}  // namespace omcool

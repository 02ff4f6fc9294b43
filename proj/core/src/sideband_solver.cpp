#include "omcool/sideband_solver.hpp"

#include <cmath>
#include <string>

#include "checks.hpp"
#include "omcool/constants.hpp"

namespace omcool {

namespace {

constexpr cdouble I{0.0, 1.0};

cdouble denominator(const SidebandProblem& p, double shift) {
  return I * (p.drive.detuning - shift) + 0.5 * p.cavity.kappa();
}

double relative_change(cdouble a, cdouble b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

double SidebandProblem::modulation_factor() const { return std::abs(g * beta_0) / omega_m; }

cdouble SidebandProblem::alpha_in() const { return std::sqrt(drive.N_in); }

Eigen::MatrixXcd build_coupling_matrix(const SidebandProblem& problem) {
  detail::require(problem.order >= 1, "sideband truncation order must be >= 1");
  const int n = 2 * problem.order + 1;
  const cdouble coupling = I * problem.g * problem.beta_0;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int row = 0; row < n; ++row) {
    const int p = row - problem.order;
    M(row, row) = denominator(problem, p * problem.omega_m);
    if (row > 0) M(row, row - 1) = coupling;
    if (row + 1 < n) M(row, row + 1) = coupling;
  }
  return M;
}

Eigen::VectorXcd build_drive_vector(const SidebandProblem& problem) {
  detail::require(problem.order >= 1, "sideband truncation order must be >= 1");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(2 * problem.order + 1);
  a(problem.order) = -std::sqrt(0.5 * problem.cavity.kappa_e()) * problem.alpha_in();
  return a;
}

SidebandSolution solve_sidebands(const SidebandProblem& problem) {
  const Eigen::MatrixXcd M = build_coupling_matrix(problem);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const double rcond = lu.rcond();
  if (!(rcond >= 1e-14)) {
    throw SingularSystemError(
        "sideband coupling matrix is singular or ill-conditioned (rcond ~ " +
            std::to_string(rcond) + ")",
        rcond);
  }
  const Eigen::VectorXcd alpha = lu.solve(build_drive_vector(problem));
  SidebandSolution s;
  s.order = problem.order;
  s.amplitudes.assign(alpha.data(), alpha.data() + alpha.size());
  return s;
}

RefinedSolution solve_sidebands_refined(const SidebandProblem& problem, double rel_tol,
                                        int max_order) {
  SidebandProblem p = problem;
  RefinedSolution out;
  out.solution = solve_sidebands(p);
  while (p.order + 2 <= max_order) {
    p.order += 2;
    SidebandSolution next = solve_sidebands(p);
    ++out.iterations;
    const double change = std::max(relative_change(next.at(1), out.solution.at(1)),
                                   relative_change(next.at(-1), out.solution.at(-1)));
    out.solution = std::move(next);
    if (change < rel_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

ClosedFormSidebands closed_form_sidebands(const SidebandProblem& problem) {
  ClosedFormSidebands c;
  c.alpha_0 = -std::sqrt(0.5 * problem.cavity.kappa_e()) * problem.alpha_in() /
              denominator(problem, 0.0);
  const cdouble drive = -I * problem.g * problem.beta_0 * c.alpha_0;
  c.alpha_plus = drive / denominator(problem, problem.omega_m);
  c.alpha_minus = drive / denominator(problem, -problem.omega_m);
  return c;
}

SidebandPower detected_sideband_power(const SidebandProblem& problem) {
  const ClosedFormSidebands c = closed_form_sidebands(problem);
  const double hw = PhysicalConstants::hbar * problem.cavity.omega_o();
  const cdouble scale = 2.0 * std::sqrt(0.5 * problem.cavity.kappa_e()) * problem.alpha_in();

  SidebandPower p;
  p.A_plus = scale * c.alpha_plus;
  p.A_minus = scale * c.alpha_minus;
  // A = |A| exp(-i phi)
  const double phi_p = -std::arg(p.A_plus);
  const double phi_m = -std::arg(p.A_minus);
  p.A_cos = std::abs(p.A_plus) * std::cos(phi_p) + std::abs(p.A_minus) * std::cos(phi_m);
  p.A_sin = std::abs(p.A_plus) * std::sin(phi_p) - std::abs(p.A_minus) * std::sin(phi_m);
  p.P_SB = hw * std::hypot(p.A_cos, p.A_sin);
  p.P_SB_upper = hw * std::abs(p.A_plus);
  return p;
}

double spp_prefactor(const SidebandProblem& problem) {
  const double hw = PhysicalConstants::hbar * problem.cavity.omega_o();
  const double k2 = 0.5 * problem.cavity.kappa();
  const double d = problem.drive.detuning;
  const double dm = d - problem.omega_m;
  const double N = problem.drive.N_in;
  const double ke = problem.cavity.kappa_e();
  return hw * hw * problem.g * problem.g * std::norm(problem.beta_0) * ke * ke * N * N /
         ((d * d + k2 * k2) * (dm * dm + k2 * k2));
}

Spectrum spp_spectral_density(const SidebandProblem& problem, const FrequencyGrid& grid,
                              double gamma) {
  detail::positive(gamma, "gamma");
  detail::require(grid.contains(problem.omega_m), "grid must straddle omega_m");
  const double weight = spp_prefactor(problem);
  Spectrum s;
  s.grid = grid;
  s.units = "W^2/Hz";
  s.sidedness = Sidedness::Single;
  s.values.resize(grid.size());
  const double h = 0.5 * gamma;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = grid[k] - problem.omega_m;
    s.values[k] = weight * gamma / (x * x + h * h);
  }
  return s;
}

}  // namespace omcool

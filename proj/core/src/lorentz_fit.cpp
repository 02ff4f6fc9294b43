#include "omcool/lorentz_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "checks.hpp"

namespace omcool {

double lorentzian(double omega, const LorentzParams& p) {
  const double u = 2.0 * (omega - p.omega_m) / p.gamma;
  return p.A / (1.0 + u * u);
}

namespace {

/// Peak, centre and half-maximum width of the running mean over 2h + 1 bins.
LorentzParams estimate_smoothed(const Spectrum& spectrum, std::size_t h) {
  const std::size_t n = spectrum.size();
  detail::require(n >= 5, "spectrum too short to fit");

  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= h ? k - h : 0;
    const std::size_t hi = std::min(n - 1, k + h);
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += spectrum.values[j];
    s[k] = acc / static_cast<double>(hi - lo + 1);
  }
  const auto peak = std::max_element(s.begin(), s.end());
  const std::size_t kp = static_cast<std::size_t>(peak - s.begin());
  const double half = 0.5 * *peak;

  std::size_t lo = kp, hi = kp;
  while (lo > 0 && s[lo] > half) --lo;
  while (hi + 1 < n && s[hi] > half) ++hi;

  LorentzParams p;
  p.A = std::max(spectrum.values[kp], *peak);
  p.omega_m = spectrum.grid[kp];
  p.gamma = std::max(spectrum.grid[hi] - spectrum.grid[lo], 2.0 * spectrum.grid.step());
  return p;
}

LorentzFit fit_from(const Spectrum& spectrum, const LorentzParams& guess, const LorentzFitOptions& options) {
  detail::positive(guess.gamma, "initial gamma");
  detail::require(guess.A != 0.0, "initial amplitude must be non-zero");

  const std::size_t n = spectrum.size();
  const auto require_resolved = [&](double center, double gamma) {
    std::size_t in_band = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (std::abs(spectrum.grid[k] - center) <= 2.0 * gamma) ++in_band;
    if (in_band < 10)
      throw std::invalid_argument("fewer than 10 samples within +-2 gamma of the peak");
  };
  require_resolved(guess.omega_m, guess.gamma);

  // normalized coordinates: x = (w - c)/s, y = value/A0
  const double A0 = guess.A, c = guess.omega_m, s = guess.gamma;
  Eigen::VectorXd x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x(k) = (spectrum.grid[k] - c) / s;
    y(k) = spectrum.values[k] / A0;
  }

  const auto evaluate = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const double a = q(0), m = q(1), w = q(2);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double u = 2.0 * (x(k) - m) / w;
      const double D = 1.0 + u * u;
      r(k) = y(k) - a / D;
      if (J) {
        (*J)(k, 0) = 1.0 / D;
        (*J)(k, 1) = 4.0 * a * u / (w * D * D);
        (*J)(k, 2) = 2.0 * a * u * u / (w * D * D);
      }
    }
    return r.squaredNorm();
  };

  Eigen::Vector3d q(1.0, 0.0, 1.0);
  Eigen::VectorXd r(n), r_try(n);
  Eigen::MatrixXd J(n, 3);
  double cost = evaluate(q, r, &J);
  double lambda = 1e-3;

  LorentzFit fit;
  for (int it = 0; it < options.max_iterations; ++it) {
    fit.iterations = it + 1;
    const Eigen::Matrix3d JtJ = J.transpose() * J;
    const Eigen::Vector3d g = J.transpose() * r;

    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::Matrix3d Aug = JtJ;
      for (int i = 0; i < 3; ++i) Aug(i, i) += lambda * std::max(JtJ(i, i), 1e-300);
      const Eigen::Vector3d delta = Aug.ldlt().solve(g);
      const Eigen::Vector3d q_try = q + delta;
      if (!(q_try(2) > 0.0) || !delta.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const double cost_try = evaluate(q_try, r_try, nullptr);
      if (cost_try <= cost) {
        const bool small_step =
            delta.norm() <= options.step_tolerance * (q.norm() + options.step_tolerance);
        const bool flat = cost - cost_try <= 1e-15 * cost;
        q = q_try;
        cost = evaluate(q, r, &J);
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (small_step || flat) fit.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    // no downhill step at any damping: the current point is a minimum to
    // working precision
    if (!accepted) fit.converged = true;
    if (fit.converged) break;
  }
  if (!fit.converged)
    fit.diagnostic = "no convergence after " + std::to_string(options.max_iterations) +
                     " iterations; returning best point";

  fit.A = q(0) * A0;
  fit.omega_m = c + q(1) * s;
  fit.gamma = q(2) * s;
  fit.integrated_power = fit.A * fit.gamma / 4.0;
  // the smoothed estimate cannot see a line narrower than a few bins
  require_resolved(fit.omega_m, fit.gamma);
  fit.residual_norm = std::sqrt(cost) * std::abs(A0);

  // covariance in physical units: scale normalized Jacobian by D = diag(A0, s, s)
  const double dof = static_cast<double>(n) - 3.0;
  const double sigma2 = dof > 0.0 ? cost * A0 * A0 / dof : 0.0;
  const Eigen::Matrix3d JtJ = J.transpose() * J;
  Eigen::Matrix3d cov_n = JtJ.inverse();  // normalized; model units A0
  const Eigen::Vector3d D(A0, s, s);
  Eigen::Matrix3d cov;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) cov(i, j) = cov_n(i, j) * D(i) * D(j) * sigma2 / (A0 * A0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) fit.covariance[i][j] = cov(i, j);
    fit.ci95[i] = 1.96 * std::sqrt(std::max(cov(i, i), 0.0));
  }
  const double dA = fit.gamma / 4.0, dG = fit.A / 4.0;
  fit.integrated_power_sigma =
      std::sqrt(std::max(dA * dA * cov(0, 0) + dG * dG * cov(2, 2) + 2.0 * dA * dG * cov(0, 2), 0.0));
  return fit;
}

}  // namespace

LorentzParams estimate_lorentzian(const Spectrum& spectrum) { return estimate_smoothed(spectrum, 2); }

LorentzFit fit_lorentzian(const Spectrum& spectrum, const std::optional<LorentzParams>& initial_guess,
                          const LorentzFitOptions& options) {
  if (initial_guess) return fit_from(spectrum, *initial_guess, options);

  // A 5-bin estimate tracks narrow lines; on noisy traces it can latch onto a
  // noise spike, so a second start from a 2%-of-span smoothing competes on
  // residual.
  std::vector<std::size_t> windows{2};
  if (spectrum.size() / 100 > 2) windows.push_back(spectrum.size() / 100);
  std::optional<LorentzFit> best;
  std::exception_ptr first_error;
  for (std::size_t h : windows) {
    try {
      LorentzFit f = fit_from(spectrum, estimate_smoothed(spectrum, h), options);
      const bool better = !best || (f.converged && !best->converged) ||
                          (f.converged == best->converged && f.residual_norm < best->residual_norm);
      if (better) best = std::move(f);
    } catch (const std::invalid_argument&) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (!best) std::rethrow_exception(first_error);
  return *best;
}

}  // namespace omcool

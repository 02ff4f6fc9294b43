#include "omcool/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "checks.hpp"
#include "omcool/constants.hpp"

namespace omcool {

FrequencyGrid::FrequencyGrid(double start, double step, std::size_t size)
    : start_(detail::finite(start, "grid start")), step_(detail::positive(step, "grid step")),
      size_(size) {}

FrequencyGrid FrequencyGrid::centered(double center, double half_span, std::size_t size) {
  detail::require(size >= 2, "grid needs at least two points");
  detail::positive(half_span, "grid half span");
  const double step = 2.0 * half_span / static_cast<double>(size - 1);
  return FrequencyGrid(center - half_span, step, size);
}

FrequencyGrid FrequencyGrid::from_samples(std::span<const double> omega, double rel_tol) {
  detail::require(omega.size() >= 2, "grid needs at least two points");
  const double step = (omega.back() - omega.front()) / static_cast<double>(omega.size() - 1);
  detail::require(step > 0.0, "grid must be strictly increasing");
  for (std::size_t k = 1; k < omega.size(); ++k) {
    const double d = omega[k] - omega[k - 1];
    if (std::abs(d - step) > rel_tol * step)
      throw std::invalid_argument("frequency grid is not uniform at sample " + std::to_string(k));
  }
  return FrequencyGrid(omega.front(), step, omega.size());
}

std::vector<double> FrequencyGrid::values() const {
  std::vector<double> v(size_);
  for (std::size_t k = 0; k < size_; ++k) v[k] = (*this)[k];
  return v;
}

double Spectrum::integrate_hz() const {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t k = 1; k + 1 < values.size(); ++k) s += values[k];
  return s * grid.step() / kTwoPi;
}

Spectrum subtract_background(const Spectrum& signal, const Spectrum& background) {
  if (!(signal.grid == background.grid) || signal.values.size() != background.values.size())
    throw std::invalid_argument("signal and background grids differ");
  if (signal.units != background.units)
    throw std::invalid_argument("signal and background units differ");
  if (signal.sidedness != background.sidedness)
    throw std::invalid_argument("signal and background sidedness differ");
  Spectrum out = signal;
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] -= background.values[k];
  return out;
}

std::string to_string(Sidedness s) { return s == Sidedness::Single ? "single" : "double"; }

Sidedness sidedness_from_string(const std::string& s) {
  if (s == "single") return Sidedness::Single;
  if (s == "double") return Sidedness::Double;
  throw std::invalid_argument("unknown sidedness '" + s + "'");
}

}  // namespace omcool

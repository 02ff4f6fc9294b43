#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace omcool {

enum class Sidedness { Single, Double };

/// Uniform angular-frequency grid omega_k = start + k*step (rad/s).
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  FrequencyGrid(double start, double step, std::size_t size);

  /// Grid centred on `center` spanning [center - half_span, center + half_span].
  static FrequencyGrid centered(double center, double half_span, std::size_t size);

  /// Reconstructs a grid from explicit samples; throws if they are not
  /// uniformly spaced to within `rel_tol` of the mean step.
  static FrequencyGrid from_samples(std::span<const double> omega, double rel_tol = 1e-6);

  double start() const { return start_; }
  double step() const { return step_; }
  std::size_t size() const { return size_; }
  double stop() const { return start_ + step_ * static_cast<double>(size_ - 1); }
  double operator[](std::size_t k) const { return start_ + step_ * static_cast<double>(k); }
  bool contains(double omega) const { return size_ > 0 && omega >= start_ && omega <= stop(); }
  std::vector<double> values() const;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  double start_ = 0.0;
  double step_ = 1.0;
  std::size_t size_ = 0;
};

/// Real PSD samples on a uniform grid. `units` names the per-Hz density of the
/// samples (e.g. "W/Hz", "W^2/Hz", "1"); integrals are taken over ordinary
/// frequency.
struct Spectrum {
  FrequencyGrid grid;
  std::vector<double> values;
  std::string units;
  Sidedness sidedness = Sidedness::Single;

  std::size_t size() const { return values.size(); }

  /// Trapezoidal integral over ordinary frequency (Hz).
  double integrate_hz() const;
};

/// Pointwise signal - background. Throws if the grids or units differ.
Spectrum subtract_background(const Spectrum& signal, const Spectrum& background);

std::string to_string(Sidedness s);
Sidedness sidedness_from_string(const std::string& s);

}  // namespace omcool

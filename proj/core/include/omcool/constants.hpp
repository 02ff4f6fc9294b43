#pragma once

#include <numbers>

namespace omcool {

/// CODATA 2018 exact/recommended values (SI).
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double k_B = 1.380649e-23;      // J/K
  static constexpr double c = 299792458.0;         // m/s
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Ordinary frequency (Hz) to angular frequency (rad/s).
constexpr double hz_to_rad(double f_hz) { return kTwoPi * f_hz; }

/// Angular frequency (rad/s) to ordinary frequency (Hz).
constexpr double rad_to_hz(double omega) { return omega / kTwoPi; }

}  // namespace omcool

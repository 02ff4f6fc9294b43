#pragma once

// Thermo-optic thermometry and the decomposition of the intrinsic mechanical
// damping into reference, thermal and free-carrier channels.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace omcool {

/// Silicon refractive index n(T) on a strictly increasing temperature grid,
/// interpolated with a monotone piecewise-cubic Hermite (PCHIP) curve.
class RefractiveIndexTable {
 public:
  /// Validity defaults to the full span of the grid. Needs at least 4 points.
  RefractiveIndexTable(std::vector<double> T, std::vector<double> n);
  RefractiveIndexTable(std::vector<double> T, std::vector<double> n, double valid_min,
                       double valid_max);

  /// Throws std::out_of_range outside [valid_min, valid_max].
  double n(double T) const;
  double dn_dT(double T) const;
  double valid_min() const { return valid_min_; }
  double valid_max() const { return valid_max_; }
  bool contains(double T) const { return T >= valid_min_ && T <= valid_max_; }
  const std::vector<double>& temperatures() const { return T_; }
  const std::vector<double>& indices() const { return n_; }

  /// Synthetic, non-authoritative table (30 K to 320 K) built from
  /// dn/dT = S x^p / (1 + x^p), x = T / 45 K, with p and S calibrated so that
  /// the 17.6 K to 300 K shift is 12.5 nm and the two low-temperature bounds
  /// of the largest measured shift are 16.8 K and 7.8 K.
  static const RefractiveIndexTable& synthetic_default();

  /// CSV with columns T_K,n.
  static RefractiveIndexTable from_csv(const std::string& path);

  struct Interp;  // opaque interpolant

 private:
  std::vector<double> T_;
  std::vector<double> n_;
  double valid_min_;
  double valid_max_;
  std::shared_ptr<const Interp> interp_;
};

struct SyntheticIndexCalibration {
  double exponent = 0.0;  // p
  double slope = 0.0;     // S, 1/K
  double T_knee = 45.0;
  double n_30 = 3.4440;
};

/// Constants behind RefractiveIndexTable::synthetic_default().
const SyntheticIndexCalibration& synthetic_index_calibration();

struct ThermoOpticModel {
  double overlap = 7.5066e-2;
  double lambda_ref = 1537e-9;  // m, resonance at T_ref
  double T_ref = 17.6;          // K

  void validate() const;
  double omega_ref() const;
};

/// How n(T) is continued below the table's validity.
enum class BoundMode {
  None,  // out-of-range temperatures are an error
  Max,   // dn/dT = 0 below the table (upper bound on the temperature rise)
  Min,   // dn/dT frozen at its value at the table edge (lower bound)
};

/// n(T) with the requested continuation below valid_min.
double index_with_bound(double T, const RefractiveIndexTable& table, BoundMode mode);

struct ThermoOpticShift {
  double domega = 0.0;   // rad/s
  double dlambda = 0.0;  // m
};

/// w - w_0 = -n(T_0) w_0 overlap (n(T) - n(T_0)); the wavelength shift is
/// taken from the shifted frequency exactly.
ThermoOpticShift thermo_optic_shift(double T, double T_0, const ThermoOpticModel& model,
                                    const RefractiveIndexTable& table,
                                    BoundMode mode = BoundMode::None);

/// Temperature rise above model.T_ref that reproduces the wavelength shift
/// `dlambda` under the given bound. Throws if the shift exceeds the table.
double bound_temperature_rise(double dlambda, const ThermoOpticModel& model,
                              const RefractiveIndexTable& table, BoundMode mode);

struct PowerLaw {
  double A = 0.0;
  double B = 0.0;
  double operator()(double x) const;
};

struct PowerLawFit {
  PowerLaw law;
  /// Covariance of (ln A, B) from the log-space residuals.
  std::array<std::array<double, 2>, 2> covariance{};
  double residual_rms = 0.0;  // log space
};

/// Least squares of ln y = ln A + B ln x. Needs >= 3 strictly positive pairs.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// gamma_iT(T) = sum_k c_k (T - T_ref)^k, k = 1..degree (no constant term).
struct ThermalDampingPolynomial {
  double T_ref = 17.6;
  std::vector<double> coefficients;  // c_1, c_2, ... in rad/s / K^k
  double T_max = 320.0;

  double operator()(double T) const;
};

/// Fits gamma_iT from (T, Q_m) pairs: gamma_i(T) = omega_m / Q_m(T), less gamma_i0.
ThermalDampingPolynomial fit_thermal_damping(std::span<const double> T, std::span<const double> Q_m,
                                             double omega_m, double gamma_i0, double T_ref = 17.6,
                                             int degree = 3);

struct DampingDecomposition {
  double gamma_i0 = 0.0;
  ThermalDampingPolynomial thermal;
  PowerLaw free_carrier;                       // gamma_iFC(n_c), rad/s
  std::function<double(double)> temperature;   // T(n_c), K
  PowerLaw free_carrier_shift;                 // blue shift A n_c^B, m

  /// Non-authoritative defaults: gamma_iT / 2pi = 500 dT + 23.3 dT^2 Hz,
  /// gamma_iFC = A n_c^1.2 reaching 2pi x 20 kHz at n_c = 2000, and a linear
  /// heating map reaching 13.2 K at n_c = 2000.
  static DampingDecomposition synthetic_default(double gamma_i0, double T_ref = 17.6);
};

/// Linear heating map T(n_c) = T_ref + rise_at_ref * n_c / n_ref.
std::function<double(double)> linear_heating(double T_ref, double rise_at_ref, double n_ref);

struct DampingBreakdown {
  double T = 0.0;
  double gamma_i0 = 0.0;
  double gamma_T = 0.0;
  double gamma_FC = 0.0;
  double total = 0.0;
};

/// gamma_i(n_c) = gamma_i0 + gamma_iT(T) + gamma_iFC(n_c) at an explicit temperature.
DampingBreakdown total_intrinsic_damping(double n_c, double T, const DampingDecomposition& d);

/// Same, with T taken from the decomposition's heating map.
DampingBreakdown total_intrinsic_damping(double n_c, const DampingDecomposition& d);

/// Back-action damping at arbitrary detuning,
/// g^2 n_c kappa [1/((D - w_m)^2 + (k/2)^2) - 1/((D + w_m)^2 + (k/2)^2)].
double backaction_rate_detuned(double g, double n_c, double kappa, double omega_m, double detuning);

/// Far-detuned approximation (4 g^2 n_c / kappa)(omega_m / Delta)^2.
double backaction_rate_far(double g, double n_c, double kappa, double omega_m, double detuning);

struct FarDetunedSample {
  double n_c = 0.0;
  double detuning = 0.0;      // rad/s
  double gamma_cooled = 0.0;  // rad/s
};

/// gamma_cooled - gamma_i0 - backaction_rate_far for each sample.
std::vector<double> excess_loss_far_detuned(std::span<const FarDetunedSample> samples, double g,
                                            double kappa, double omega_m, double gamma_i0);

}  // namespace omcool

#include "omcool/thermal_models.hpp"

#include <math.h>  // boost 1.74 pchip calls isnan unqualified

#include <Eigen/Dense>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "checks.hpp"
#include "omcool/constants.hpp"
#include "omcool/spectrum_io.hpp"

namespace omcool {

using detail::positive;
using detail::require;

struct RefractiveIndexTable::Interp {
  boost::math::interpolators::pchip<std::vector<double>> curve;
};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

std::shared_ptr<const RefractiveIndexTable::Interp> build_interp(const std::vector<double>& T,
                                                                 const std::vector<double>& n,
                                                                 double d_left, double d_right) {
  std::vector<double> x = T, y = n;
  return std::make_shared<const RefractiveIndexTable::Interp>(RefractiveIndexTable::Interp{
      boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(y), d_left,
                                                             d_right)});
}

}  // namespace

RefractiveIndexTable::RefractiveIndexTable(std::vector<double> T, std::vector<double> n)
    : RefractiveIndexTable(T, n, T.empty() ? 0.0 : T.front(), T.empty() ? 0.0 : T.back()) {}

RefractiveIndexTable::RefractiveIndexTable(std::vector<double> T, std::vector<double> n,
                                           double valid_min, double valid_max)
    : T_(std::move(T)), n_(std::move(n)), valid_min_(valid_min), valid_max_(valid_max) {
  require(T_.size() == n_.size(), "index table columns differ in length");
  require(T_.size() >= 4, "index table needs at least 4 rows");
  for (std::size_t k = 1; k < T_.size(); ++k)
    require(T_[k] > T_[k - 1], "index table temperatures must be strictly increasing");
  for (double v : n_) positive(v, "refractive index");
  require(valid_min_ >= T_.front() && valid_max_ <= T_.back() && valid_min_ < valid_max_,
          "declared validity must lie inside the table");
  interp_ = build_interp(T_, n_, kNaN, kNaN);
}

double RefractiveIndexTable::n(double T) const {
  if (!contains(T))
    throw std::out_of_range("temperature " + std::to_string(T) + " K outside the index table's validity");
  return interp_->curve(T);
}

double RefractiveIndexTable::dn_dT(double T) const {
  if (!contains(T))
    throw std::out_of_range("temperature " + std::to_string(T) + " K outside the index table's validity");
  return interp_->curve.prime(T);
}

RefractiveIndexTable RefractiveIndexTable::from_csv(const std::string& path) {
  const CsvTable csv = read_csv_table(path);
  return RefractiveIndexTable(csv.column("T_K"), csv.column("n"));
}

namespace {

double index_slope_shape(double T, double p, double T_knee) {
  const double xp = std::pow(T / T_knee, p);
  return xp / (1.0 + xp);
}

double integrate_shape(double a, double b, double p, double T_knee) {
  // split into 1 K panels; 20-point Gauss-Legendre on each is exact to
  // rounding for this smooth integrand
  double sum = 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 1.0)));
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    sum += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double T) { return index_slope_shape(T, p, T_knee); }, lo, lo + h);
  }
  return sum;
}

SyntheticIndexCalibration calibrate_synthetic_index() {
  SyntheticIndexCalibration c;
  const ThermoOpticModel model;
  const double T_edge = 30.0;
  const double dT_max = 16.8, dT_min = 7.8;

  // equal index change from both continuations of the same shift:
  // integral over [30, T_ref + dT_max] of dn/dT = dT_min * dn/dT(30)
  const double T_top = model.T_ref + dT_max;
  c.exponent = bisect(
      [&](double p) {
        return integrate_shape(T_edge, T_top, p, c.T_knee) - dT_min * index_slope_shape(T_edge, p, c.T_knee);
      },
      1.0, 30.0);

  // 12.5 nm red shift from T_ref (index pinned at n(30) below the table) to 300 K
  const double dlambda = 12.5e-9;
  const double I = integrate_shape(T_edge, 300.0, c.exponent, c.T_knee);
  c.slope = (1.0 - model.lambda_ref / (model.lambda_ref + dlambda)) / (c.n_30 * model.overlap * I);
  return c;
}

}  // namespace

const SyntheticIndexCalibration& synthetic_index_calibration() {
  static const SyntheticIndexCalibration c = calibrate_synthetic_index();
  return c;
}

const RefractiveIndexTable& RefractiveIndexTable::synthetic_default() {
  static const RefractiveIndexTable table = [] {
    const SyntheticIndexCalibration& c = synthetic_index_calibration();
    std::vector<double> T, n;
    for (int k = 0; k <= 300; ++k) T.push_back(30.0 + 0.1 * k);
    for (int k = 1; k <= 520; ++k) T.push_back(60.0 + 0.5 * k);
    n.reserve(T.size());
    double acc = c.n_30;
    n.push_back(acc);
    for (std::size_t k = 1; k < T.size(); ++k) {
      acc += c.slope * integrate_shape(T[k - 1], T[k], c.exponent, c.T_knee);
      n.push_back(acc);
    }
    RefractiveIndexTable t(T, n);
    // exact end slopes keep the frozen-slope continuation faithful
    t.interp_ = build_interp(t.T_, t.n_, c.slope * index_slope_shape(T.front(), c.exponent, c.T_knee),
                             c.slope * index_slope_shape(T.back(), c.exponent, c.T_knee));
    return t;
  }();
  return table;
}

void ThermoOpticModel::validate() const {
  require(overlap > 0.0 && overlap < 1.0, "overlap factor must lie in (0, 1)");
  positive(lambda_ref, "reference wavelength");
  positive(T_ref, "reference temperature");
}

double ThermoOpticModel::omega_ref() const { return kTwoPi * PhysicalConstants::c / lambda_ref; }

double index_with_bound(double T, const RefractiveIndexTable& table, BoundMode mode) {
  if (T >= table.valid_min()) return table.n(T);
  switch (mode) {
    case BoundMode::Max:
      return table.n(table.valid_min());
    case BoundMode::Min:
      return table.n(table.valid_min()) + table.dn_dT(table.valid_min()) * (T - table.valid_min());
    case BoundMode::None:
      break;
  }
  throw std::out_of_range("temperature " + std::to_string(T) +
                          " K is below the index table; choose a bound mode");
}

ThermoOpticShift thermo_optic_shift(double T, double T_0, const ThermoOpticModel& model,
                                    const RefractiveIndexTable& table, BoundMode mode) {
  model.validate();
  const double n0 = index_with_bound(T_0, table, mode);
  const double dn = index_with_bound(T, table, mode) - n0;
  const double w0 = kTwoPi * PhysicalConstants::c / model.lambda_ref;
  const double frac = -n0 * model.overlap * dn;

  ThermoOpticShift s;
  s.domega = frac * w0;
  s.dlambda = model.lambda_ref / (1.0 + frac) - model.lambda_ref;
  return s;
}

double bound_temperature_rise(double dlambda, const ThermoOpticModel& model,
                              const RefractiveIndexTable& table, BoundMode mode) {
  detail::nonnegative(dlambda, "wavelength shift");
  if (dlambda == 0.0) return 0.0;
  const double top = table.valid_max() - model.T_ref;
  const auto residual = [&](double dT) {
    return thermo_optic_shift(model.T_ref + dT, model.T_ref, model, table, mode).dlambda - dlambda;
  };
  if (residual(top) < 0.0)
    throw std::out_of_range("wavelength shift exceeds the range covered by the index table");
  return bisect(residual, 0.0, top);
}

double PowerLaw::operator()(double x) const { return A * std::pow(x, B); }

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "power-law samples differ in length");
  require(x.size() >= 3, "power-law fit needs at least 3 samples");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd ly(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0))
      throw std::invalid_argument("power-law samples must be strictly positive");
    X(k, 0) = 1.0;
    X(k, 1) = std::log(x[k]);
    ly(k) = std::log(y[k]);
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(ly);
  const Eigen::VectorXd res = ly - X * beta;
  const double s2 = res.squaredNorm() / static_cast<double>(n - 2);
  const Eigen::Matrix2d cov = s2 * (X.transpose() * X).inverse();

  PowerLawFit f;
  f.law = {std::exp(beta(0)), beta(1)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) f.covariance[i][j] = cov(i, j);
  f.residual_rms = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  return f;
}

double ThermalDampingPolynomial::operator()(double T) const {
  if (T < T_ref - 1e-9 || T > T_max)
    throw std::out_of_range("temperature " + std::to_string(T) + " K outside the thermal damping model");
  const double dT = std::max(T - T_ref, 0.0);
  double v = 0.0, p = dT;
  for (double c : coefficients) {
    v += c * p;
    p *= dT;
  }
  return v;
}

ThermalDampingPolynomial fit_thermal_damping(std::span<const double> T, std::span<const double> Q_m,
                                             double omega_m, double gamma_i0, double T_ref,
                                             int degree) {
  require(T.size() == Q_m.size(), "damping samples differ in length");
  require(degree >= 1, "polynomial degree must be >= 1");
  require(T.size() >= static_cast<std::size_t>(degree), "too few samples for the polynomial degree");
  positive(omega_m, "omega_m");
  positive(gamma_i0, "gamma_i0");

  const Eigen::Index n = static_cast<Eigen::Index>(T.size());
  Eigen::MatrixXd X(n, degree);
  Eigen::VectorXd y(n);
  double T_max = T_ref;
  for (Eigen::Index k = 0; k < n; ++k) {
    positive(Q_m[k], "Q_m");
    const double dT = T[k] - T_ref;
    double p = dT;
    for (int j = 0; j < degree; ++j, p *= dT) X(k, j) = p;
    y(k) = omega_m / Q_m[k] - gamma_i0;
    T_max = std::max(T_max, T[k]);
  }
  const Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);

  ThermalDampingPolynomial poly;
  poly.T_ref = T_ref;
  poly.T_max = T_max;
  poly.coefficients.assign(c.data(), c.data() + c.size());
  return poly;
}

std::function<double(double)> linear_heating(double T_ref, double rise_at_ref, double n_ref) {
  positive(n_ref, "reference photon number");
  return [=](double n_c) { return T_ref + rise_at_ref * n_c / n_ref; };
}

DampingDecomposition DampingDecomposition::synthetic_default(double gamma_i0, double T_ref) {
  DampingDecomposition d;
  d.gamma_i0 = gamma_i0;
  d.thermal.T_ref = T_ref;
  d.thermal.coefficients = {kTwoPi * 500.0, kTwoPi * 23.3};
  d.thermal.T_max = 320.0;
  d.free_carrier.B = 1.2;
  d.free_carrier.A = kTwoPi * 20e3 / std::pow(2000.0, 1.2);
  d.temperature = linear_heating(T_ref, 13.2, 2000.0);
  d.free_carrier_shift = {0.0, 1.0};
  return d;
}

DampingBreakdown total_intrinsic_damping(double n_c, double T, const DampingDecomposition& d) {
  detail::nonnegative(n_c, "n_c");
  DampingBreakdown b;
  b.T = T;
  b.gamma_i0 = d.gamma_i0;
  b.gamma_T = d.thermal.coefficients.empty() ? 0.0 : d.thermal(T);
  b.gamma_FC = n_c > 0.0 ? d.free_carrier(n_c) : 0.0;
  require(b.gamma_T >= 0.0 && b.gamma_FC >= 0.0, "damping channel evaluated negative");
  b.total = b.gamma_i0 + b.gamma_T + b.gamma_FC;
  return b;
}

DampingBreakdown total_intrinsic_damping(double n_c, const DampingDecomposition& d) {
  require(static_cast<bool>(d.temperature), "decomposition has no heating map");
  return total_intrinsic_damping(n_c, d.temperature(n_c), d);
}

double backaction_rate_detuned(double g, double n_c, double kappa, double omega_m, double detuning) {
  const double h = 0.5 * kappa;
  const double a = detuning - omega_m, b = detuning + omega_m;
  return g * g * n_c * kappa * (1.0 / (a * a + h * h) - 1.0 / (b * b + h * h));
}

double backaction_rate_far(double g, double n_c, double kappa, double omega_m, double detuning) {
  positive(kappa, "kappa");
  require(detuning != 0.0, "far-detuned model needs a non-zero detuning");
  const double r = omega_m / detuning;
  return 4.0 * g * g * n_c / kappa * r * r;
}

std::vector<double> excess_loss_far_detuned(std::span<const FarDetunedSample> samples, double g,
                                            double kappa, double omega_m, double gamma_i0) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples)
    out.push_back(s.gamma_cooled - gamma_i0 - backaction_rate_far(g, s.n_c, kappa, omega_m, s.detuning));
  return out;
}

}  // namespace omcool

#include <benchmark/benchmark.h>

#include <cmath>

#include "omcool/constants.hpp"
#include "omcool/lorentz_fit.hpp"
#include "omcool/measurement_chain.hpp"
#include "omcool/quantum_spectra.hpp"
#include "omcool/sideband_solver.hpp"

using namespace omcool;

namespace {

const double kKappa = hz_to_rad(500e6);
const double kOmegaM = hz_to_rad(3.68e9);
const double kGammaI = hz_to_rad(35e3);
const double kG = hz_to_rad(910e3);
const CavityParams kCav(kTwoPi * 195e12, kKappa, kappa_e_from_contrast(0.25, kKappa));

SidebandProblem problem(int order) {
  const DriveState drive = intracavity_state(1e-4, kOmegaM, kCav);
  return SidebandProblem{kCav, drive, kG, cdouble(1e-5 * kOmegaM / kG, 0.0), kOmegaM, order};
}

PhotocurrentPSD line(std::size_t points, double n_c) {
  const double G = kG * std::sqrt(n_c);
  const double gamma = kGammaI + 4.0 * G * G / kKappa;
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 10.0 * gamma, points);
  return photocurrent_psd(scattering_elements(kCav, kOmegaM, kGammaI, G, grid), 100.0);
}

}  // namespace

static void BM_SidebandSolve(benchmark::State& state) {
  const SidebandProblem p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_sidebands(p));
}
BENCHMARK(BM_SidebandSolve)->Arg(1)->Arg(4)->Arg(16)->Arg(40);

static void BM_SidebandClosedForm(benchmark::State& state) {
  const SidebandProblem p = problem(1);
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_sidebands(p));
}
BENCHMARK(BM_SidebandClosedForm);

static void BM_PhotocurrentPSD(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(line(n, 500.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PhotocurrentPSD)->Arg(2001)->Arg(20001);

static void BM_LorentzFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DetectorParams det;
  det.electronic_gain = 2000.0;
  det.edfa_gain = 30.0;
  NoiseBudget noise;
  noise.background_rsa = 1e-14;
  const SyntheticSpectrum s =
      synthesize_rsa_spectrum(line(n, 500.0), det, noise, sideband_signal_scale(1e-4, kCav.omega_o()), 7, 1000);
  Spectrum signal = s.spectrum;
  for (double& v : signal.values) v -= noise.background_rsa;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lorentzian(signal));
}
BENCHMARK(BM_LorentzFit)->Arg(801)->Arg(2001)->Arg(8001);

static void BM_SynthesizeSpectrum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PhotocurrentPSD psd = line(n, 500.0);
  DetectorParams det;
  NoiseBudget noise;
  noise.background_rsa = 1e-14;
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(synthesize_rsa_spectrum(psd, det, noise, 1e-20, ++seed, 1000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthesizeSpectrum)->Arg(2001)->Arg(20001);

static void BM_EitReflection(benchmark::State& state) {
  const double G = kG * std::sqrt(100.0);
  const double gamma = kGammaI + 4.0 * G * G / kKappa;
  const FrequencyGrid grid = FrequencyGrid::centered(kOmegaM, 3.0 * gamma, 2001);
  for (auto _ : state) benchmark::DoNotOptimize(eit_reflection(kCav, kOmegaM, kGammaI, G, kOmegaM, grid));
}
BENCHMARK(BM_EitReflection);

BENCHMARK_MAIN();

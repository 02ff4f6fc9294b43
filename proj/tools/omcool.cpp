// omcool: config-driven sideband-cooling simulation and thermometry.
//
//   omcool simulate        --config run.cfg [--output DIR]
//   omcool analyze         --spectra DIR --calibration FILE [--output DIR]
//   omcool eit             --config run.cfg [--output DIR]
//   omcool budget          --config run.cfg [--output DIR]
//   omcool cool-curve      --config run.cfg [--output DIR]
//   omcool validate-config --config run.cfg

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "omcool/experiment.hpp"
#include "omcool/spectrum_io.hpp"

namespace {

int report(const omcool::RunReport& r) {
  std::cout << "output: " << r.output_dir << "\n"
            << "manifest: " << r.manifest << "\n"
            << "files written: " << r.outputs.size() << "\n";
  for (const auto& e : r.errors) std::cerr << "error: " << e << "\n";
  return r.exit_code;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const omcool::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return omcool::kExitConfig;
  } catch (const omcool::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return omcool::kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return omcool::kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resolved-sideband cooling simulator and mode thermometry"};
  app.set_version_flag("--version", std::string("omcool ") + omcool::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  const auto with_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "experiment config file")->required();
    sub->add_option("-o,--output", output, "output directory");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "synthesize analyzer spectra for each sweep point");
  with_config(simulate);
  CLI::App* eit = app.add_subcommand("eit", "transparency spectra and window widths");
  with_config(eit);
  CLI::App* budget = app.add_subcommand("budget", "detection noise budget in phonon units");
  with_config(budget);
  CLI::App* cool = app.add_subcommand("cool-curve", "simulate then analyze; cooling curve table");
  with_config(cool);
  CLI::App* validate = app.add_subcommand("validate-config", "check a config file and summarize it");
  validate->add_option("-c,--config", config_path, "experiment config file")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "fit spectra and infer phonon occupancy");
  std::string spectra_dir, calibration;
  std::string errors = "quoted";
  omcool::AnalyzeOptions aopts;
  analyze->add_option("-s,--spectra", spectra_dir, "directory holding the spectrum files")->required();
  analyze->add_option("-l,--calibration", calibration, "calibration ledger")->required();
  analyze->add_option("-o,--output", output, "output directory");
  analyze->add_option("--errors", errors, "input uncertainties: quoted or fit")
      ->check(CLI::IsMember({"quoted", "fit"}));
  analyze->add_option("--mc-draws", aopts.monte_carlo_draws, "Monte-Carlo draws per spectrum (0: off)");
  analyze->add_option("-j,--parallelism", aopts.parallelism, "worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : omcool::kExitConfig;
  }

  const std::optional<std::string> explicit_out =
      output.empty() ? std::nullopt : std::optional<std::string>(output);

  if (*analyze) {
    return guarded([&] {
      aopts.quoted_errors = errors == "quoted";
      return report(omcool::cmd_analyze(spectra_dir, calibration,
                                        explicit_out.value_or(omcool::default_output_dir()), aopts));
    });
  }

  return guarded([&] {
    const omcool::ExperimentConfig cfg = omcool::load_experiment_config(config_path);
    if (*validate) {
      std::cout << omcool::describe_config(cfg);
      return static_cast<int>(omcool::kExitOk);
    }
    const std::string dir = omcool::resolve_output_dir(explicit_out, cfg);
    if (*simulate) return report(omcool::cmd_simulate(cfg, dir));
    if (*eit) return report(omcool::cmd_eit(cfg, dir));
    if (*budget) return report(omcool::cmd_budget(cfg, dir));
    return report(omcool::cmd_cool_curve(cfg, dir));
  });
}

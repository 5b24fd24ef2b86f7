// Command-line front end for the experiment harness.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "preq/harness.hpp"

namespace {

int run_experiment(const std::string& name, const std::string& config, const std::string& out, bool serial) {
  using namespace preq;
  auto cfg = harness::ExperimentConfig::load(config);
  if (cfg.experiment.empty()) cfg.experiment = name;
  if (cfg.experiment != name)
    throw ConfigError("config is for '" + cfg.experiment + "', not '" + name + "'");
  if (!out.empty()) cfg.output = out;

  const auto report = harness::run(cfg, serial ? Exec::Serial : Exec::Parallel);
  harness::write_report(report, cfg.output);

  for (const auto& row : report.rows)
    std::printf("k=%-4d measured=% .12e predicted=% .12e residual=% .3e\n", row.k, row.measured,
                row.predicted, row.residual);
  std::cout << "summary: " << report.summary.dump() << '\n';
  for (const auto& f : report.failures) std::cout << "FAILED: " << f << '\n';
  std::cout << (report.passed() ? "all checks passed" : "some checks failed") << " -> " << cfg.output << '\n';
  return report.passed() ? 0 : 1;
}

void list_presets() {
  for (const auto& p : preq::preset_catalog())
    std::printf("%-18s %-28s %-14s %s\n", p.name.c_str(), p.formula.c_str(), p.params.c_str(),
                p.rotation ? "rotation" : "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantization and quasimorphism experiments on the round sphere"};
  app.set_version_flag("--version", PREQ_VERSION);
  bool list = false;
  bool serial = false;
  app.add_flag("--list-presets", list, "Print the Hamiltonian catalog and exit");
  app.add_flag("--serial", serial, "Use the serial reference kernels");

  std::string config, out;
  const char* names[] = {"theorem1", "prop53", "defect", "distance", "toeplitz-dump"};
  const char* help[] = {
      "Determinant phase of the push-forward unitary against the Calabi and Shelukhin prediction",
      "Determinant phase of xi_1 against the Calabi and curvature prediction",
      "Homomorphism defect of the lifted Toeplitz propagators",
      "Random-instance checks of the unitary distances",
      "Write Toeplitz and Kostant-Souriau matrices as CSV",
  };
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (overrides the config)");
  }

  CLI11_PARSE(app, argc, argv);

  if (list) {
    list_presets();
    if (app.get_subcommands().empty()) return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  try {
    return run_experiment(app.get_subcommands().front()->get_name(), config, out, serial);
  } catch (const preq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

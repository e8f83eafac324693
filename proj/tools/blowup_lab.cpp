#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blowup/error.hpp"
#include "lab/config.hpp"
#include "lab/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Boundary blow-up lab: radial profiles, disk solves, symmetry and maximum-principle diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  bool print_config = false;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"hypotheses", "check the growth hypotheses and tabulate psi, phi"},
      {"radial", "unit-ball radial solution and its boundary laws"},
      {"pde", "Newton solves on the disk for the truncation levels"},
      {"symmetry", "symmetry diagnostics of the disk solutions"},
      {"maxprinciple", "barrier verdict on the lens and the Euler counterexample"},
      {"all", "every stage above"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "configuration file");
    sub->add_option("--out", out_dir, "output directory (default: [output] dir)");
    sub->add_option("--override", overrides, "section.key=value, applied after the file")->take_all();
    sub->add_flag("--print-config", print_config, "print the effective configuration and exit");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  lab::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = lab::load_config(config_path);
    for (const auto& o : overrides) lab::apply_override(cfg, o);
  } catch (const blowup::ConfigError& e) {
    std::cerr << "config error: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << "\n";
    return lab::kConfigError;
  }
  if (print_config) {
    std::cout << lab::serialize_config(cfg);
    return lab::kSuccess;
  }
  return lab::run(command, cfg, out_dir.empty() ? cfg.dir : out_dir, std::cerr);
}

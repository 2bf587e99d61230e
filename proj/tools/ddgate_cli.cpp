#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ddgate/config.hpp"
#include "ddgate/errors.hpp"
#include "ddgate/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Source {
  std::string config_path;
  std::string preset;
  std::optional<double> dt;

  ddgate::ExperimentConfig load() const {
    if (config_path.empty() == preset.empty())
      throw ddgate::ConfigError("give exactly one of --config and --preset");
    ddgate::ExperimentConfig cfg = config_path.empty()
                                       ? ddgate::parse_config(ddgate::find_preset(preset).json)
                                       : ddgate::load_config(config_path);
    if (dt) {
      if (!(*dt > 0)) throw ddgate::ConfigError("--dt must be > 0");
      cfg.sim.dt = *dt;
    }
    return cfg;
  }
};

void add_source(CLI::App* cmd, Source& src, bool with_dt = true) {
  cmd->add_option("--config", src.config_path, "Experiment config (JSON)");
  cmd->add_option("--preset", src.preset, "Built-in preset name");
  if (with_dt) cmd->add_option("--dt", src.dt, "Override the Trotter step");
}

void print_summary(const ddgate::RunManifest& m) {
  std::cout << "config " << m.config_hash << "\n";
  for (const auto& f : m.outputs) std::cout << "wrote " << f.path << "\n";
  std::cout << m.metrics.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DD-gate simulator: CPMG/XYN sequences on coupled spin registers"};
  app.require_subcommand(1);

  Source src;
  ddgate::RunOptions opts;
  std::string show_name;

  auto* run = app.add_subcommand("run", "Run every sweep and analysis block of a config");
  auto* errmap = app.add_subcommand("errmap", "Compute the pulse-error pseudo-fidelity map");
  auto* list = app.add_subcommand("list-presets", "List built-in presets");
  auto* validate = app.add_subcommand("validate", "Check a config against the schema");
  auto* show = app.add_subcommand("show-preset", "Print a preset's config");
  show->add_option("name", show_name, "Preset name")->required();
  for (auto* cmd : {run, errmap}) {
    add_source(cmd, src);
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--threads", opts.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  }
  add_source(validate, src, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (list->parsed()) {
      for (const auto& p : ddgate::presets()) std::printf("%-20s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }
    if (show->parsed()) {
      std::cout << ddgate::serialize_config(ddgate::parse_config(ddgate::find_preset(show_name).json));
      return 0;
    }
    const ddgate::ExperimentConfig cfg = src.load();
    if (validate->parsed()) {
      std::cout << "ok " << (cfg.name.empty() ? "<unnamed>" : cfg.name) << " " << ddgate::config_hash(cfg) << "\n";
      return 0;
    }
    print_summary(run->parsed() ? ddgate::run_experiment(cfg, opts) : ddgate::run_errmap(cfg, opts));
    return 0;
  } catch (const ddgate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ddgate::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

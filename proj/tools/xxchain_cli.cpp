// xxchain_cli.cpp: command-line front end; writes one CSV table per run.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "xxchain/scenario.hpp"

namespace {

using namespace xxchain;

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitVerification = 4;

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string out;
  std::string save_config;
  bool oracle = false;
  std::optional<std::string> verify;
  std::optional<int> jobs;
  // key in the config file format -> raw value
  std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "Read a run configuration file");
  cmd->add_option("--preset", opt.preset_name, "Start from a named preset")
      ->check(CLI::IsMember(preset_names()));
  cmd->add_option("--out", opt.out, "Write the CSV here instead of stdout");
  cmd->add_option("--save-config", opt.save_config, "Write the effective configuration to this file");
  cmd->add_flag("--oracle", opt.oracle, "Add Liouvillian oracle columns");
  cmd->add_option("--verify", opt.verify, "Fail if the oracle deviation exceeds TOL");
  cmd->add_option("--jobs", opt.jobs, "Worker threads for sweeps");

  const std::pair<const char*, const char*> keys[] = {
      {"--spins", "chain.spins"},          {"--epsilon", "chain.epsilon"},
      {"--kappa", "chain.kappa"},          {"--gamma-first", "baths.gamma_first"},
      {"--gamma-last", "baths.gamma_last"}, {"--T-first", "baths.T_first"},
      {"--T-last", "baths.T_last"},        {"--initial", "run.initial"},
      {"--amplitudes", "run.amplitudes"},  {"--kt", "grid.kt"},
      {"--epsilon-grid", "grid.epsilon"},  {"--T-grid", "grid.T"},
      {"--T-first-grid", "grid.T_first"},  {"--T-last-grid", "grid.T_last"},
  };
  for (const auto& [flag, key] : keys) {
    cmd->add_option_function<std::string>(
        flag, [&opt, key = std::string(key)](const std::string& v) { opt.overrides[key] = v; },
        "Override " + std::string(key));
  }
}

RunConfig resolve(Mode mode, const Options& opt) {
  RunConfig cfg = opt.preset_name.empty() ? RunConfig{} : preset(opt.preset_name);
  if (!opt.config_path.empty()) cfg = load_config(opt.config_path, cfg);
  std::string text;
  for (const auto& [key, value] : opt.overrides) {
    const auto dot = key.find('.');
    text += "[" + key.substr(0, dot) + "]\n" + key.substr(dot + 1) + " = " + value + "\n";
  }
  cfg = parse_config(text, cfg);
  cfg.mode = mode;
  if (opt.oracle) cfg.oracle = true;
  if (opt.verify) cfg.verify_tolerance = parse_number(*opt.verify);
  if (opt.jobs) cfg.jobs = *opt.jobs;
  if (!opt.out.empty()) cfg.output = opt.out;
  return cfg;
}

int execute(Mode mode, const Options& opt) {
  const RunConfig cfg = resolve(mode, opt);
  if (!opt.save_config.empty()) {
    std::ofstream out(opt.save_config);
    if (!out) throw ConfigError("cannot write '" + opt.save_config + "'");
    out << write_config(cfg);
  }
  const ResultTable table = run(cfg);
  if (cfg.output.empty()) {
    table.write_csv(std::cout);
  } else {
    std::ofstream out(cfg.output);
    if (!out) throw ConfigError("cannot write '" + cfg.output + "'");
    table.write_csv(out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-spin XX chain between two heat baths: dynamics, steady states, concurrence"};
  app.require_subcommand(1);
  Options opt;
  const std::pair<const char*, Mode> modes[] = {
      {"evolve", Mode::Evolve},
      {"steady", Mode::Steady},
      {"sweep-eq", Mode::SweepEquilibrium},
      {"sweep-noneq", Mode::SweepNonequilibrium},
      {"compare23", Mode::Compare23},
  };
  std::map<CLI::App*, Mode> commands;
  for (const auto& [name, mode] : modes) {
    CLI::App* cmd = app.add_subcommand(name, std::string(mode_name(mode)) + " run");
    add_common(cmd, opt);
    commands[cmd] = mode;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (const auto& [cmd, mode] : commands) {
      if (cmd->parsed()) return execute(mode, opt);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}

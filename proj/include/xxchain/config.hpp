// config.hpp: run configuration, its `key = value` file format and the named presets.
//
// File layout (sections optional, `#` starts a comment):
//
//   [run]      mode, initial, amplitudes, oracle, verify, jobs
//   [chain]    spins, epsilon, kappa
//   [baths]    gamma_first, gamma_last, T_first, T_last
//   [grid]     kt, epsilon, T, T_first, T_last
//   [output]   path
//
// Numbers accept fractions ("1/50"). Grids are either comma-separated lists or
// `start:stop:count` (inclusive, evenly spaced). Temperatures are given as T and
// converted to beta = 1/T.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xxchain/model.hpp"

namespace xxchain {

enum class Mode { Evolve, Steady, SweepEquilibrium, SweepNonequilibrium, Compare23 };

enum class InitialKind { W3, AllUp, Ground, Custom };

struct InitialState {
  InitialKind kind = InitialKind::W3;
  std::vector<Complex> amplitudes;  // Custom only, computational basis

  bool operator==(const InitialState&) const = default;
};

struct RunConfig {
  Mode mode = Mode::Evolve;
  ChainSpec chain;
  double gamma_first = 0.02;
  double gamma_last = 0.02;
  double temperature_first = 0.1;
  double temperature_last = 0.1;
  InitialState initial;

  std::vector<double> kt_grid;           // evolve
  std::vector<double> epsilon_grid;      // sweep-eq, compare23
  std::vector<double> temperature_grid;  // sweep-eq (both baths)
  std::vector<double> t_first_grid;      // sweep-noneq, compare23
  std::vector<double> t_last_grid;       // sweep-noneq, compare23

  bool oracle = false;
  std::optional<double> verify_tolerance;
  int jobs = 1;
  std::string output;

  BathSpec baths() const;
  bool operator==(const RunConfig&) const = default;
};

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);
std::string_view initial_name(InitialKind kind);
InitialKind parse_initial(std::string_view name);

double parse_number(std::string_view text);
std::vector<double> parse_grid(std::string_view text);

// Applies the keys found in `text` on top of `base`. Throws ConfigError.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
std::string write_config(const RunConfig& cfg);

// Throws ConfigError for structural problems (missing or non-increasing grids,
// bad job counts, custom amplitudes of the wrong size) and ParameterError for
// physical ones (chain or bath outside the model's domain).
void validate(const RunConfig& cfg);

// fig1a, fig1b, fig2, fig2-up, fig3, fig4.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace xxchain

#include "xxchain/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace xxchain {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_grid(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ", ";
    out += format_number(grid[i]);
  }
  return out;
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("expected a boolean, got '" + std::string(text) + "'");
}

int parse_int(std::string_view text) {
  const double x = parse_number(text);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("expected an integer, got '" + std::string(text) + "'");
  return static_cast<int>(x);
}

std::vector<Complex> parse_amplitudes(std::string_view text) {
  std::vector<Complex> out;
  for (auto item : split(text, ',')) {
    std::istringstream is{std::string(item)};
    std::string re, im;
    is >> re;
    if (!(is >> im)) im = "0";
    std::string rest;
    if (is >> rest) throw ConfigError("amplitude '" + std::string(item) + "' must be 're im'");
    out.emplace_back(parse_number(re), parse_number(im));
  }
  return out;
}

std::string format_amplitudes(const std::vector<Complex>& amps) {
  std::string out;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i) out += ", ";
    out += format_number(amps[i].real()) + " " + format_number(amps[i].imag());
  }
  return out;
}

void require_increasing(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw ConfigError(std::string("grid '") + name + "' is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError(std::string("grid '") + name + "' must be strictly increasing");
  }
}

void require_positive(const std::vector<double>& grid, const char* name) {
  for (double x : grid) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError(std::string("grid '") + name + "' must be positive");
  }
}

}  // namespace

BathSpec RunConfig::baths() const {
  return {gamma_first, gamma_last, 1.0 / temperature_first, 1.0 / temperature_last};
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Evolve: return "evolve";
    case Mode::Steady: return "steady";
    case Mode::SweepEquilibrium: return "sweep-eq";
    case Mode::SweepNonequilibrium: return "sweep-noneq";
    case Mode::Compare23: return "compare23";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::Evolve, Mode::Steady, Mode::SweepEquilibrium, Mode::SweepNonequilibrium, Mode::Compare23}) {
    if (mode_name(m) == name) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string_view initial_name(InitialKind kind) {
  switch (kind) {
    case InitialKind::W3: return "w3";
    case InitialKind::AllUp: return "all-up";
    case InitialKind::Ground: return "ground";
    case InitialKind::Custom: return "custom";
  }
  return "?";
}

InitialKind parse_initial(std::string_view name) {
  for (InitialKind k : {InitialKind::W3, InitialKind::AllUp, InitialKind::Ground, InitialKind::Custom}) {
    if (initial_name(k) == name) return k;
  }
  throw ConfigError("unknown initial state '" + std::string(name) + "'");
}

double parse_number(std::string_view text) {
  text = trim(text);
  const std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    const double den = parse_number(text.substr(slash + 1));
    if (den == 0.0) throw ConfigError("division by zero in '" + std::string(text) + "'");
    return parse_number(text.substr(0, slash)) / den;
  }
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ConfigError("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range grid must be start:stop:count");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const int count = parse_int(parts[2]);
    if (count < 1) throw ConfigError("range grid needs a positive count");
    if (count == 1) return {start};
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
    out.back() = stop;
    return out;
  }
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_number(item));
  return out;
}

RunConfig parse_config(std::string_view text, RunConfig cfg) {
  std::string section;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;

    try {
      if (full == "run.mode") cfg.mode = parse_mode(value);
      else if (full == "run.initial") cfg.initial.kind = parse_initial(value);
      else if (full == "run.amplitudes") cfg.initial.amplitudes = parse_amplitudes(value);
      else if (full == "run.oracle") cfg.oracle = parse_bool(value);
      else if (full == "run.verify") cfg.verify_tolerance = value == "none" ? std::nullopt : std::optional(parse_number(value));
      else if (full == "run.jobs") cfg.jobs = parse_int(value);
      else if (full == "chain.spins") cfg.chain.spins = parse_int(value);
      else if (full == "chain.epsilon") cfg.chain.epsilon = parse_number(value);
      else if (full == "chain.kappa") cfg.chain.kappa = parse_number(value);
      else if (full == "baths.gamma_first") cfg.gamma_first = parse_number(value);
      else if (full == "baths.gamma_last") cfg.gamma_last = parse_number(value);
      else if (full == "baths.T_first") cfg.temperature_first = parse_number(value);
      else if (full == "baths.T_last") cfg.temperature_last = parse_number(value);
      else if (full == "grid.kt") cfg.kt_grid = parse_grid(value);
      else if (full == "grid.epsilon") cfg.epsilon_grid = parse_grid(value);
      else if (full == "grid.T") cfg.temperature_grid = parse_grid(value);
      else if (full == "grid.T_first") cfg.t_first_grid = parse_grid(value);
      else if (full == "grid.T_last") cfg.t_last_grid = parse_grid(value);
      else if (full == "output.path") cfg.output = std::string(value);
      else throw ConfigError("unknown key '" + full + "'");
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

std::string write_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[run]\n";
  os << "mode = " << mode_name(cfg.mode) << "\n";
  os << "initial = " << initial_name(cfg.initial.kind) << "\n";
  if (!cfg.initial.amplitudes.empty()) os << "amplitudes = " << format_amplitudes(cfg.initial.amplitudes) << "\n";
  os << "oracle = " << (cfg.oracle ? "true" : "false") << "\n";
  os << "verify = " << (cfg.verify_tolerance ? format_number(*cfg.verify_tolerance) : "none") << "\n";
  os << "jobs = " << cfg.jobs << "\n";
  os << "\n[chain]\n";
  os << "spins = " << cfg.chain.spins << "\n";
  os << "epsilon = " << format_number(cfg.chain.epsilon) << "\n";
  os << "kappa = " << format_number(cfg.chain.kappa) << "\n";
  os << "\n[baths]\n";
  os << "gamma_first = " << format_number(cfg.gamma_first) << "\n";
  os << "gamma_last = " << format_number(cfg.gamma_last) << "\n";
  os << "T_first = " << format_number(cfg.temperature_first) << "\n";
  os << "T_last = " << format_number(cfg.temperature_last) << "\n";
  os << "\n[grid]\n";
  if (!cfg.kt_grid.empty()) os << "kt = " << format_grid(cfg.kt_grid) << "\n";
  if (!cfg.epsilon_grid.empty()) os << "epsilon = " << format_grid(cfg.epsilon_grid) << "\n";
  if (!cfg.temperature_grid.empty()) os << "T = " << format_grid(cfg.temperature_grid) << "\n";
  if (!cfg.t_first_grid.empty()) os << "T_first = " << format_grid(cfg.t_first_grid) << "\n";
  if (!cfg.t_last_grid.empty()) os << "T_last = " << format_grid(cfg.t_last_grid) << "\n";
  if (!cfg.output.empty()) os << "\n[output]\npath = " << cfg.output << "\n";
  return os.str();
}

void validate(const RunConfig& cfg) {
  if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (cfg.verify_tolerance && !(*cfg.verify_tolerance > 0.0)) throw ConfigError("verify tolerance must be positive");
  if (cfg.initial.kind == InitialKind::Custom &&
      cfg.initial.amplitudes.size() != static_cast<std::size_t>(1 << cfg.chain.spins)) {
    throw ConfigError("custom initial state needs 2^n amplitudes");
  }
  if (cfg.chain.spins != 2 && cfg.chain.spins != 3) throw ConfigError("spins must be 2 or 3");

  switch (cfg.mode) {
    case Mode::Evolve:
      require_increasing(cfg.kt_grid, "kt");
      if (cfg.kt_grid.front() < 0.0) throw ConfigError("grid 'kt' must be non-negative");
      [[fallthrough]];
    case Mode::Steady:
      validate(cfg.chain);
      validate(cfg.baths());
      break;
    case Mode::SweepEquilibrium:
      require_increasing(cfg.epsilon_grid, "epsilon");
      require_increasing(cfg.temperature_grid, "T");
      require_positive(cfg.epsilon_grid, "epsilon");
      require_positive(cfg.temperature_grid, "T");
      break;
    case Mode::Compare23:
      require_increasing(cfg.epsilon_grid, "epsilon");
      require_positive(cfg.epsilon_grid, "epsilon");
      [[fallthrough]];
    case Mode::SweepNonequilibrium:
      require_increasing(cfg.t_first_grid, "T_first");
      require_increasing(cfg.t_last_grid, "T_last");
      require_positive(cfg.t_first_grid, "T_first");
      require_positive(cfg.t_last_grid, "T_last");
      break;
  }
  if (cfg.mode != Mode::Evolve && cfg.mode != Mode::Steady) {
    if (!(cfg.chain.kappa > 0.0)) throw ParameterError("kappa must be positive");
    if (!(cfg.gamma_first > 0.0) || !(cfg.gamma_last > 0.0)) throw ParameterError("bath coupling rates must be positive");
  }
}

RunConfig preset(std::string_view name) {
  RunConfig cfg;
  if (name == "fig1a" || name == "fig1b") {
    cfg.mode = Mode::Evolve;
    cfg.chain = {3, 1.5, 1.0};
    cfg.gamma_first = cfg.gamma_last = 1.0 / 50;
    cfg.temperature_first = name == "fig1a" ? 1.0 / 10 : 1.0 / 5;
    cfg.temperature_last = name == "fig1a" ? 1.0 / 10 : 1.0;
    cfg.initial.kind = InitialKind::W3;
    cfg.kt_grid = parse_grid("0:200:2001");
  } else if (name == "fig2" || name == "fig2-up") {
    cfg.mode = Mode::Evolve;
    cfg.chain = {3, 3.0, 2.0};
    cfg.gamma_first = cfg.gamma_last = 1.0 / 20;
    cfg.temperature_first = 1.0 / 10;
    cfg.temperature_last = 1.0 / 15;
    cfg.initial.kind = name == "fig2" ? InitialKind::W3 : InitialKind::AllUp;
    cfg.kt_grid = parse_grid("0:200:2001");
  } else if (name == "fig3") {
    cfg.mode = Mode::SweepEquilibrium;
    cfg.chain = {3, 1.6, 1.0};
    cfg.gamma_first = cfg.gamma_last = 1.0 / 20;
    cfg.epsilon_grid = parse_grid("1.5:3:16");
    cfg.temperature_grid = parse_grid("0.05:0.5:10");
  } else if (name == "fig4") {
    cfg.mode = Mode::SweepNonequilibrium;
    cfg.chain = {3, 1.6, 1.0};
    cfg.gamma_first = cfg.gamma_last = 1.0 / 20;
    cfg.t_first_grid = parse_grid("0.05:0.5:11");
    cfg.t_last_grid = parse_grid("0.05:0.5:11");
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return cfg;
}

std::vector<std::string> preset_names() { return {"fig1a", "fig1b", "fig2", "fig2-up", "fig3", "fig4"}; }

}  // namespace xxchain

#pragma once

// Experiment configuration: a small key = value format with [section] tables,
// full validation (unknown keys are errors naming the offending path) and a
// writer whose output reloads to an identical configuration.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsk1d/integrator.hpp"
#include "nsk1d/params.hpp"

namespace nsk1d {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class IcFamily { equilibrium, single_mode, random_smooth };

inline std::string to_string(IcFamily f) {
  switch (f) {
    case IcFamily::equilibrium: return "equilibrium";
    case IcFamily::single_mode: return "single_mode";
    case IcFamily::random_smooth: return "random_smooth";
  }
  return "?";
}

inline IcFamily ic_family_from_string(const std::string& s) {
  if (s == "equilibrium") return IcFamily::equilibrium;
  if (s == "single_mode") return IcFamily::single_mode;
  if (s == "random_smooth") return IcFamily::random_smooth;
  throw std::invalid_argument("unknown ic family: " + s);
}

enum class DecayLaw { power, exponential };

inline std::string to_string(DecayLaw d) {
  return d == DecayLaw::power ? "power" : "exponential";
}

inline DecayLaw decay_law_from_string(const std::string& s) {
  if (s == "power") return DecayLaw::power;
  if (s == "exponential") return DecayLaw::exponential;
  throw std::invalid_argument("unknown decay law: " + s);
}

struct IcSpec {
  IcFamily family = IcFamily::single_mode;
  double amplitude = 0.2;           // density deviation amplitude
  std::size_t wavenumber = 1;       // single_mode wavenumber
  double velocity_amplitude = 0.1;  // velocity deviation amplitude
  double decay = 4.0;               // random_smooth spectral decay exponent
  DecayLaw decay_law = DecayLaw::power;
  std::uint64_t seed = 1;           // random_smooth coefficient seed

  void validate() const {
    if (!(amplitude >= 0.0 && amplitude < 1.0))
      throw std::invalid_argument("ic: amplitude must lie in [0, 1) to keep rho positive");
    if (family == IcFamily::single_mode && wavenumber < 1)
      throw std::invalid_argument("ic: wavenumber must be >= 1");
    if (family == IcFamily::random_smooth && decay_law == DecayLaw::power && decay < 4.0)
      throw std::invalid_argument("ic: power-law decay must be >= 4");
  }
};

struct ExperimentConfig {
  Params params;
  Schedule schedule;
  IcSpec ic;
  std::size_t n_points = 0;  // 0 = default 4 * galerkin_order
  std::size_t n_paths = 1;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";
  std::vector<int> moments = {1, 2};
  Forcing forcing;

  std::size_t grid_points() const {
    return n_points == 0 ? 4 * params.galerkin_order : n_points;
  }

  void validate() const {
    params.validate();
    schedule.validate();
    ic.validate();
    if (n_paths < 1) throw std::invalid_argument("ensemble: n_paths must be >= 1");
    const std::size_t n = grid_points();
    if (!is_pow2(n)) throw std::invalid_argument("grid: n_points must be a power of two");
    if (n < 2 * params.galerkin_order)
      throw std::invalid_argument("grid: n_points must be >= 2 * galerkin_order");
    for (int p : moments)
      if (p < 1) throw std::invalid_argument("ensemble: moment orders must be >= 1");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct RawConfig {
  // section -> key -> value (string form)
  std::map<std::string, std::map<std::string, std::string>> tables;
  std::map<std::string, std::map<std::string, bool>> consumed;

  static RawConfig parse(std::istream& in) {
    RawConfig raw;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        raw.tables[section];
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
      if (raw.tables[section].count(key))
        throw ConfigError("config: duplicate key '" + section + "." + key + "'");
      raw.tables[section][key] = value;
      raw.consumed[section][key] = false;
    }
    return raw;
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) {
    auto t = tables.find(section);
    if (t == tables.end()) return std::nullopt;
    auto v = t->second.find(key);
    if (v == t->second.end()) return std::nullopt;
    consumed[section][key] = true;
    return v->second;
  }

  void check_all_consumed() const {
    for (const auto& [section, keys] : consumed)
      for (const auto& [key, used] : keys)
        if (!used)
          throw ConfigError("config: unknown key '" +
                            (section.empty() ? key : section + "." + key) + "'");
  }
};

inline double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + path + "' expects a number, got '" + s + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + path + "' expects a nonnegative integer, got '" + s + "'");
  }
}

inline std::vector<int> parse_int_list(const std::string& s, const std::string& path) {
  std::string body = trim(s);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw ConfigError("config: '" + path + "' expects a list like [1, 2]");
  body = body.substr(1, body.size() - 2);
  std::vector<int> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<int>(parse_u64(item, path)));
  }
  if (out.empty()) throw ConfigError("config: '" + path + "' must not be empty");
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  auto raw = detail::RawConfig::parse(in);
  ExperimentConfig cfg;

  auto num = [&](const char* sec, const char* key, double& dst) {
    if (auto v = raw.get(sec, key)) dst = detail::parse_double(*v, std::string(sec) + "." + key);
  };
  auto unum = [&](const char* sec, const char* key, auto& dst) {
    if (auto v = raw.get(sec, key))
      dst = static_cast<std::decay_t<decltype(dst)>>(
          detail::parse_u64(*v, std::string(sec) + "." + key));
  };
  auto str = [&](const char* sec, const char* key) { return raw.get(sec, key); };

  num("params", "alpha", cfg.params.alpha);
  num("params", "beta", cfg.params.beta);
  num("params", "gamma", cfg.params.gamma);
  num("params", "trunc_radius", cfg.params.trunc_radius);
  unum("params", "galerkin_order", cfg.params.galerkin_order);
  num("params", "density_floor", cfg.params.density_floor);
  unum("params", "n_points", cfg.n_points);

  unum("noise", "mode_count", cfg.params.noise.mode_count);
  num("noise", "weight_decay", cfg.params.noise.weight_decay);
  if (auto v = str("noise", "family")) {
    try {
      cfg.params.noise.family = noise_family_from_string(*v);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: 'noise.family': ") + e.what());
    }
  }

  num("schedule", "t_end", cfg.schedule.t_end);
  num("schedule", "dt", cfg.schedule.dt);
  unum("schedule", "record_every", cfg.schedule.record_every);
  if (auto v = str("schedule", "method")) {
    try {
      cfg.schedule.method = method_from_string(*v);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: 'schedule.method': ") + e.what());
    }
  }

  if (auto v = str("ic", "family")) {
    try {
      cfg.ic.family = ic_family_from_string(*v);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: 'ic.family': ") + e.what());
    }
  }
  num("ic", "amplitude", cfg.ic.amplitude);
  unum("ic", "wavenumber", cfg.ic.wavenumber);
  num("ic", "velocity_amplitude", cfg.ic.velocity_amplitude);
  num("ic", "decay", cfg.ic.decay);
  unum("ic", "seed", cfg.ic.seed);
  if (auto v = str("ic", "decay_law")) {
    try {
      cfg.ic.decay_law = decay_law_from_string(*v);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: 'ic.decay_law': ") + e.what());
    }
  }

  unum("ensemble", "n_paths", cfg.n_paths);
  unum("ensemble", "master_seed", cfg.master_seed);
  if (auto v = str("ensemble", "moments")) cfg.moments = detail::parse_int_list(*v, "ensemble.moments");

  num("forcing", "amplitude", cfg.forcing.amplitude);
  unum("forcing", "wavenumber", cfg.forcing.wavenumber);

  if (auto v = str("output", "dir")) cfg.output_dir = *v;

  raw.check_all_consumed();
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

inline void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  out.precision(17);
  out << "[params]\n";
  out << "alpha = " << cfg.params.alpha << "\n";
  out << "beta = " << cfg.params.beta << "\n";
  out << "gamma = " << cfg.params.gamma << "\n";
  out << "trunc_radius = " << cfg.params.trunc_radius << "\n";
  out << "galerkin_order = " << cfg.params.galerkin_order << "\n";
  out << "density_floor = " << cfg.params.density_floor << "\n";
  if (cfg.n_points != 0) out << "n_points = " << cfg.n_points << "\n";
  out << "\n[noise]\n";
  out << "mode_count = " << cfg.params.noise.mode_count << "\n";
  out << "weight_decay = " << cfg.params.noise.weight_decay << "\n";
  out << "family = " << to_string(cfg.params.noise.family) << "\n";
  out << "\n[schedule]\n";
  out << "t_end = " << cfg.schedule.t_end << "\n";
  out << "dt = " << cfg.schedule.dt << "\n";
  out << "method = " << to_string(cfg.schedule.method) << "\n";
  out << "record_every = " << cfg.schedule.record_every << "\n";
  out << "\n[ic]\n";
  out << "family = " << to_string(cfg.ic.family) << "\n";
  out << "amplitude = " << cfg.ic.amplitude << "\n";
  out << "wavenumber = " << cfg.ic.wavenumber << "\n";
  out << "velocity_amplitude = " << cfg.ic.velocity_amplitude << "\n";
  out << "decay = " << cfg.ic.decay << "\n";
  out << "decay_law = " << to_string(cfg.ic.decay_law) << "\n";
  out << "seed = " << cfg.ic.seed << "\n";
  out << "\n[ensemble]\n";
  out << "n_paths = " << cfg.n_paths << "\n";
  out << "master_seed = " << cfg.master_seed << "\n";
  out << "moments = [";
  for (std::size_t i = 0; i < cfg.moments.size(); ++i)
    out << (i ? ", " : "") << cfg.moments[i];
  out << "]\n";
  out << "\n[forcing]\n";
  out << "amplitude = " << cfg.forcing.amplitude << "\n";
  out << "wavenumber = " << cfg.forcing.wavenumber << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.output_dir << "\n";
}

inline std::string config_to_string(const ExperimentConfig& cfg) {
  std::ostringstream ss;
  write_config(ss, cfg);
  return ss.str();
}

}  // namespace nsk1d

#include "specsing/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace specsing::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(std::string(key) + ": expected a finite number, got '" + t + "'");
  return v;
}

long parse_long(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + t + "'");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + t + "'");
}

// Accepted spellings of each unit; the first is canonical.
const std::vector<std::string>& unit_aliases(std::string_view unit) {
  static const std::vector<std::string> nm{"nm"};
  static const std::vector<std::string> um{"um", "µm", "micron", "microns"};
  static const std::vector<std::string> per_cm{"per_cm", "cm^-1", "1/cm", "/cm", "cm-1"};
  if (unit == "nm") return nm;
  if (unit == "um") return um;
  return per_cm;
}

// Number with an optional trailing unit ("300 um" or "300um"), which must
// match `unit`.
double parse_quantity(std::string_view key, std::string_view text, std::string_view unit) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr == t.data() + t.size()) return parse_double(key, t);
  const std::string given = trim(std::string_view(res.ptr, t.data() + t.size() - res.ptr));
  const auto& ok = unit_aliases(unit);
  if (std::find(ok.begin(), ok.end(), given) == ok.end())
    throw ConfigError(std::string(key) + ": unit '" + given + "' does not match; expected " +
                      ok.front());
  return parse_double(key, std::string_view(t.data(), res.ptr - t.data()));
}

ModeRange parse_range(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  auto sep = t.find("..");
  std::size_t width = 2;
  if (sep == std::string::npos) {
    sep = t.find(':');
    width = 1;
  }
  if (sep == std::string::npos) {
    const long m = parse_long(key, t);
    return {m, m};
  }
  return {parse_long(key, t.substr(0, sep)), parse_long(key, t.substr(sep + width))};
}

std::vector<double> parse_grid(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    // lo:hi:count, evenly spaced and inclusive
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3)
      throw ConfigError(std::string(key) + ": expected lo:hi:count, got '" + t + "'");
    const double lo = parse_double(key, parts[0]);
    const double hi = parse_double(key, parts[1]);
    const long n = parse_long(key, parts[2]);
    if (n < 1) throw ConfigError(std::string(key) + ": count must be at least 1");
    if (n == 1) return {lo};
    for (long i = 0; i < n; ++i)
      out.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    return out;
  }
  std::stringstream ss(t);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_double(key, p));
  if (out.empty()) throw ConfigError(std::string(key) + ": empty grid");
  return out;
}

std::string grid_text(const std::vector<double>& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) out += (i ? "," : "") + shortest(g[i]);
  return out;
}

struct KeySpec {
  std::string name;
  std::string unit;  // empty when dimensionless
  std::function<void(RunConfig&, std::string_view, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Field>
KeySpec number_key(std::string name, std::string unit, Field field) {
  const std::string u = unit;
  return {std::move(name), std::move(unit),
          [field, u](RunConfig& c, std::string_view k, std::string_view v) {
            c.*field = u.empty() ? parse_double(k, v) : parse_quantity(k, v, u);
          },
          [field](const RunConfig& c) { return shortest(c.*field); }};
}

template <typename Field>
KeySpec medium_key(std::string name, std::string unit, Field field) {
  const std::string u = unit;
  return {std::move(name), std::move(unit),
          [field, u](RunConfig& c, std::string_view k, std::string_view v) {
            c.medium.*field = u.empty() ? parse_double(k, v) : parse_quantity(k, v, u);
          },
          [field](const RunConfig& c) { return shortest(c.medium.*field); }};
}

template <typename Field>
KeySpec solver_key(std::string name, Field field) {
  return {std::move(name), "",
          [field](RunConfig& c, std::string_view k, std::string_view v) {
            c.solver.*field = parse_double(k, v);
          },
          [field](const RunConfig& c) { return shortest(c.solver.*field); }};
}

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> k;
    k.push_back(medium_key("medium.n0", "", &GainMedium::n0));
    k.push_back(medium_key("medium.lambda0_nm", "nm", &GainMedium::lambda0_nm));
    k.push_back(medium_key("medium.gamma_hat", "", &GainMedium::gamma_hat));
    k.push_back(medium_key("medium.alpha0_per_cm", "per_cm", &GainMedium::alpha0_per_cm));
    k.push_back(medium_key("medium.thickness_um", "um", &GainMedium::thickness_um));
    k.push_back(medium_key("medium.nu", "", &GainMedium::nu));
    k.push_back(medium_key("medium.g_star_per_cm", "per_cm", &GainMedium::g_star_per_cm));
    k.push_back({"medium.pump", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   try {
                     c.medium.pump = parse_pump(trim(v));
                   } catch (const InvalidInput&) {
                     throw ConfigError(std::string(key) +
                                       ": expected uniform, single or double, got '" + trim(v) +
                                       "'");
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.medium.pump)); }});
    k.push_back(solver_key("solver.newton_tol", &SolveConfig::newton_tol));
    k.push_back({"solver.max_iter", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   c.solver.max_iter = static_cast<int>(parse_long(key, v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.solver.max_iter); }});
    k.push_back(solver_key("solver.fd_step", &SolveConfig::fd_step));
    k.push_back(solver_key("solver.bisect_tol", &SolveConfig::bisect_tol));
    k.push_back({"run.command", "",
                 [](RunConfig& c, std::string_view, std::string_view v) {
                   c.command = parse_command(trim(v));
                 },
                 [](const RunConfig& c) {
                   return c.command ? std::string(to_string(*c.command)) : std::string();
                 }});
    k.push_back({"run.m", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   c.m = parse_long(key, v);
                 },
                 [](const RunConfig& c) { return c.m ? std::to_string(*c.m) : std::string(); }});
    k.push_back({"run.m_range", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   c.m_range = parse_range(key, v);
                 },
                 [](const RunConfig& c) {
                   return std::to_string(c.m_range.lo) + ".." + std::to_string(c.m_range.hi);
                 }});
    k.push_back({"run.nu_grid", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   c.nu_grid = parse_grid(key, v);
                 },
                 [](const RunConfig& c) { return grid_text(c.nu_grid); }});
    k.push_back({"run.format", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   const auto t = lower(trim(v));
                   if (t == "csv")
                     c.format = Format::Csv;
                   else if (t == "json")
                     c.format = Format::Json;
                   else
                     throw ConfigError(std::string(key) + ": expected csv or json, got '" + t +
                                       "'");
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.format)); }});
    k.push_back({"run.out", "",
                 [](RunConfig& c, std::string_view, std::string_view v) { c.out = trim(v); },
                 [](const RunConfig& c) { return c.out; }});
    k.push_back({"run.threads", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   const long n = parse_long(key, v);
                   if (n < 0) throw ConfigError(std::string(key) + ": must be >= 0");
                   c.threads = static_cast<unsigned>(n);
                 },
                 [](const RunConfig& c) { return std::to_string(c.threads); }});
    k.push_back({"run.timing", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   c.timing = parse_bool(key, v);
                 },
                 [](const RunConfig& c) { return std::string(c.timing ? "true" : "false"); }});
    k.push_back({"run.ode_check", "",
                 [](RunConfig& c, std::string_view key, std::string_view v) {
                   c.ode_check = parse_bool(key, v);
                 },
                 [](const RunConfig& c) { return std::string(c.ode_check ? "true" : "false"); }});
    k.push_back(number_key("run.validity_warn", "", &RunConfig::validity_warn));
    return k;
  }();
  return keys;
}

// Keys whose name carries a unit suffix, by stem.
std::optional<std::pair<std::string, std::string>> unit_stem(std::string_view key) {
  for (const auto& spec : registry()) {
    if (spec.unit.empty()) continue;
    const std::string suffix = "_" + spec.unit;
    const std::string stem = spec.name.substr(0, spec.name.size() - suffix.size());
    if (key == stem || (key.size() > stem.size() && key.substr(0, stem.size() + 1) == stem + "_"))
      return std::make_pair(spec.name, spec.unit);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Enumerate: return "enumerate";
    case Command::ScanNu: return "scan-nu";
    case Command::CriticalNu: return "critical-nu";
    case Command::Bounds: return "bounds";
    case Command::Table1: return "table1";
    case Command::Fig2Data: return "fig2-data";
    case Command::Fig3Data: return "fig3-data";
    case Command::Validate: return "validate";
  }
  return "?";
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> all{Command::Solve,    Command::Enumerate, Command::ScanNu,
                                        Command::CriticalNu, Command::Bounds,  Command::Table1,
                                        Command::Fig2Data, Command::Fig3Data,  Command::Validate};
  return all;
}

Command parse_command(std::string_view text) {
  const std::string t = lower(text);
  for (Command c : all_commands())
    if (t == to_string(c)) return c;
  throw ConfigError("run.command: unknown command '" + std::string(text) + "'");
}

std::string_view to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

ModeRange RunConfig::modes() const {
  if (m) return {*m, *m};
  return m_range;
}

std::vector<double> RunConfig::nus() const {
  if (nu_grid.empty()) return {medium.nu};
  return nu_grid;
}

void apply_setting(RunConfig& cfg, std::string_view key_in, std::string_view value) {
  const std::string key = trim(key_in);
  for (const auto& spec : registry()) {
    if (spec.name == key) {
      spec.set(cfg, key, value);
      cfg.explicit_keys.insert(key);
      return;
    }
  }
  if (const auto stem = unit_stem(key))
    throw ConfigError(key + ": unit mismatch; expected " + stem->second + " (use " +
                      stem->first + ")");
  throw ConfigError("unknown configuration key '" + key + "'");
}

std::pair<std::string, std::string> split_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("expected key = value, got '" + trim(text) + "'");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text,
                                                                   std::string_view origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(ss, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    try {
      out.push_back(split_assignment(line));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin) {
  for (const auto& [k, v] : parse_config_text(text, origin)) {
    try {
      apply_setting(cfg, k, v);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ": " + e.what());
    }
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

void validate(const RunConfig& cfg) {
  if (!cfg.command) throw ConfigError("no command given (set run.command)");
  try {
    cfg.medium.validate();
    cfg.solver.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (cfg.m_range.lo > cfg.m_range.hi)
    throw ConfigError("run.m_range: lower mode exceeds upper mode");
  if (cfg.m && *cfg.m < 1) throw ConfigError("run.m: mode number must be positive");
  if (cfg.m_range.lo < 1) throw ConfigError("run.m_range: mode numbers must be positive");
  for (std::size_t i = 0; i < cfg.nu_grid.size(); ++i) {
    if (cfg.nu_grid[i] < 0.0) throw ConfigError("run.nu_grid: nu must be non-negative");
    if (i > 0 && !(cfg.nu_grid[i] > cfg.nu_grid[i - 1]))
      throw ConfigError("run.nu_grid: grid must be strictly increasing");
  }
  if (!(cfg.validity_warn > 0.0)) throw ConfigError("run.validity_warn: must be positive");
}

std::vector<std::pair<std::string, std::string>> echo(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& spec : registry()) out.emplace_back(spec.name, spec.get(cfg));
  return out;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& spec : registry()) out.push_back(spec.name);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return buf.data();
}

}  // namespace specsing::cli

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specsing/errors.hpp"
#include "specsing/medium.hpp"
#include "specsing/solver.hpp"

namespace specsing::cli {

// Anything wrong with the user's configuration; maps to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Command {
  Solve,
  Enumerate,
  ScanNu,
  CriticalNu,
  Bounds,
  Table1,
  Fig2Data,
  Fig3Data,
  Validate
};
std::string_view to_string(Command c);
Command parse_command(std::string_view text);
const std::vector<Command>& all_commands();

enum class Format { Csv, Json };
std::string_view to_string(Format f);

struct ModeRange {
  long lo = 0;
  long hi = 0;
};

struct RunConfig {
  GainMedium medium = GainMedium::semiconductor_sample();
  SolveConfig solver;
  std::optional<Command> command;
  std::optional<long> m;                 // single mode; default: resonance mode
  ModeRange m_range{1320, 1400};         // enumerate, fig3-data, critical-nu sweeps
  std::vector<double> nu_grid;           // empty: use medium.nu
  std::string out;                       // empty: stdout
  Format format = Format::Csv;
  unsigned threads = 0;                  // 0: hardware concurrency
  bool timing = false;                   // wall time in meta (breaks byte-identity)
  bool ode_check = true;                 // attach ODE Jost residuals to roots
  double validity_warn = 1e-3;

  // Keys assigned from a file or the command line, in canonical form.
  std::set<std::string> explicit_keys;

  // Modes to process for sweeping commands: m if set, else the range.
  ModeRange modes() const;
  // nu values to process: the grid if set, else {medium.nu}.
  std::vector<double> nus() const;
};

// Applies one `key = value` assignment. Throws ConfigError for unknown keys
// (naming the key), unit mismatches (naming the expected unit) or bad values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

// Parses flat `key = value` text with `#` comments. `origin` prefixes error
// messages (e.g. the file name).
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text,
                                                                   std::string_view origin);
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view origin);
void load_config_file(RunConfig& cfg, const std::string& path);

// Splits "key=value"; throws ConfigError without '='.
std::pair<std::string, std::string> split_assignment(std::string_view text);

// Final structural checks (medium invariants, grid ordering, command set).
void validate(const RunConfig& cfg);

// Canonical key/value listing of every setting, in a fixed order.
std::vector<std::pair<std::string, std::string>> echo(const RunConfig& cfg);

// Every recognised key.
std::vector<std::string> known_keys();

// Shared numeric formatting: 12 significant digits.
std::string format_number(double v);

}  // namespace specsing::cli

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace specsing::cli {

using Cell = std::variant<long, double, std::string>;

struct FailureRecord {
  long m = 0;
  double nu = 0.0;
  std::string kind;
  bool numerical = false;
  std::string reason;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<FailureRecord> failures;
  std::vector<std::string> warnings;
  std::optional<double> wall_time_s;

  std::size_t numerical_failures() const;
  // Index of a column; throws std::out_of_range.
  std::size_t column(std::string_view name) const;
};

// Numeric cells compare by value (a long and an equal double match; NaN
// matches NaN); strings compare exactly.
bool same_cell(const Cell& a, const Cell& b);
bool same_report(const Report& a, const Report& b);

// The report as it survives printing: every double rounded to the 12
// significant digits used on the wire.
Report printed(const Report& r);

// CSV: `#` lines carry the command, config echo, warnings and failures;
// then a header row and one row per result.
void write_csv(std::ostream& os, const Report& r);
Report parse_csv(std::string_view text);

// JSON object {config, results[], failures[], meta}.
void write_json(std::ostream& os, const Report& r);

}  // namespace specsing::cli

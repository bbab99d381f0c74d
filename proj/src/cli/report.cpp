#include "specsing/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "specsing/cli/config.hpp"

namespace specsing::cli {

namespace {

constexpr std::string_view kFailurePrefix = "# failure ";
constexpr std::string_view kWarningPrefix = "# warning ";
constexpr std::string_view kConfigPrefix = "# config ";
constexpr std::string_view kCommandPrefix = "# command ";
constexpr std::string_view kWallPrefix = "# wall_time_s ";

std::string cell_text(const Cell& c) {
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        in_quotes = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

Cell parse_cell(const std::string& text) {
  long l = 0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), l);
  if (!text.empty() && r.ec == std::errc() && r.ptr == text.data() + text.size()) return l;
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double d = 0.0;
  auto rd = std::from_chars(text.data(), text.data() + text.size(), d);
  if (!text.empty() && rd.ec == std::errc() && rd.ptr == text.data() + text.size()) return d;
  return text;
}

double round_printed(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* l = std::get_if<long>(&c)) return *l;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<std::string>(c);
}

// "key=value" fields of a failure line, with the free-text reason last.
FailureRecord parse_failure(std::string_view body) {
  FailureRecord f;
  const auto colon = body.find(": ");
  const std::string head(body.substr(0, colon));
  if (colon != std::string_view::npos) f.reason = std::string(body.substr(colon + 2));
  std::stringstream ss(head);
  for (std::string field; ss >> field;) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const std::string k = field.substr(0, eq);
    const std::string v = field.substr(eq + 1);
    if (k == "m") f.m = std::stol(v);
    else if (k == "nu") f.nu = std::strtod(v.c_str(), nullptr);
    else if (k == "kind") f.kind = v;
    else if (k == "numerical") f.numerical = v == "true";
  }
  return f;
}

}  // namespace

std::size_t Report::numerical_failures() const {
  return static_cast<std::size_t>(std::count_if(
      failures.begin(), failures.end(), [](const FailureRecord& f) { return f.numerical; }));
}

std::size_t Report::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + std::string(name));
  return static_cast<std::size_t>(it - columns.begin());
}

bool same_cell(const Cell& a, const Cell& b) {
  const bool a_str = std::holds_alternative<std::string>(a);
  const bool b_str = std::holds_alternative<std::string>(b);
  if (a_str || b_str) return a_str && b_str && std::get<std::string>(a) == std::get<std::string>(b);
  auto num = [](const Cell& c) {
    if (const auto* l = std::get_if<long>(&c)) return static_cast<double>(*l);
    return std::get<double>(c);
  };
  const double x = num(a), y = num(b);
  return x == y || (std::isnan(x) && std::isnan(y));
}

bool same_report(const Report& a, const Report& b) {
  if (a.command != b.command || a.config != b.config || a.columns != b.columns ||
      a.warnings != b.warnings || a.rows.size() != b.rows.size() ||
      a.failures.size() != b.failures.size())
    return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    for (std::size_t j = 0; j < a.rows[i].size(); ++j)
      if (!same_cell(a.rows[i][j], b.rows[i][j])) return false;
  }
  for (std::size_t i = 0; i < a.failures.size(); ++i) {
    const auto& x = a.failures[i];
    const auto& y = b.failures[i];
    if (x.m != y.m || x.nu != y.nu || x.kind != y.kind || x.numerical != y.numerical ||
        x.reason != y.reason)
      return false;
  }
  return a.wall_time_s.has_value() == b.wall_time_s.has_value();
}

Report printed(const Report& r) {
  Report out = r;
  for (auto& row : out.rows)
    for (auto& c : row)
      if (auto* d = std::get_if<double>(&c)) *d = round_printed(*d);
  for (auto& f : out.failures) f.nu = round_printed(f.nu);
  if (out.wall_time_s) out.wall_time_s = round_printed(*out.wall_time_s);
  return out;
}

void write_csv(std::ostream& os, const Report& r) {
  os << kCommandPrefix << r.command << '\n';
  for (const auto& [k, v] : r.config) os << kConfigPrefix << k << " = " << v << '\n';
  for (const auto& w : r.warnings) os << kWarningPrefix << w << '\n';
  for (const auto& f : r.failures) {
    os << kFailurePrefix << "m=" << f.m << " nu=" << format_number(f.nu) << " kind=" << f.kind
       << " numerical=" << (f.numerical ? "true" : "false") << ": " << f.reason << '\n';
  }
  if (r.wall_time_s) os << kWallPrefix << format_number(*r.wall_time_s) << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << quote(r.columns[i]);
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote(cell_text(row[i]));
    os << '\n';
  }
}

Report parse_csv(std::string_view text) {
  Report r;
  std::stringstream ss{std::string(text)};
  bool have_header = false;
  for (std::string line; std::getline(ss, line);) {
    const std::string_view v(line);
    if (v.starts_with(kCommandPrefix)) {
      r.command = line.substr(kCommandPrefix.size());
    } else if (v.starts_with(kConfigPrefix)) {
      const auto body = v.substr(kConfigPrefix.size());
      const auto eq = body.find(" = ");
      r.config.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 3)));
    } else if (v.starts_with(kWarningPrefix)) {
      r.warnings.push_back(line.substr(kWarningPrefix.size()));
    } else if (v.starts_with(kFailurePrefix)) {
      r.failures.push_back(parse_failure(v.substr(kFailurePrefix.size())));
    } else if (v.starts_with(kWallPrefix)) {
      r.wall_time_s = std::strtod(line.c_str() + kWallPrefix.size(), nullptr);
    } else if (v.starts_with("#") || line.empty()) {
      continue;
    } else if (!have_header) {
      r.columns = split_csv_line(v);
      have_header = true;
    } else {
      std::vector<Cell> row;
      for (const auto& field : split_csv_line(v)) row.push_back(parse_cell(field));
      r.rows.push_back(std::move(row));
    }
  }
  return r;
}

void write_json(std::ostream& os, const Report& r) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  doc["config"] = cfg;
  ordered_json results = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i]] = cell_json(row[i]);
    results.push_back(obj);
  }
  doc["results"] = results;
  ordered_json failures = ordered_json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"m", f.m},
                        {"nu", f.nu},
                        {"kind", f.kind},
                        {"numerical", f.numerical},
                        {"reason", f.reason}});
  }
  doc["failures"] = failures;
  ordered_json meta = ordered_json::object();
  meta["command"] = r.command;
  meta["columns"] = r.columns;
  meta["warnings"] = r.warnings;
  meta["numerical_failures"] = r.numerical_failures();
  if (r.wall_time_s) meta["wall_time_s"] = *r.wall_time_s;
  doc["meta"] = meta;
  os << doc.dump(2) << '\n';
}

}  // namespace specsing::cli

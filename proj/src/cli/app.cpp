#include "specsing/cli/app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specsing/cli/run.hpp"

namespace specsing::cli {

namespace {

struct Flags {
  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> direct;  // dedicated flags, in order
};

bool is_range(const std::string& v) {
  return v.find("..") != std::string::npos || v.find(':') != std::string::npos;
}

const char* describe(Command c) {
  switch (c) {
    case Command::Solve: return "solve one mode (default: the resonance mode)";
    case Command::Enumerate: return "solve every mode in run.m_range";
    case Command::ScanNu: return "solve the selected modes over run.nu_grid";
    case Command::CriticalNu: return "largest decay constant at which each mode survives";
    case Command::Bounds: return "first-order bounds on the decay constant";
    case Command::Table1: return "reference table: numeric and second-order roots";
    case Command::Fig2Data: return "resonance threshold gain against the decay constant";
    case Command::Fig3Data: return "lasing wavelengths and gains over modes and decay constants";
    case Command::Validate: return "semiclassical validity and ODE cross-checks";
  }
  return "";
}

bool is_grid(const std::string& v) {
  return v.find(',') != std::string::npos || v.find(':') != std::string::npos;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral singularities of planar slab gain media"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Flags flags;
  app.add_option("-c,--config", flags.config_path, "flat key = value configuration file");
  app.add_option("--set", flags.sets, "override any key: --set medium.nu=0.2 (repeatable)");

  auto direct = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags.direct.emplace_back(key, v); }, help);
  };
  direct("--n0", "medium.n0", "host refractive index");
  direct("--lambda0-nm", "medium.lambda0_nm", "resonance wavelength (nm)");
  direct("--gamma-hat", "medium.gamma_hat", "damping ratio");
  direct("--alpha0-per-cm", "medium.alpha0_per_cm", "absorption coefficient (cm^-1)");
  direct("--thickness-um", "medium.thickness_um", "slab thickness (um)");
  direct("--g-star-per-cm", "medium.g_star_per_cm", "gain at the pumped face (cm^-1)");
  direct("--pump", "medium.pump", "uniform | single | double");
  direct("--format", "run.format", "csv | json");
  direct("--out", "run.out", "output path (default stdout)");
  direct("--threads", "run.threads", "worker threads (0 = all cores)");
  app.add_option_function<std::string>(
      "--m",
      [&flags](const std::string& v) {
        flags.direct.emplace_back(is_range(v) ? "run.m_range" : "run.m", v);
      },
      "mode number, or a range lo..hi");
  app.add_option_function<std::string>(
      "--nu",
      [&flags](const std::string& v) {
        flags.direct.emplace_back(is_grid(v) ? "run.nu_grid" : "medium.nu", v);
      },
      "decay constant, or a grid a,b,c / lo:hi:count");
  app.add_flag_callback("--timing", [&flags] { flags.direct.emplace_back("run.timing", "true"); },
                        "include wall time in the output (not byte-reproducible)");
  app.add_flag_callback("--no-ode-check",
                        [&flags] { flags.direct.emplace_back("run.ode_check", "false"); },
                        "skip the ODE certificate on roots");

  std::vector<CLI::App*> subs;
  for (Command c : all_commands()) subs.push_back(app.add_subcommand(std::string(to_string(c)), describe(c)));

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  RunConfig cfg;
  Report report;
  try {
    if (!flags.config_path.empty()) load_config_file(cfg, flags.config_path);
    for (const auto& s : flags.sets) {
      const auto [k, v] = split_assignment(s);
      apply_setting(cfg, k, v);
    }
    for (const auto& [k, v] : flags.direct) apply_setting(cfg, k, v);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) apply_setting(cfg, "run.command", to_string(all_commands()[i]));
    report = run(cfg);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  for (const auto& f : report.failures)
    if (f.numerical) err << "failure: m=" << f.m << ": " << f.reason << '\n';

  std::ostringstream buf;
  if (cfg.format == Format::Json)
    write_json(buf, report);
  else
    write_csv(buf, report);
  if (cfg.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "configuration error: cannot write '" << cfg.out << "'\n";
      return 1;
    }
    file << buf.str();
  }
  return exit_code(report);
}

}  // namespace specsing::cli

#include "specsing/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "specsing/oracle.hpp"
#include "specsing/perturbation.hpp"
#include "specsing/solver.hpp"
#include "specsing/wkb.hpp"

namespace specsing::cli {

namespace {

const std::vector<std::string> kRootColumns{
    "m",           "nu",           "pump",     "omega_hat",  "K",     "lambda_nm",
    "g_star_per_cm", "wkb_residual", "ode_residual", "validity", "iterations", "method"};

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
}

struct RootItem {
  RootItem(const GainMedium& med, const SpectralSingularity& r) : medium(med), root(r) {}
  GainMedium medium;
  SpectralSingularity root;
  double ode_residual = std::nan("");
  double validity = std::nan("");
  std::optional<FailureRecord> failure;
};

// Attaches the semiclassical validity metric and, when enabled, the ODE Jost
// residual |F| / (K |Phi1(1)|) to every root.
void certify(std::vector<RootItem>& items, const RunConfig& cfg) {
  parallel_for(items.size(), cfg.threads, [&](std::size_t i) {
    auto& it = items[i];
    const double g_hat = it.root.g_star_per_cm / it.medium.alpha0_per_cm;
    try {
      const auto ev = evaluate_wkb(it.medium, it.root.omega_hat, g_hat);
      it.validity = validity_metric(ev.context);
      if (cfg.ode_check) {
        const auto sol = integrate_phi1(it.medium, it.root.omega_hat, it.root.g_star_per_cm);
        it.ode_residual =
            std::abs(ode_jost(sol, it.root.K)) / (it.root.K * std::abs(sol.phi1_at_1));
      }
    } catch (const Error& e) {
      it.failure = FailureRecord{it.root.m, it.medium.nu, "certificate", true, e.what()};
    }
  });
}

std::vector<Cell> root_row(const RootItem& it) {
  const auto& r = it.root;
  return {r.m,
          it.medium.nu,
          std::string(to_string(it.medium.pump)),
          r.omega_hat,
          r.K,
          r.lambda_nm,
          r.g_star_per_cm,
          r.residual,
          it.ode_residual,
          it.validity,
          static_cast<long>(r.iterations),
          std::string(to_string(r.method))};
}

FailureRecord failure_from(const ModeFailure& f, double nu) {
  return {f.m, nu, std::string(to_string(f.kind)), f.is_numerical(), f.reason};
}

// Turns certified roots into rows, failures and warnings on the report.
void emit_roots(Report& rep, std::vector<RootItem>& items, const RunConfig& cfg) {
  certify(items, cfg);
  std::stable_sort(items.begin(), items.end(), [](const RootItem& a, const RootItem& b) {
    return a.root.m != b.root.m ? a.root.m < b.root.m : a.medium.nu < b.medium.nu;
  });
  rep.columns = kRootColumns;
  for (const auto& it : items) {
    if (it.failure) rep.failures.push_back(*it.failure);
    if (it.validity > cfg.validity_warn) {
      rep.warnings.push_back("m=" + std::to_string(it.root.m) + " nu=" +
                             format_number(it.medium.nu) + ": validity metric " +
                             format_number(it.validity) + " exceeds " +
                             format_number(cfg.validity_warn));
    }
    rep.rows.push_back(root_row(it));
  }
}

void sort_failures(Report& rep) {
  std::stable_sort(rep.failures.begin(), rep.failures.end(),
                   [](const FailureRecord& a, const FailureRecord& b) {
                     return a.m != b.m ? a.m < b.m : a.nu < b.nu;
                   });
}

long resonance_mode(const GainMedium& medium) { return resonance_first_order(medium).m; }

// Single-mode commands default to the resonance mode unless a mode or range
// was given explicitly.
ModeRange single_modes(const RunConfig& cfg) {
  if (cfg.m) return {*cfg.m, *cfg.m};
  if (cfg.explicit_keys.count("run.m_range")) return cfg.m_range;
  const long m = resonance_mode(cfg.medium);
  return {m, m};
}

// Solves every (m, nu) pair; modes in parallel, per nu.
void solve_grid(Report& rep, const RunConfig& cfg, ModeRange modes,
                const std::vector<double>& nus) {
  std::vector<RootItem> items;
  for (double nu : nus) {
    const auto med = cfg.medium.with_nu(nu);
    const auto sweep = enumerate_modes(med, modes.lo, modes.hi, cfg.solver, cfg.threads);
    for (const auto& root : sweep.singularities) items.emplace_back(med, root);
    for (const auto& f : sweep.failures) rep.failures.push_back(failure_from(f, nu));
  }
  emit_roots(rep, items, cfg);
}

void cmd_solve(Report& rep, const RunConfig& cfg) {
  solve_grid(rep, cfg, single_modes(cfg), cfg.nus());
}

void cmd_enumerate(Report& rep, const RunConfig& cfg) {
  solve_grid(rep, cfg, cfg.modes(), cfg.nus());
}

void cmd_scan_nu(Report& rep, const RunConfig& cfg) {
  const ModeRange modes = single_modes(cfg);
  std::vector<std::pair<long, double>> jobs;
  for (long m = modes.lo; m <= modes.hi; ++m)
    for (double nu : cfg.nus()) jobs.emplace_back(m, nu);
  std::vector<std::optional<RootItem>> found(jobs.size());
  std::vector<std::optional<FailureRecord>> failed(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const auto [m, nu] = jobs[i];
    const auto med = cfg.medium.with_nu(nu);
    const auto sweep = enumerate_modes(med, m, m, cfg.solver, 1);
    if (!sweep.singularities.empty())
      found[i].emplace(med, sweep.singularities.front());
    else
      failed[i] = failure_from(sweep.failures.front(), nu);
  });
  std::vector<RootItem> items;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (found[i]) items.push_back(*found[i]);
    if (failed[i]) rep.failures.push_back(*failed[i]);
  }
  emit_roots(rep, items, cfg);
}

void cmd_critical_nu(Report& rep, const RunConfig& cfg) {
  if (cfg.medium.pump == Pump::Uniform)
    throw ConfigError("critical-nu needs single or double pumping (medium.pump)");
  const ModeRange modes = single_modes(cfg);
  const auto count = static_cast<std::size_t>(modes.hi - modes.lo + 1);
  std::vector<double> nu_c(count, std::nan(""));
  std::vector<std::optional<FailureRecord>> failed(count);
  parallel_for(count, cfg.threads, [&](std::size_t i) {
    const long m = modes.lo + static_cast<long>(i);
    try {
      nu_c[i] = critical_nu(cfg.medium, m, cfg.solver);
    } catch (const NoRootAtZero& e) {
      failed[i] = FailureRecord{m, 0.0, "no-root-at-zero", false, e.what()};
    } catch (const Error& e) {
      failed[i] = FailureRecord{m, 0.0, "numerical", true, e.what()};
    }
  });
  const auto bounds = universal_bounds(cfg.medium.pump, cfg.medium);
  rep.columns = {"m", "pump", "critical_nu", "damping", "first_order_nu_max"};
  for (std::size_t i = 0; i < count; ++i) {
    const long m = modes.lo + static_cast<long>(i);
    if (failed[i]) {
      rep.failures.push_back(*failed[i]);
      continue;
    }
    rep.rows.push_back({m, std::string(to_string(cfg.medium.pump)), nu_c[i],
                        -std::expm1(-nu_c[i]), *bounds.nu_max});
  }
}

void cmd_bounds(Report& rep, const RunConfig& cfg) {
  std::vector<Pump> pumps{Pump::Double, Pump::Single};
  if (cfg.explicit_keys.count("medium.pump")) {
    if (cfg.medium.pump == Pump::Uniform)
      throw ConfigError("bounds needs single or double pumping (medium.pump)");
    pumps = {cfg.medium.pump};
  }
  rep.columns = {"pump", "nu_weak", "damping_weak", "nu_max", "damping_max"};
  for (Pump p : pumps) {
    const auto b = universal_bounds(p, cfg.medium);
    rep.rows.push_back({std::string(to_string(p)), b.nu_weak, b.damping_weak, *b.nu_max,
                        *b.damping_max});
  }
}

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

void cmd_table1(Report& rep, const RunConfig& cfg) {
  const auto nus = cfg.nu_grid.empty() ? table1_nus() : cfg.nu_grid;
  std::vector<RootItem> items;
  for (double nu : nus) {
    const auto med = cfg.medium.with_nu(nu);
    for (long m : table1_modes()) {
      const auto sweep = enumerate_modes(med, m, m, cfg.solver, cfg.threads);
      for (const auto& root : sweep.singularities) items.emplace_back(med, root);
      for (const auto& f : sweep.failures) rep.failures.push_back(failure_from(f, nu));
    }
  }
  emit_roots(rep, items, cfg);
  // Published precision, and the second-order prediction alongside.
  rep.columns.insert(rep.columns.end(),
                     {"lambda_nm_printed", "g_star_printed", "lambda_perturb2_nm",
                      "g_star_perturb2"});
  const std::size_t lam = rep.column("lambda_nm");
  const std::size_t g = rep.column("g_star_per_cm");
  const std::size_t mcol = rep.column("m");
  const std::size_t nucol = rep.column("nu");
  for (auto& row : rep.rows) {
    const auto med = cfg.medium.with_nu(std::get<double>(row[nucol]));
    row.push_back(round_to(std::get<double>(row[lam]), 7));
    row.push_back(round_to(std::get<double>(row[g]), 5));
    try {
      const auto p2 = singularity_second_order(med, std::get<long>(row[mcol]));
      row.push_back(p2.lambda_nm);
      row.push_back(p2.g_star_per_cm);
    } catch (const Error&) {
      row.push_back(std::nan(""));
      row.push_back(std::nan(""));
    }
  }
}

void cmd_fig2(Report& rep, const RunConfig& cfg) {
  std::vector<double> nus = cfg.nu_grid;
  if (nus.empty())
    for (int i = 0; i <= 80; ++i) nus.push_back(0.05 * i);
  const long m = cfg.m ? *cfg.m : resonance_mode(cfg.medium);
  const std::vector<Pump> pumps{Pump::Double, Pump::Single};
  std::vector<std::pair<Pump, double>> jobs;
  for (Pump p : pumps)
    for (double nu : nus) jobs.emplace_back(p, nu);
  std::vector<std::vector<Cell>> rows(jobs.size());
  std::vector<std::optional<FailureRecord>> failed(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const auto [pump, nu] = jobs[i];
    const auto med = cfg.medium.with_pump(pump).with_nu(nu);
    const double first = resonance_gain_first_order(cfg.medium, pump, nu);
    double g = std::nan("");
    double lambda = std::nan("");
    try {
      const auto root = solve_mode(med, m, cfg.solver);
      g = root.g_star_per_cm;
      lambda = root.lambda_nm;
    } catch (const GainExceedsLoss& e) {
      // The curve continues past the bound; the root is located but unreachable.
      g = e.g_hat * med.alpha0_per_cm;
      lambda = wavelength_nm(med, e.omega_hat);
    } catch (const Error& e) {
      failed[i] = FailureRecord{m, nu, "numerical", true, e.what()};
    }
    rows[i] = {std::string(to_string(pump)), nu, first, g, lambda,
               static_cast<long>(g <= med.alpha0_per_cm ? 1 : 0), med.alpha0_per_cm};
  });
  rep.columns = {"pump",          "nu",        "g_star_first_order", "g_star_numeric",
                 "lambda_nm",     "within_bound", "alpha0_per_cm"};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    rep.rows.push_back(rows[i]);
    if (failed[i]) rep.failures.push_back(*failed[i]);
  }
}

void cmd_fig3(Report& rep, const RunConfig& cfg) {
  solve_grid(rep, cfg, cfg.modes(), cfg.nus());
  const std::size_t m = rep.column("m");
  const std::size_t nu = rep.column("nu");
  const std::size_t g = rep.column("g_star_per_cm");
  const std::size_t lam = rep.column("lambda_nm");
  const std::size_t ode = rep.column("ode_residual");
  for (auto& row : rep.rows) row = {row[m], row[nu], row[g], row[lam], row[ode]};
  rep.columns = {"m", "nu", "g_star_per_cm", "lambda_nm", "ode_residual"};
}

void cmd_validate(Report& rep, const RunConfig& cfg) {
  const ModeRange modes = single_modes(cfg);
  std::vector<std::pair<long, double>> jobs;
  for (long m = modes.lo; m <= modes.hi; ++m)
    for (double nu : cfg.nus()) jobs.emplace_back(m, nu);
  std::vector<std::vector<Cell>> rows(jobs.size());
  std::vector<std::optional<FailureRecord>> failed(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const auto [m, nu] = jobs[i];
    const auto med = cfg.medium.with_nu(nu);
    try {
      const auto root = solve_mode(med, m, cfg.solver);
      const auto ev = evaluate_wkb(med, root.omega_hat, root.g_star_per_cm / med.alpha0_per_cm);
      const auto wkb = wkb_phi1_at_one(ev.context);
      const auto sol = integrate_phi1(med, root.omega_hat, root.g_star_per_cm);
      const auto trace = wronskian_trace(med, root.omega_hat, root.g_star_per_cm);
      const double scale = std::abs(sol.phi1_at_1);
      rows[i] = {m,
                 nu,
                 root.lambda_nm,
                 root.g_star_per_cm,
                 validity_metric(ev.context),
                 std::abs(wkb.phi - sol.phi1_at_1) / scale,
                 std::abs(wkb.dphi - sol.dphi1_at_1) / std::abs(sol.dphi1_at_1),
                 std::abs(ode_jost(sol, root.K)) / (root.K * scale),
                 sol.est_error,
                 trace.max_relative_drift()};
    } catch (const GainExceedsLoss& e) {
      failed[i] = FailureRecord{m, nu, "gain-exceeds-loss", false, e.what()};
    } catch (const NonPhysicalRoot& e) {
      failed[i] = FailureRecord{m, nu, "non-physical", false, e.what()};
    } catch (const Error& e) {
      failed[i] = FailureRecord{m, nu, "numerical", true, e.what()};
    }
  });
  rep.columns = {"m",           "nu",          "lambda_nm",     "g_star_per_cm",
                 "validity",    "phi_rel_diff", "dphi_rel_diff", "ode_residual",
                 "ode_est_error", "wronskian_drift"};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (failed[i]) {
      rep.failures.push_back(*failed[i]);
      continue;
    }
    rep.rows.push_back(rows[i]);
    const double v = std::get<double>(rows[i][4]);
    if (v > cfg.validity_warn) {
      rep.warnings.push_back("m=" + std::to_string(jobs[i].first) + " nu=" +
                             format_number(jobs[i].second) + ": validity metric " +
                             format_number(v) + " exceeds " + format_number(cfg.validity_warn));
    }
  }
}

}  // namespace

const std::vector<long>& table1_modes() {
  static const std::vector<long> modes{1335, 1350, 1360, 1380};
  return modes;
}

const std::vector<double>& table1_nus() {
  static const std::vector<double> nus{0.0, 0.1, 0.2, 0.3, 0.5};
  return nus;
}

Report run(const RunConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  rep.command = std::string(to_string(*cfg.command));
  rep.config = echo(cfg);
  switch (*cfg.command) {
    case Command::Solve: cmd_solve(rep, cfg); break;
    case Command::Enumerate: cmd_enumerate(rep, cfg); break;
    case Command::ScanNu: cmd_scan_nu(rep, cfg); break;
    case Command::CriticalNu: cmd_critical_nu(rep, cfg); break;
    case Command::Bounds: cmd_bounds(rep, cfg); break;
    case Command::Table1: cmd_table1(rep, cfg); break;
    case Command::Fig2Data: cmd_fig2(rep, cfg); break;
    case Command::Fig3Data: cmd_fig3(rep, cfg); break;
    case Command::Validate: cmd_validate(rep, cfg); break;
  }
  sort_failures(rep);
  if (cfg.timing) {
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rep;
}

int exit_code(const Report& report) { return report.numerical_failures() > 0 ? 2 : 0; }

}  // namespace specsing::cli

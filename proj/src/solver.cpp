#include "specsing/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>
#include <variant>

#include "specsing/errors.hpp"
#include "specsing/perturbation.hpp"

namespace specsing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxHalvings = 20;
// Residuals below this multiple of K are at the rounding floor of e1.
constexpr double kNoiseFloor = 1e-13;

struct Vec2 {
  double a = 0.0;
  double b = 0.0;
};

ResidualPair residual_at(const GainMedium& medium, double omega_hat, double g_hat, long m) {
  const auto ev = evaluate_wkb(medium, omega_hat, g_hat);
  const double phase = kTwoPi * static_cast<double>(m) + std::arg(ev.boundary);
  const double log_mod = std::log(std::abs(ev.boundary));
  return {phase * ev.rs.rho + log_mod * ev.rs.sigma - ev.state.K,
          phase * ev.rs.sigma - log_mod * ev.rs.rho};
}

double norm(const ResidualPair& r) { return std::hypot(r.e1, r.e2); }

double fd_step_for(double x, double rel) { return rel * std::max(std::abs(x), 1e-3); }

// Seed from a coarse omega scan when the perturbative seed fails.
Seed grid_seed(const GainMedium& medium, long m) {
  const double n0 = medium.n0;
  const double factor = medium.pump == Pump::Single ? 0.5 * one_minus_exp_over(medium.nu)
                        : medium.pump == Pump::Double ? tanh_half_over(medium.nu)
                                                      : 0.5;
  Seed best{1.0, medium.alpha0_per_cm * 0.5};
  double best_score = INFINITY;
  constexpr int kPoints = 201;
  for (int i = 0; i < kPoints; ++i) {
    const double w = 0.95 + 0.1 * i / (kPoints - 1);
    const double im_t = dimensionless_state(medium, w, 0.0).t_hat.imag();
    const double eta = log_index_ratio(n0) / (std::numbers::pi * static_cast<double>(m) * im_t);
    const double g_hat = (eta + 0.5) / factor - 1.0;
    try {
      const auto r = residual_at(medium, w, g_hat, m);
      const double score = std::abs(r.e1) + std::abs(r.e2);
      if (score < best_score) {
        best_score = score;
        best = {w, g_hat * medium.alpha0_per_cm};
      }
    } catch (const Error&) {
    }
  }
  return best;
}

SpectralSingularity newton(const GainMedium& medium, long m, const SolveConfig& cfg, Seed seed) {
  Vec2 x{seed.omega_hat, seed.g_star_per_cm / medium.alpha0_per_cm};
  ResidualPair f = residual_at(medium, x.a, x.b, m);
  int iter = 0;
  bool converged = false;
  for (; iter < cfg.max_iter && !converged; ++iter) {
    const double ha = fd_step_for(x.a, cfg.fd_step);
    const double hb = fd_step_for(x.b, cfg.fd_step);
    const auto fa_p = residual_at(medium, x.a + ha, x.b, m);
    const auto fa_m = residual_at(medium, x.a - ha, x.b, m);
    const auto fb_p = residual_at(medium, x.a, x.b + hb, m);
    const auto fb_m = residual_at(medium, x.a, x.b - hb, m);
    const double j11 = (fa_p.e1 - fa_m.e1) / (2.0 * ha);
    const double j21 = (fa_p.e2 - fa_m.e2) / (2.0 * ha);
    const double j12 = (fb_p.e1 - fb_m.e1) / (2.0 * hb);
    const double j22 = (fb_p.e2 - fb_m.e2) / (2.0 * hb);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det))
      throw NoConvergence("singular Jacobian", iter, f.max_abs());
    Vec2 step{-(j22 * f.e1 - j12 * f.e2) / det, -(-j21 * f.e1 + j11 * f.e2) / det};

    const double current = norm(f);
    const double floor = kNoiseFloor * std::max(1.0, std::abs(x.a) * resonance_wavenumber(medium));
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings; ++h) {
      const Vec2 trial{x.a + step.a, x.b + step.b};
      try {
        if (trial.a > 0.0) {
          const auto ft = residual_at(medium, trial.a, trial.b, m);
          if (norm(ft) < current || current <= floor) {
            x = trial;
            f = ft;
            accepted = true;
            break;
          }
        }
      } catch (const Error&) {
      }
      step.a *= 0.5;
      step.b *= 0.5;
    }
    if (!accepted) throw NoConvergence("line search failed", iter + 1, f.max_abs());
    converged = std::abs(step.a) <= cfg.newton_tol * std::abs(x.a) &&
                std::abs(step.b) <= cfg.newton_tol * std::max(std::abs(x.b), 1e-3);
  }
  if (!converged) throw NoConvergence("Newton iteration limit reached", iter, f.max_abs());

  SpectralSingularity out;
  out.m = m;
  out.nu = medium.nu;
  out.omega_hat = x.a;
  out.K = x.a * resonance_wavenumber(medium);
  out.lambda_nm = wavelength_nm(medium, x.a);
  out.g_star_per_cm = x.b * medium.alpha0_per_cm;
  out.residual = f.max_abs();
  out.method = Method::WkbNumeric;
  out.iterations = iter;
  return out;
}

void check_physical(const SpectralSingularity& root, const GainMedium& medium) {
  const double g_hat = root.g_star_per_cm / medium.alpha0_per_cm;
  if (g_hat > 1.0) {
    throw GainExceedsLoss("mode " + std::to_string(root.m) + " needs g_star = " +
                              std::to_string(root.g_star_per_cm) + " cm^-1 > alpha0",
                          root.omega_hat, g_hat);
  }
  if (!(g_hat > 0.0)) {
    throw NonPhysicalRoot("mode " + std::to_string(root.m) + " has no positive-gain root",
                          root.omega_hat, g_hat);
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::WkbNumeric:
      return "wkb-numeric";
    case Method::Perturb1:
      return "perturb1";
    case Method::Perturb2:
      return "perturb2";
  }
  return "unknown";
}

std::string_view to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::GainExceedsLoss:
      return "gain-exceeds-loss";
    case FailureKind::NonPhysical:
      return "non-physical";
    case FailureKind::NoConvergence:
      return "no-convergence";
    case FailureKind::Numerical:
      return "numerical";
  }
  return "unknown";
}

void SolveConfig::validate() const {
  if (!(newton_tol > 0.0) || !(fd_step > 0.0) || !(bisect_tol > 0.0) || max_iter < 1)
    throw InvalidInput("solver settings must be positive and max_iter >= 1");
}

double ResidualPair::max_abs() const { return std::max(std::abs(e1), std::abs(e2)); }

bool ModeFailure::is_numerical() const {
  return kind == FailureKind::NoConvergence || kind == FailureKind::Numerical;
}

std::size_t SolveReport::numerical_failures() const {
  return static_cast<std::size_t>(std::count_if(
      failures.begin(), failures.end(), [](const ModeFailure& f) { return f.is_numerical(); }));
}

WkbEvaluation evaluate_wkb(const GainMedium& medium, double omega_hat, double g_hat) {
  WkbEvaluation ev;
  ev.state = dimensionless_state(medium, omega_hat, g_hat);
  ev.context = make_wkb_context(ev.state, GainProfile::for_medium(medium));
  ev.integral = phase_integral(ev.context);
  ev.boundary = boundary_factor(ev.context);
  ev.rs = rho_sigma(ev.context, ev.integral);
  return ev;
}

ResidualPair residual_system(const GainMedium& medium, double omega_hat, double g_star_per_cm,
                             long m) {
  return residual_at(medium, omega_hat, g_star_per_cm / medium.alpha0_per_cm, m);
}

long mode_number(const GainMedium& medium, double omega_hat, double g_star_per_cm) {
  const auto ev = evaluate_wkb(medium, omega_hat, g_star_per_cm / medium.alpha0_per_cm);
  const double winding = (2.0 * ev.context.r * ev.state.K * ev.integral).real();
  return std::lround((winding - std::arg(ev.boundary)) / kTwoPi);
}

SpectralSingularity solve_mode(const GainMedium& medium, long m, const SolveConfig& cfg,
                               std::optional<Seed> seed) {
  cfg.validate();
  SpectralSingularity root;
  if (seed) {
    root = newton(medium, m, cfg, *seed);
  } else {
    const auto first = singularity_first_order(medium, m);
    try {
      root = newton(medium, m, cfg, {first.omega_hat, first.g_star_per_cm});
    } catch (const NoConvergence&) {
      root = newton(medium, m, cfg, grid_seed(medium, m));
    }
  }
  check_physical(root, medium);
  return root;
}

SolveReport enumerate_modes(const GainMedium& medium, long m_lo, long m_hi,
                            const SolveConfig& cfg, unsigned threads) {
  if (m_lo > m_hi) throw InvalidInput("mode range is empty (m_lo > m_hi)");
  cfg.validate();
  const auto count = static_cast<std::size_t>(m_hi - m_lo + 1);
  std::vector<std::variant<SpectralSingularity, ModeFailure>> slots(count);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const long m = m_lo + static_cast<long>(i);
      try {
        slots[i] = solve_mode(medium, m, cfg);
      } catch (const GainExceedsLoss& e) {
        slots[i] = ModeFailure{m, FailureKind::GainExceedsLoss, e.what(), e.omega_hat,
                               e.g_hat * medium.alpha0_per_cm};
      } catch (const NonPhysicalRoot& e) {
        slots[i] = ModeFailure{m, FailureKind::NonPhysical, e.what(), e.omega_hat,
                               e.g_hat * medium.alpha0_per_cm};
      } catch (const NoConvergence& e) {
        slots[i] = ModeFailure{m, FailureKind::NoConvergence, e.what(), {}, {}};
      } catch (const Error& e) {
        slots[i] = ModeFailure{m, FailureKind::Numerical, e.what(), {}, {}};
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  SolveReport report;
  for (auto& slot : slots) {
    if (auto* root = std::get_if<SpectralSingularity>(&slot))
      report.singularities.push_back(*root);
    else
      report.failures.push_back(std::get<ModeFailure>(slot));
  }
  return report;
}

double critical_nu(const GainMedium& medium, long m, const SolveConfig& cfg) {
  if (medium.pump == Pump::Uniform) throw InvalidInput("uniform pumping has no decay constant");
  cfg.validate();

  std::optional<Seed> seed;
  auto admits = [&](double nu) {
    try {
      const auto root = solve_mode(medium.with_nu(nu), m, cfg, seed);
      seed = Seed{root.omega_hat, root.g_star_per_cm};
      return true;
    } catch (const GainExceedsLoss&) {
      return false;
    }
  };

  try {
    admits(0.0);
  } catch (const GainExceedsLoss&) {
  } catch (const NonPhysicalRoot&) {
  }
  if (!seed) throw NoRootAtZero("mode " + std::to_string(m) + " has no physical root at nu = 0");

  double lo = 0.0;
  double hi = 0.125;
  constexpr double kMaxNu = 64.0;
  while (admits(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxNu) throw NoConvergence("no upper bracket for the critical nu", 0, hi);
  }
  // `seed` now holds the root at lo; keep it that way across failed probes.
  Seed lo_seed = *seed;
  while (hi - lo > cfg.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    seed = lo_seed;
    if (admits(mid)) {
      lo = mid;
      lo_seed = *seed;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace specsing

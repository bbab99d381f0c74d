#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specsing/medium.hpp"
#include "specsing/singularity.hpp"
#include "specsing/wkb.hpp"

namespace specsing {

struct SolveConfig {
  double newton_tol = 1e-12;  // relative step tolerance
  int max_iter = 60;
  double fd_step = 1e-7;      // relative central-difference step
  double bisect_tol = 1e-8;   // critical-nu bracket width
  void validate() const;
};

// e1 = {2 pi m + arg E} rho + ln|E| sigma - K
// e2 = {2 pi m + arg E} sigma - ln|E| rho
struct ResidualPair {
  double e1 = 0.0;
  double e2 = 0.0;
  double max_abs() const;
};

ResidualPair residual_system(const GainMedium& medium, double omega_hat, double g_star_per_cm,
                             long m);

// Everything the semiclassical condition needs at one (omega_hat, g_hat).
struct WkbEvaluation {
  DimensionlessState state;
  WkbContext context;
  cplx integral;
  cplx boundary;
  RhoSigma rs;
};
WkbEvaluation evaluate_wkb(const GainMedium& medium, double omega_hat, double g_hat);

// Integer m recovered from the mode equation at a root:
// m = round((Re(2 r K I) - arg E) / 2 pi).
long mode_number(const GainMedium& medium, double omega_hat, double g_star_per_cm);

struct Seed {
  double omega_hat = 1.0;
  double g_star_per_cm = 0.0;
};

// Damped Newton with a central-difference Jacobian on (omega_hat, g_hat).
// Throws NoConvergence, GainExceedsLoss (root needs g_star > alpha0) or
// NonPhysicalRoot (root has g_star <= 0).
SpectralSingularity solve_mode(const GainMedium& medium, long m, const SolveConfig& cfg = {},
                               std::optional<Seed> seed = std::nullopt);

enum class FailureKind { GainExceedsLoss, NonPhysical, NoConvergence, Numerical };
std::string_view to_string(FailureKind kind);

struct ModeFailure {
  long m = 0;
  FailureKind kind = FailureKind::Numerical;
  std::string reason;
  // Location of an unreachable root, when one was found.
  std::optional<double> omega_hat;
  std::optional<double> g_star_per_cm;
  // Physical outcomes (no root with 0 < g_hat <= 1) versus solver trouble.
  bool is_numerical() const;
};

struct SolveReport {
  std::vector<SpectralSingularity> singularities;  // sorted by m
  std::vector<ModeFailure> failures;               // sorted by m
  std::size_t numerical_failures() const;
};

// Solves every m in [m_lo, m_hi]; threads = 0 picks the hardware count.
SolveReport enumerate_modes(const GainMedium& medium, long m_lo, long m_hi,
                            const SolveConfig& cfg = {}, unsigned threads = 0);

// Largest nu for which mode m still has a root with g_hat <= 1, to within
// cfg.bisect_tol. Throws NoRootAtZero if the mode is absent at nu = 0.
double critical_nu(const GainMedium& medium, long m, const SolveConfig& cfg = {});

}  // namespace specsing

#pragma once

#include <optional>

#include "specsing/medium.hpp"
#include "specsing/singularity.hpp"

namespace specsing {

// Expansion coefficients in t_hat and 1/K. xi (and the second-order
// machinery) exists only for double or uniform pumping; zeta only for single
// pumping.
struct PerturbCoeffs {
  double eta = 0.0;
  std::optional<double> xi;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C4 = 0.0;
  std::optional<double> zeta;
};

// Throws DomainError for single pumping with g_hat == 0 (zeta undefined).
PerturbCoeffs coeffs(const GainMedium& medium);
PerturbCoeffs coeffs(Pump pump, double n0, double g_hat, double nu);

// ln((n0 + 1)/(n0 - 1)).
double log_index_ratio(double n0);

struct ResonanceEstimate {
  long m = 0;
  double m_exact = 0.0;  // 2 n0 L / lambda0 before rounding
  double K0 = 0.0;       // pi m / n0
  double g_star_per_cm = 0.0;
};

// Singularity nearest the resonance frequency at first order, for the
// medium's pump variant and decay constant.
ResonanceEstimate resonance_first_order(const GainMedium& medium);

// First-order threshold gain at resonance as a function of nu (cm^-1).
double resonance_gain_first_order(const GainMedium& medium, Pump pump, double nu);

// First-order boundary factor at omega_hat = 1.
cplx resonance_boundary_factor(const GainMedium& medium);

// Second-order resonance wavenumber
//   K0 = pi m / n0 + lambda0 alpha0 / (2 pi n0^2) [(eta - 3 xi / eta) ln(...) + n0 g / (n0^2 - 1)],
// with g_hat taken from the medium. Double or uniform pumping only.
double resonance_K0_second_order(const GainMedium& medium, long m);

struct LasingBounds {
  double nu_weak = 0.0;
  double damping_weak = 0.0;  // 1 - exp(-nu_weak)
  std::optional<double> nu_max;
  std::optional<double> damping_max;
};

// Parameter-free bound on nu, plus the medium-dependent improved bound when a
// medium is supplied. Uniform pumping has no decay and is rejected.
LasingBounds universal_bounds(Pump pump, const std::optional<GainMedium>& medium = {});

// Closed-form first-order singularity of mode m: K = pi m / n0 and g_hat
// from pi m eta Im(t_hat) = ln((n0+1)/(n0-1)).
SpectralSingularity singularity_first_order(const GainMedium& medium, long m);

// Second-order singularity: scalar Newton in omega_hat with g_hat eliminated
// through the second-order imaginary-part condition, then K from the
// second-order real-part expression. Double or uniform pumping only.
SpectralSingularity singularity_second_order(const GainMedium& medium, long m);

}  // namespace specsing

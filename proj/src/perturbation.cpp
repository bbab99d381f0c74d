#include "specsing/perturbation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "specsing/bisect.hpp"
#include "specsing/errors.hpp"
#include "specsing/units.hpp"

namespace specsing {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundLo = 1e-6;
constexpr double kBoundHi = 20.0;
constexpr double kBoundTol = 1e-9;

double sinh_over(double nu) {
  if (std::abs(nu) < 1e-6) return 1.0 + nu * nu / 6.0;
  return std::sinh(nu) / nu;
}

// Fraction multiplying (1 + g_hat) in eta.
double eta_factor(Pump pump, double nu) {
  if (pump == Pump::Single) return 0.5 * one_minus_exp_over(nu);
  return tanh_half_over(pump == Pump::Uniform ? 0.0 : nu);
}

double xi_of(double g_hat, double nu) {
  const double g1 = 1.0 + g_hat;
  return (1.0 + g1 * (g1 + (g_hat - 3.0) * sinh_over(nu)) / (std::cosh(nu) + 1.0)) / 8.0;
}

double dxi_dg(double g_hat, double nu) {
  const double sh = sinh_over(nu);
  return ((1.0 + g_hat + (g_hat - 3.0) * sh) + (1.0 + g_hat) * (1.0 + sh)) /
         (8.0 * (std::cosh(nu) + 1.0));
}

double effective_nu(const GainMedium& medium) {
  return medium.pump == Pump::Uniform ? 0.0 : medium.nu;
}

void require_second_order_pump(const GainMedium& medium) {
  if (medium.pump == Pump::Single)
    throw DomainError("second-order expansion is available for double or uniform pumping only");
}

cplx t_hat_at(const GainMedium& medium, double omega_hat) {
  return dimensionless_state(medium, omega_hat, 0.0).t_hat;
}

}  // namespace

double log_index_ratio(double n0) { return std::log((n0 + 1.0) / (n0 - 1.0)); }

PerturbCoeffs coeffs(Pump pump, double n0, double g_hat, double nu) {
  if (!(nu >= 0.0)) throw DomainError("nu must be non-negative");
  const double n0sq = n0 * n0;
  const double d = n0sq - 1.0;
  PerturbCoeffs c;
  c.eta = (1.0 + g_hat) * eta_factor(pump, nu) - 0.5;
  c.C1 = 2.0 * n0 * g_hat / d;
  c.C2 = (3.0 * n0sq + 4.0 * n0 - 1.0) * n0 * g_hat * g_hat / (2.0 * d * d);
  c.C3 = -n0 * (3.0 * n0sq - 1.0) * g_hat * g_hat / (2.0 * d * d);
  c.C4 = -n0 * (1.0 + g_hat) / d;
  if (pump == Pump::Single) {
    if (g_hat == 0.0) throw DomainError("zeta is undefined for g_hat = 0");
    c.zeta = 0.5 * (1.0 + std::exp(-nu) + std::expm1(-nu) / g_hat);
  } else {
    c.xi = xi_of(g_hat, pump == Pump::Uniform ? 0.0 : nu);
  }
  return c;
}

PerturbCoeffs coeffs(const GainMedium& medium) {
  return coeffs(medium.pump, medium.n0, medium.g_hat(), medium.nu);
}

double resonance_gain_first_order(const GainMedium& medium, Pump pump, double nu) {
  if (pump == Pump::Uniform) nu = 0.0;
  const double length_cm = medium.thickness_um / 1e4;
  const double bracket = log_index_ratio(medium.n0) / length_cm + 0.5 * medium.alpha0_per_cm;
  const double factor =
      pump == Pump::Single ? 2.0 / one_minus_exp_over(nu) : 1.0 / tanh_half_over(nu);
  return factor * bracket - medium.alpha0_per_cm;
}

ResonanceEstimate resonance_first_order(const GainMedium& medium) {
  ResonanceEstimate est;
  est.m_exact = 2.0 * medium.n0 * medium.thickness_nm() / medium.lambda0_nm;
  est.m = std::lround(est.m_exact);
  est.K0 = kPi * static_cast<double>(est.m) / medium.n0;
  est.g_star_per_cm = resonance_gain_first_order(medium, medium.pump, medium.nu);
  return est;
}

cplx resonance_boundary_factor(const GainMedium& medium) {
  const double n0 = medium.n0;
  const double ratio = (n0 + 1.0) / (n0 - 1.0);
  double phase = medium.lambda0_nm * units::per_cm_to_per_nm(medium.g_star_per_cm) /
                 (kPi * (n0 * n0 - 1.0));
  if (medium.pump == Pump::Single) phase *= *coeffs(medium).zeta;
  return ratio * ratio * std::exp(cplx(0.0, phase));
}

double resonance_K0_second_order(const GainMedium& medium, long m) {
  require_second_order_pump(medium);
  const double n0 = medium.n0;
  const auto c = coeffs(medium.pump, n0, medium.g_hat(), effective_nu(medium));
  const double ln = log_index_ratio(n0);
  const double correction =
      (c.eta - 3.0 * *c.xi / c.eta) * ln + n0 * medium.g_hat() / (n0 * n0 - 1.0);
  return kPi * static_cast<double>(m) / n0 +
         medium.lambda_alpha() / (2.0 * kPi * n0 * n0) * correction;
}

LasingBounds universal_bounds(Pump pump, const std::optional<GainMedium>& medium) {
  if (pump == Pump::Uniform) throw InvalidInput("uniform pumping has no decay-constant bound");
  LasingBounds out;
  if (pump == Pump::Double) {
    out.nu_weak = bisect_root([](double nu) { return 4.0 * std::tanh(0.5 * nu) - nu; },
                              kBoundLo, kBoundHi, kBoundTol);
  } else {
    out.nu_weak = bisect_root([](double nu) { return one_minus_exp_over(nu) - 0.5; },
                              kBoundLo, kBoundHi, kBoundTol);
  }
  out.damping_weak = -std::expm1(-out.nu_weak);
  if (medium) {
    const double c = log_index_ratio(medium->n0) / medium->alpha_length() + 0.5;
    if (pump == Pump::Double) {
      out.nu_max = bisect_root([c](double nu) { return 2.0 * std::tanh(0.5 * nu) - c * nu; },
                               kBoundLo, kBoundHi, kBoundTol);
    } else {
      out.nu_max = bisect_root([c](double nu) { return one_minus_exp_over(nu) - c; }, kBoundLo,
                               kBoundHi, kBoundTol);
    }
    out.damping_max = -std::expm1(-*out.nu_max);
  }
  return out;
}

SpectralSingularity singularity_first_order(const GainMedium& medium, long m) {
  const double n0 = medium.n0;
  const double K = kPi * static_cast<double>(m) / n0;
  const double omega_hat = K / resonance_wavenumber(medium);
  const double im_t = t_hat_at(medium, omega_hat).imag();
  const double factor = eta_factor(medium.pump, effective_nu(medium));
  const double eta = log_index_ratio(n0) / (kPi * static_cast<double>(m) * im_t);
  const double g_hat = (eta + 0.5) / factor - 1.0;

  SpectralSingularity out;
  out.m = m;
  out.nu = medium.nu;
  out.omega_hat = omega_hat;
  out.K = K;
  out.lambda_nm = wavelength_nm(medium, omega_hat);
  out.g_star_per_cm = g_hat * medium.alpha0_per_cm;
  out.residual = std::numeric_limits<double>::quiet_NaN();
  out.method = Method::Perturb1;
  return out;
}

SpectralSingularity singularity_second_order(const GainMedium& medium, long m) {
  require_second_order_pump(medium);
  const double n0 = medium.n0;
  const double n0sq = n0 * n0;
  const double nu = effective_nu(medium);
  const double ln = log_index_ratio(n0);
  const double pim = kPi * static_cast<double>(m);
  const double T = tanh_half_over(nu);
  const double K_res = resonance_wavenumber(medium);
  const auto first = singularity_first_order(medium, m);

  // Imaginary-part condition, solved for g_hat at fixed t_hat.
  auto gain_for = [&](cplx t, double g_start) {
    const double re = t.real();
    const double im = t.imag();
    double g = g_start;
    for (int it = 0; it < 50; ++it) {
      const double eta = (1.0 + g) * T - 0.5;
      const double xi = xi_of(g, nu);
      const double val = pim * eta * im - ln + 6.0 * pim * xi * re * im -
                         (n0 * g / (n0sq - 1.0) + eta * ln) * re;
      const double deriv =
          pim * T * im + 6.0 * pim * dxi_dg(g, nu) * re * im - (n0 / (n0sq - 1.0) + T * ln) * re;
      const double step = val / deriv;
      g -= step;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(g))) return g;
    }
    throw NoConvergence("second-order gain equation did not converge", 50,
                        std::numeric_limits<double>::quiet_NaN());
  };

  // Real-part expression for K.
  auto K_of = [&](cplx t, double g) {
    const double re = t.real();
    const double im = t.imag();
    const double eta = (1.0 + g) * T - 0.5;
    const double xi = xi_of(g, nu);
    return (pim * (1.0 + eta * re + 3.0 * xi * re * re - 3.0 * xi * im * im) +
            (n0 * g / (n0sq - 1.0) + eta * ln) * im) /
           n0;
  };

  double g_hat = first.g_star_per_cm / medium.alpha0_per_cm;
  auto mismatch = [&](double w) {
    const cplx t = t_hat_at(medium, w);
    g_hat = gain_for(t, g_hat);
    return w * K_res - K_of(t, g_hat);
  };

  double w = first.omega_hat;
  constexpr int kMaxIter = 50;
  double last = 0.0;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    const double h = 1e-7 * w;
    const double g_keep = g_hat;
    const double slope = (mismatch(w + h) - mismatch(w - h)) / (2.0 * h);
    g_hat = g_keep;
    last = mismatch(w);
    const double step = last / slope;
    w -= step;
    if (std::abs(step) <= 1e-14 * w) break;
  }
  if (iter == kMaxIter)
    throw NoConvergence("second-order frequency equation did not converge", iter,
                        std::abs(last));
  mismatch(w);

  SpectralSingularity out;
  out.m = m;
  out.nu = medium.nu;
  out.omega_hat = w;
  out.K = w * K_res;
  out.lambda_nm = wavelength_nm(medium, w);
  out.g_star_per_cm = g_hat * medium.alpha0_per_cm;
  out.residual = std::numeric_limits<double>::quiet_NaN();
  out.method = Method::Perturb2;
  out.iterations = iter + 1;
  return out;
}

}  // namespace specsing

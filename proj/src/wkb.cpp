#include "specsing/wkb.hpp"

#include <cmath>
#include <string>

#include "specsing/errors.hpp"

namespace specsing {

namespace {

constexpr cplx kI(0.0, 1.0);

cplx one_minus_sf(const WkbContext& ctx, double f) { return 1.0 - ctx.s * f; }

}  // namespace

WkbContext make_wkb_context(double K, cplx r, cplx s, const GainProfile& profile) {
  if (!(K > 0.0) || !std::isfinite(K)) throw InvalidInput("K must be positive and finite");
  if (!(r.real() > 0.0) || !std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw InvalidInput("Re r must be positive and r finite");
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
    throw InvalidInput("s must be finite");

  // f is real with range [fmin, fmax], so 1 - s f sweeps a segment through 1.
  // It can only touch the closed negative real axis when s is real.
  const auto [fmin, fmax] = profile.range();
  if (s.imag() == 0.0) {
    const double lowest = std::min(1.0 - s.real() * fmin, 1.0 - s.real() * fmax);
    if (lowest <= 0.0)
      throw TurningPoint("1 - s f(z) reaches the branch cut inside the slab");
  }
  return {K, r, s, profile};
}

WkbContext make_wkb_context(const DimensionlessState& state, const GainProfile& profile) {
  return make_wkb_context(state.K, state.r, state.s, profile);
}

QuadratureResult<cplx> phase_integral_detailed(const WkbContext& ctx,
                                               const QuadratureTolerance& tol) {
  if (ctx.profile.is_flat() || ctx.s == cplx(0.0)) {
    QuadratureResult<cplx> exact;
    exact.value = 1.0;
    exact.converged = true;
    return exact;
  }
  auto integrand = [&ctx](double z) {
    return std::sqrt(one_minus_sf(ctx, ctx.profile.at(z).f));
  };
  auto result = integrate_adaptive<cplx>(integrand, 0.0, 1.0, tol);
  if (!result.converged) {
    throw NumericalError("phase integral did not converge (error estimate " +
                             std::to_string(result.error) + ")",
                         result.error);
  }
  return result;
}

cplx phase_integral(const WkbContext& ctx, const QuadratureTolerance& tol) {
  return phase_integral_detailed(ctx, tol).value;
}

cplx wkb_p(const WkbContext& ctx, double z) {
  return std::sqrt(one_minus_sf(ctx, ctx.profile.at(z).f));
}

cplx wkb_q(const WkbContext& ctx, double z) {
  if (ctx.s == cplx(0.0)) return 0.0;
  const auto pv = ctx.profile.at(z);
  return kI * ctx.s * pv.df / (4.0 * one_minus_sf(ctx, pv.f));
}

cplx boundary_factor(const WkbContext& ctx) {
  const cplx p0 = wkb_p(ctx, 0.0);
  const cplx p1 = wkb_p(ctx, 1.0);
  const cplx q0 = wkb_q(ctx, 0.0) / ctx.K;
  const cplx q1 = wkb_q(ctx, 1.0) / ctx.K;
  const cplx den0 = 1.0 - ctx.r * p0 - q0;
  const cplx den1 = 1.0 - ctx.r * p1 + q1;
  if (den0 == cplx(0.0) || den1 == cplx(0.0))
    throw SingularConfiguration("boundary factor denominator vanishes");
  return (1.0 + ctx.r * p0 - q0) / den0 * ((1.0 + ctx.r * p1 + q1) / den1);
}

RhoSigma rho_sigma(const WkbContext& ctx, cplx phase_integral_value) {
  const cplx denom = 2.0 * ctx.r * phase_integral_value;
  if (denom == cplx(0.0)) throw SingularConfiguration("r I vanishes");
  const cplx inv = 1.0 / denom;
  return {inv.real(), inv.imag()};
}

RhoSigma rho_sigma(const WkbContext& ctx) { return rho_sigma(ctx, phase_integral(ctx)); }

double validity_metric(const WkbContext& ctx, std::size_t intervals) {
  if (intervals == 0) throw InvalidInput("validity grid needs at least one interval");
  // With K^2 - v = K^2 r^2 (1 - s f) and v' = K^2 r^2 s f', the criterion is
  // |s (4 (1 - s f) f'' + 5 s f'^2) / (16 K^2 r^2 (1 - s f)^3)|.
  const cplx scale = 16.0 * ctx.K * ctx.K * ctx.r * ctx.r;
  double worst = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double z = static_cast<double>(i) / static_cast<double>(intervals);
    const auto pv = ctx.profile.at(z);
    const cplx w = one_minus_sf(ctx, pv.f);
    const cplx num = ctx.s * (4.0 * w * pv.d2f + 5.0 * ctx.s * pv.df * pv.df);
    worst = std::max(worst, std::abs(num / (scale * w * w * w)));
  }
  return worst;
}

cplx jost_residual(const WkbContext& ctx) {
  const cplx integral = phase_integral(ctx);
  return std::exp(2.0 * kI * ctx.r * ctx.K * integral) - boundary_factor(ctx);
}

WkbEndpoint wkb_phi1_at_one(const WkbContext& ctx) {
  const cplx integral = phase_integral(ctx);
  const double K = ctx.K;
  const cplx kr = K * ctx.r;

  const auto at0 = ctx.profile.at(0.0);
  const auto at1 = ctx.profile.at(1.0);
  const cplx w0 = one_minus_sf(ctx, at0.f);
  const cplx w1 = one_minus_sf(ctx, at1.f);
  const cplx root0 = kr * std::sqrt(w0);  // sqrt(K^2 - v(0))
  const cplx root1 = kr * std::sqrt(w1);

  const cplx R0sq = 1.0 / root0;
  const cplx R0 = std::sqrt(R0sq);
  const cplx R0pow6 = R0sq * R0sq * R0sq;
  const cplx dv0 = K * K * ctx.r * ctx.r * ctx.s * at0.df;
  const cplx A = (1.0 - K * R0sq + 0.25 * kI * R0pow6 * dv0) / (2.0 * R0);
  const cplx B = (1.0 + K * R0sq - 0.25 * kI * R0pow6 * dv0) / (2.0 * R0);

  const cplx R1 = std::sqrt(1.0 / root1);
  const cplx phase = kI * kr * integral;
  const cplx psi_plus = R1 * std::exp(phase);
  const cplx psi_minus = R1 * std::exp(-phase);
  const cplx log_deriv = 0.25 * ctx.s * at1.df / w1;  // R'/R at z = 1

  WkbEndpoint out;
  out.phi = A * psi_plus + B * psi_minus;
  out.dphi = A * (log_deriv + kI * root1) * psi_plus + B * (log_deriv - kI * root1) * psi_minus;
  return out;
}

}  // namespace specsing

#pragma once

#include <complex>
#include <cstddef>

#include "specsing/medium.hpp"
#include "specsing/quadrature.hpp"

namespace specsing {

// Semiclassical data at one (K, r, s). Construction via make_wkb_context
// guarantees K > 0, Re r > 0 and that 1 - s f(z) stays off the closed negative
// real axis on [0,1], so every square root below is the principal branch.
struct WkbContext {
  double K = 0.0;
  cplx r;
  cplx s;
  GainProfile profile = GainProfile::uniform();
};

WkbContext make_wkb_context(double K, cplx r, cplx s, const GainProfile& profile);
WkbContext make_wkb_context(const DimensionlessState& state, const GainProfile& profile);

// I = int_0^1 sqrt(1 - s f(z)) dz. Throws NumericalError when the adaptive
// rule misses the tolerance.
QuadratureResult<cplx> phase_integral_detailed(const WkbContext& ctx,
                                               const QuadratureTolerance& tol = {});
cplx phase_integral(const WkbContext& ctx, const QuadratureTolerance& tol = {});

// p_z = sqrt(1 - s f(z)), q_z = i s f'(z) / (4 [1 - s f(z)]).
cplx wkb_p(const WkbContext& ctx, double z);
cplx wkb_q(const WkbContext& ctx, double z);

// Boundary factor
//   E = [(1 + r p0 - q0/K)/(1 - r p0 - q0/K)] [(1 + r p1 + q1/K)/(1 - r p1 + q1/K)].
// Throws SingularConfiguration when a denominator vanishes.
cplx boundary_factor(const WkbContext& ctx);

struct RhoSigma {
  double rho = 0.0;
  double sigma = 0.0;
};

// rho + i sigma = 1 / (2 r I).
RhoSigma rho_sigma(const WkbContext& ctx);
RhoSigma rho_sigma(const WkbContext& ctx, cplx phase_integral_value);

// max over z of |(4[K^2 - v] v'' + 5 v'^2) / (16 [K^2 - v]^3)| on a uniform
// grid of `intervals` + 1 points.
double validity_metric(const WkbContext& ctx, std::size_t intervals = 10000);

// D = exp(2 i r K I) - E; zero exactly at a semiclassical spectral singularity.
cplx jost_residual(const WkbContext& ctx);

// Semiclassical Phi_1 = A Psi_+ + B Psi_- matched to Phi_1(0) = 1,
// Phi_1'(0) = -i K, evaluated at z = 1.
struct WkbEndpoint {
  cplx phi;
  cplx dphi;
};
WkbEndpoint wkb_phi1_at_one(const WkbContext& ctx);

}  // namespace specsing

#include "specsing/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "specsing/errors.hpp"

namespace specsing {

namespace {

constexpr cplx kI(0.0, 1.0);

// Rescaled unknowns (Phi, Phi'/K) keep both components O(1):
//   y0' = K y1,  y1' = (v(z) - K^2) / K * y0.
struct SlabRhs {
  double K;
  cplx z1;
  cplx z2;
  GainProfile profile;

  cplx coupling(double z) const {
    const double f = profile.is_flat() ? 0.0 : profile.at(std::clamp(z, 0.0, 1.0)).f;
    return (z1 + z2 * f - K * K) / K;
  }
};

}  // namespace

OdeSolution integrate_slab(const DimensionlessState& state, const GainProfile& profile,
                           cplx phi0, cplx dphi0, const OdeOptions& options) {
  const SlabRhs slab{state.K, state.z1, state.z2, profile};
  auto rhs = [&slab](double z, const ComplexState<2>& y) {
    return ComplexState<2>{slab.K * y[1], slab.coupling(z) * y[0]};
  };
  const auto traj = integrate_dopri5<2>(rhs, 0.0, 1.0, {phi0, dphi0 / state.K}, options, {},
                                        [](double, const ComplexState<2>&) {});
  return {traj.y[0], traj.y[1] * state.K, traj.est_error, traj.accepted};
}

OdeSolution integrate_phi1(const GainMedium& medium, double omega_hat, double g_star_per_cm,
                           const OdeOptions& options) {
  const auto state = dimensionless_state(medium, omega_hat, g_star_per_cm / medium.alpha0_per_cm);
  return integrate_slab(state, GainProfile::for_medium(medium), 1.0, -kI * state.K, options);
}

cplx ode_jost(const OdeSolution& solution, double K) {
  return kI * K * solution.phi1_at_1 - solution.dphi1_at_1;
}

cplx ode_jost(const GainMedium& medium, double omega_hat, double g_star_per_cm,
              const OdeOptions& options) {
  const auto sol = integrate_phi1(medium, omega_hat, g_star_per_cm, options);
  return ode_jost(sol, omega_hat * resonance_wavenumber(medium));
}

double WronskianTrace::max_relative_drift() const {
  double worst = 0.0;
  for (const auto& w : W) worst = std::max(worst, std::abs(std::abs(w) / K - 1.0));
  return worst;
}

WronskianTrace wronskian_trace(const GainMedium& medium, double omega_hat, double g_star_per_cm,
                               int checkpoints, const OdeOptions& options) {
  if (checkpoints < 1) throw InvalidInput("need at least one Wronskian checkpoint");
  const auto state = dimensionless_state(medium, omega_hat, g_star_per_cm / medium.alpha0_per_cm);
  const SlabRhs slab{state.K, state.z1, state.z2, GainProfile::for_medium(medium)};
  auto rhs = [&slab](double z, const ComplexState<4>& y) {
    const cplx c = slab.coupling(z);
    return ComplexState<4>{slab.K * y[1], c * y[0], slab.K * y[3], c * y[2]};
  };

  WronskianTrace trace;
  trace.K = state.K;
  std::vector<double> grid;
  for (int i = 1; i <= checkpoints; ++i) grid.push_back(static_cast<double>(i) / checkpoints);
  const ComplexState<4> y0{1.0, -kI, 1.0, 0.0};
  const auto traj = integrate_dopri5<4>(rhs, 0.0, 1.0, y0, options, grid,
                                        [&](double z, const ComplexState<4>& y) {
                                          trace.z.push_back(z);
                                          trace.W.push_back(state.K *
                                                            (y[0] * y[3] - y[1] * y[2]));
                                        });
  trace.est_error = traj.est_error;
  return trace;
}

cplx exact_uniform_condition(cplx n, double K) {
  if (n == cplx(1.0)) throw SingularConfiguration("refractive index 1 has no barrier");
  const cplx ratio = (n + 1.0) / (n - 1.0);
  return std::exp(2.0 * kI * K * n) - ratio * ratio;
}

}  // namespace specsing

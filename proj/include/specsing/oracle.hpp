#pragma once

#include <complex>
#include <vector>

#include "specsing/medium.hpp"
#include "specsing/ode.hpp"

namespace specsing {

// Endpoint data of the solution with Phi(0), Phi'(0) prescribed.
struct OdeSolution {
  cplx phi1_at_1;
  cplx dphi1_at_1;
  // Accumulated local error estimate, relative to max(|Phi(0)|, |Phi'(0)|/K).
  double est_error = 0.0;
  long steps = 0;
};

// Integrates -psi'' + v psi = K^2 psi, v = z1 + z2 f, across the slab.
OdeSolution integrate_slab(const DimensionlessState& state, const GainProfile& profile,
                           cplx phi0, cplx dphi0, const OdeOptions& options = {});

// Phi_1 with Phi_1(0) = 1, Phi_1'(0) = -i K.
OdeSolution integrate_phi1(const GainMedium& medium, double omega_hat, double g_star_per_cm,
                           const OdeOptions& options = {});

// F(K) = i K Phi_1(1) - Phi_1'(1); vanishes at a spectral singularity.
cplx ode_jost(const GainMedium& medium, double omega_hat, double g_star_per_cm,
              const OdeOptions& options = {});
cplx ode_jost(const OdeSolution& solution, double K);

// Wronskian W = Phi_1 Phi_2' - Phi_1' Phi_2 (Phi_2(0) = 1, Phi_2'(0) = 0)
// sampled at evenly spaced checkpoints in (0, 1]. With these initial values
// W = +i K; the certificate is |W| = K.
struct WronskianTrace {
  std::vector<double> z;
  std::vector<cplx> W;
  double K = 0.0;
  double est_error = 0.0;
  // max over checkpoints of | |W|/K - 1 |.
  double max_relative_drift() const;
};
WronskianTrace wronskian_trace(const GainMedium& medium, double omega_hat, double g_star_per_cm,
                               int checkpoints = 32, const OdeOptions& options = {});

// e^{2 i K n} - ((n + 1)/(n - 1))^2; zero at a uniform-slab singularity.
// Throws SingularConfiguration for n = 1.
cplx exact_uniform_condition(cplx n, double K);

}  // namespace specsing

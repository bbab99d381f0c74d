#include <cmath>

#include "doctest.h"
#include "specsing/errors.hpp"
#include "specsing/oracle.hpp"
#include "specsing/solver.hpp"
#include "specsing/wkb.hpp"
#include "table1_reference.hpp"

using namespace specsing;

namespace {

constexpr cplx kI(0.0, 1.0);
const GainMedium kSample = GainMedium::semiconductor_sample();

DimensionlessState constant_index(double K, cplx n) {
  DimensionlessState st;
  st.K = K;
  st.z1 = K * K * (1.0 - n * n);
  st.z2 = 0.0;
  return st;
}

// Complex n with exp(2 i K n) = ((n + 1)/(n - 1))^2 on branch m, by
// fixed-point iteration (the map contracts like 1/K).
cplx uniform_root_index(double K, long m, cplx start) {
  cplx n = start;
  for (int i = 0; i < 200; ++i) n = (std::log((n + 1.0) / (n - 1.0)) + kI * M_PI * double(m)) / (kI * K);
  return n;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

// With a local tolerance of 1e-12 the global error grows like the number of
// wavelengths in the slab (~8e-13 K relative here), so the 1e-10 closed-form
// checks use K <= 100; at the sample's K ~ 1257 the true error is checked
// against the integrator's own estimate instead.
TEST_CASE("empty slab propagates a free wave") {
  for (double K : {1.0, 50.0, 100.0}) {
    const auto sol = integrate_slab(constant_index(K, 1.0), GainProfile::uniform(), 1.0, -kI * K);
    const cplx free = std::exp(-kI * K);
    CHECK(rel(sol.phi1_at_1, free) < 1e-10);
    CHECK(rel(sol.dphi1_at_1, -kI * K * free) < 1e-10);
    CHECK(rel(ode_jost(sol, K), 2.0 * kI * K * free) < 1e-10);
    CHECK(sol.est_error > 0.0);
  }
  const double K = 1256.6;
  const auto sol = integrate_slab(constant_index(K, 1.0), GainProfile::uniform(), 1.0, -kI * K);
  CHECK(std::abs(sol.phi1_at_1 - std::exp(-kI * K)) < sol.est_error);
}

TEST_CASE("uniform slab matches the constant-coefficient solution") {
  for (const cplx n : {cplx(3.4, 0.0), cplx(3.4, -2.5e-3), cplx(1.5, 0.01)}) {
    for (double K : {10.0, 100.0, 1256.6}) {
      CAPTURE(K);
      const cplx k = K * n;
      const auto sol = integrate_slab(constant_index(K, n), GainProfile::uniform(), 1.0, -kI * K);
      const cplx phi = std::cos(k) - kI * (K / k) * std::sin(k);
      const cplx dphi = -k * std::sin(k) - kI * K * std::cos(k);
      const double tol = K <= 100.0 ? 1e-10 : sol.est_error;
      CHECK(rel(sol.phi1_at_1, phi) < tol);
      CHECK(rel(sol.dphi1_at_1, dphi) < tol);
    }
  }
}

TEST_CASE("endpoint values are linear in the initial data") {
  const cplx c(2.5, -1.5);
  SUBCASE("short slab, to rounding") {
    const auto st = constant_index(50.0, cplx(3.4, -2.5e-3));
    const auto base = integrate_slab(st, GainProfile::uniform(), 1.0, -kI * st.K);
    const auto scaled = integrate_slab(st, GainProfile::uniform(), c, -kI * st.K * c);
    CHECK(rel(scaled.phi1_at_1, c * base.phi1_at_1) < 1e-12);
    CHECK(rel(scaled.dphi1_at_1, c * base.dphi1_at_1) < 1e-12);
  }
  SUBCASE("sample slab, within the error estimate") {
    const auto med = kSample.with_nu(0.4);
    const auto st = dimensionless_state(med, 1.0);
    const auto prof = GainProfile::for_medium(med);
    const auto base = integrate_slab(st, prof, 1.0, -kI * st.K);
    const auto scaled = integrate_slab(st, prof, c, -kI * st.K * c);
    CHECK(rel(scaled.phi1_at_1, c * base.phi1_at_1) < base.est_error);
    CHECK(rel(scaled.dphi1_at_1, c * base.dphi1_at_1) < base.est_error);
    CHECK(scaled.steps == base.steps);
  }
}

TEST_CASE("uniform-slab singularity is a zero of the ODE Jost function") {
  const double K = 1000.0;
  const cplx n = uniform_root_index(K, 1082, cplx(3.4, -1e-3));
  CHECK(std::abs(exact_uniform_condition(n, K)) < 1e-10);
  CHECK(n.imag() < 0.0);  // a zero needs gain
  const auto sol = integrate_slab(constant_index(K, n), GainProfile::uniform(), 1.0, -kI * K);
  CHECK(std::abs(ode_jost(sol, K)) < 1e-8 * K);
  // The semiclassical residual is exact for a constant barrier.
  const auto ctx = make_wkb_context(K, n, cplx(0.0), GainProfile::uniform());
  CHECK(std::abs(jost_residual(ctx)) < 1e-10);
}

TEST_CASE("uniform pumping: solver root, WKB and ODE coincide") {
  const auto med = kSample.with_pump(Pump::Uniform);
  const auto root = solve_mode(med, 1360);
  const auto st = dimensionless_state(med, root.omega_hat, root.g_star_per_cm / med.alpha0_per_cm);
  CHECK(std::abs(exact_uniform_condition(st.r, st.K)) < 1e-9);
  const auto sol = integrate_phi1(med, root.omega_hat, root.g_star_per_cm);
  CHECK(std::abs(ode_jost(sol, root.K)) / (root.K * std::abs(sol.phi1_at_1)) < 1e-8);
  // Same root as the double pump at nu = 0.
  const auto dbl = solve_mode(kSample, 1360);
  CHECK(root.omega_hat == doctest::Approx(dbl.omega_hat).epsilon(1e-14));
  CHECK(root.g_star_per_cm == doctest::Approx(dbl.g_star_per_cm).epsilon(1e-12));
}

TEST_CASE("exact uniform condition edge cases") {
  // Real index above one: |e^{2iKn}| = 1 < ratio^2.
  const double ratio2 = std::pow(4.4 / 2.4, 2.0);
  for (double K : {1.0, 10.0, 1256.0})
    CHECK(std::abs(exact_uniform_condition(cplx(3.4), K)) >= ratio2 - 1.0 - 1e-12);
  CHECK(std::abs(exact_uniform_condition(cplx(3.4), 0.0) - (1.0 - ratio2)) < 1e-14);
  CHECK_THROWS_AS(exact_uniform_condition(cplx(1.0), 5.0), SingularConfiguration);
}

TEST_CASE("Wronskian is conserved") {
  for (double nu : {0.0, 0.1, 0.5}) {
    const auto med = kSample.with_nu(nu);
    const auto root = solve_mode(med, 1360);
    const auto trace = wronskian_trace(med, root.omega_hat, root.g_star_per_cm);
    REQUIRE(trace.W.size() == 32);
    CHECK(trace.z.back() == 1.0);
    CHECK(trace.max_relative_drift() <= 10.0 * trace.est_error);
    // Sign convention of these initial values: W = +i K.
    CHECK(std::abs(trace.W.back() / trace.K - kI) < 1e-6);
  }
  CHECK_THROWS_AS(wronskian_trace(kSample, 1.0, 50.0, 0), InvalidInput);
}

TEST_CASE("tightening the integrator tolerance stays within the error estimate") {
  const auto med = kSample.with_nu(0.3);
  OdeOptions coarse;
  coarse.abs_tol = coarse.rel_tol = 1e-10;
  OdeOptions fine = coarse;
  fine.abs_tol = fine.rel_tol = 5e-11;
  const auto a = integrate_phi1(med, 1.0, 60.0, coarse);
  const auto b = integrate_phi1(med, 1.0, 60.0, fine);
  CHECK(std::abs(a.phi1_at_1 - b.phi1_at_1) < a.est_error);
  CHECK(b.est_error < a.est_error);
}

TEST_CASE("semiclassical and ODE endpoint values agree") {
  const auto med = kSample.with_nu(0.1);
  const auto root = solve_mode(med, 1360);
  const double g_hat = root.g_star_per_cm / med.alpha0_per_cm;
  const auto st = dimensionless_state(med, root.omega_hat, g_hat);
  const auto wkb = wkb_phi1_at_one(make_wkb_context(st, GainProfile::for_medium(med)));
  const auto ode = integrate_phi1(med, root.omega_hat, root.g_star_per_cm);
  CHECK(rel(wkb.phi, ode.phi1_at_1) < 1e-6);
  CHECK(rel(wkb.dphi, ode.dphi1_at_1) < 1e-6);
  // Off the root too.
  const auto off = integrate_phi1(med, 1.01, 120.0);
  const auto st2 = dimensionless_state(med, 1.01, 0.6);
  const auto wkb2 = wkb_phi1_at_one(make_wkb_context(st2, GainProfile::for_medium(med)));
  CHECK(rel(wkb2.phi, off.phi1_at_1) < 1e-6);
}

TEST_CASE("ODE Jost residual certifies solver roots") {
  for (const auto& cell : table1::kCells) {
    if (cell.nu != 0.0 && cell.nu != 0.5) continue;
    const auto med = kSample.with_nu(cell.nu);
    const auto root = solve_mode(med, cell.m);
    const auto sol = integrate_phi1(med, root.omega_hat, root.g_star_per_cm);
    CAPTURE(cell.m);
    CHECK(std::abs(ode_jost(sol, root.K)) / (root.K * std::abs(sol.phi1_at_1)) < 1e-5);
  }
  const auto single = kSample.with_pump(Pump::Single).with_nu(0.5);
  const auto root = solve_mode(single, 1355);
  const auto sol = integrate_phi1(single, root.omega_hat, root.g_star_per_cm);
  CHECK(std::abs(ode_jost(sol, root.K)) / (root.K * std::abs(sol.phi1_at_1)) < 1e-5);
}

TEST_CASE("integrator failure carries diagnostics") {
  OdeOptions tiny;
  tiny.max_steps = 100;
  try {
    integrate_phi1(kSample, 1.0, 50.0, tiny);
    FAIL("expected IntegratorFailure");
  } catch (const IntegratorFailure& e) {
    CHECK(e.z_reached > 0.0);
    CHECK(e.z_reached < 1.0);
    CHECK(e.last_step > 0.0);
  }
}

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "specsing/errors.hpp"
#include "specsing/perturbation.hpp"
#include "specsing/wkb.hpp"

using namespace specsing;

namespace {

constexpr cplx kI(0.0, 1.0);
const GainMedium kSample = GainMedium::semiconductor_sample();

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// Composite Simpson on a fine grid; independent of the adaptive rule.
cplx simpson_phase(const GainProfile& prof, cplx s, int n) {
  const double h = 1.0 / n;
  cplx sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::sqrt(1.0 - s * prof.at(i * h).f);
  }
  return sum * h / 3.0;
}

// Closed form of the boundary factor for double pumping (f(0) = f(1) = 0).
cplx double_pump_boundary(double K, cplx r, cplx s, double nu) {
  const cplx x = kI * nu * std::tanh(0.5 * nu) * s / (4.0 * K);
  const cplx b = (r + 1.0 + x) / (r - 1.0 - x);
  return b * b;
}

// Closed form for single pumping. The exit-face derivative carries e^-nu.
cplx single_pump_boundary(double K, cplx r, cplx s, double nu) {
  const double decay = std::exp(-nu);
  const cplx x = kI * nu * s / (4.0 * K);
  const cplx d = 1.0 + (1.0 - decay) * s;
  const cplx y = kI * nu * decay * s / (4.0 * K * d);
  const cplx rp = r * std::sqrt(d);
  return (r + 1.0 + x) / (r - 1.0 - x) * (rp + 1.0 - y) / (rp - 1.0 + y);
}

}  // namespace

TEST_CASE("flat profile reduces to closed forms") {
  for (cplx s : {cplx(0.0), cplx(1e-3, 2e-3), cplx(-5e-3, 0.0)}) {
    const cplx r(3.4, 1e-3);
    const auto ctx = make_wkb_context(900.0, r, s, GainProfile::uniform());
    CHECK(phase_integral(ctx) == cplx(1.0));
    const cplx ratio = (r + 1.0) / (r - 1.0);
    CHECK(rel(boundary_factor(ctx), ratio * ratio) < 1e-14);
    const auto rs = rho_sigma(ctx);
    const cplx expect = 1.0 / (2.0 * r);
    CHECK(std::abs(rs.rho - expect.real()) < 1e-14);
    CHECK(std::abs(rs.sigma - expect.imag()) < 1e-14);
    CHECK(validity_metric(ctx) == 0.0);
  }
}

TEST_CASE("vanishing s gives unit integral and real-index factors") {
  const auto ctx = make_wkb_context(1000.0, cplx(3.4), cplx(0.0), GainProfile::double_pump(0.8));
  CHECK(phase_integral(ctx) == cplx(1.0));
  CHECK(wkb_q(ctx, 0.3) == cplx(0.0));
  CHECK(rel(boundary_factor(ctx), std::pow((4.4 / 2.4), 2.0)) < 1e-14);
  const auto rs = rho_sigma(ctx);
  CHECK(rs.rho == doctest::Approx(1.0 / 6.8).epsilon(1e-15));
  CHECK(rs.sigma == 0.0);
  CHECK(validity_metric(ctx) == 0.0);
  // Off any root the semiclassical Jost residual is nonzero.
  CHECK(std::abs(jost_residual(ctx)) > 0.1);
}

TEST_CASE("phase integral against high-precision reference values") {
  // Reference values from 30-digit tanh-sinh quadrature.
  const auto sgl = make_wkb_context(1000.0, cplx(3.4), cplx(1e-3), GainProfile::single_pump(1.0));
  CHECK(std::abs(phase_integral(sgl) - cplx(1.000183918714422522849166)) < 1e-14);

  const auto dbl =
      make_wkb_context(1000.0, cplx(3.4), cplx(4e-4, 1.3e-3), GainProfile::double_pump(0.7));
  const cplx ref(1.000007785750587042091323, 0.00002530232439410601049637172);
  CHECK(std::abs(phase_integral(dbl) - ref) < 1e-14);
}

TEST_CASE("phase integral against fine Simpson rule") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> nud(0.0, 4.0);
  std::uniform_real_distribution<double> sd(-1e-2, 1e-2);
  for (int i = 0; i < 20; ++i) {
    const double nu = nud(rng);
    const cplx s(sd(rng), sd(rng));
    for (const auto& prof : {GainProfile::double_pump(nu), GainProfile::single_pump(nu)}) {
      const auto ctx = make_wkb_context(1000.0, cplx(3.4), s, prof);
      CHECK(std::abs(phase_integral(ctx) - simpson_phase(prof, s, 1'000'000)) < 1e-13);
    }
  }
}

TEST_CASE("double-pump phase integral is reflection symmetric") {
  // Integrate the mirrored integrand with the same adaptive rule.
  const auto prof = GainProfile::double_pump(2.3);
  const cplx s(3e-3, -2e-3);
  const auto ctx = make_wkb_context(1000.0, cplx(3.4), s, prof);
  const auto mirrored = integrate_adaptive<cplx>(
      [&](double z) { return std::sqrt(1.0 - s * prof.at(1.0 - z).f); }, 0.0, 1.0, {});
  CHECK(std::abs(phase_integral(ctx) - mirrored.value) < 1e-15);
  CHECK(std::abs(wkb_p(ctx, 0.2) - wkb_p(ctx, 0.8)) < 1e-15);
  CHECK(std::abs(wkb_q(ctx, 0.2) + wkb_q(ctx, 0.8)) < 1e-15);
}

TEST_CASE("refining the quadrature tolerance is monotone") {
  const auto ctx =
      make_wkb_context(1000.0, cplx(3.4), cplx(4e-3, 6e-3), GainProfile::single_pump(3.0));
  QuadratureTolerance tol{1e-6, 1e-6, 500};
  cplx prev = phase_integral(ctx, tol);
  for (int i = 0; i < 12; ++i) {
    const double prior = tol.abs;
    tol.abs *= 0.5;
    tol.rel *= 0.5;
    const cplx next = phase_integral(ctx, tol);
    CHECK(std::abs(next - prev) <= prior);
    prev = next;
  }
}

TEST_CASE("general boundary factor matches the pump-specific closed forms") {
  std::mt19937_64 rng(20240612);
  std::uniform_real_distribution<double> Kd(800.0, 1600.0);
  std::uniform_real_distribution<double> nud(0.0, 5.0);
  std::uniform_real_distribution<double> sd(-7e-3, 7e-3);
  for (int i = 0; i < 100; ++i) {
    const double K = Kd(rng);
    const double nu = nud(rng);
    const cplx s(sd(rng), sd(rng));
    const cplx r = 3.4 * std::sqrt(1.0 - 0.5 * s);
    const auto dbl = make_wkb_context(K, r, s, GainProfile::double_pump(nu));
    CHECK(rel(boundary_factor(dbl), double_pump_boundary(K, r, s, nu)) < 1e-12);
    const auto sgl = make_wkb_context(K, r, s, GainProfile::single_pump(nu));
    CHECK(rel(boundary_factor(sgl), single_pump_boundary(K, r, s, nu)) < 1e-12);
  }
}

TEST_CASE("first-order boundary factor and rho, sigma at resonance") {
  for (double nu : {0.0, 0.3, 1.0}) {
    const auto med = kSample.with_nu(nu).with_gain(60.0);
    const auto st = dimensionless_state(med, 1.0);
    const auto ctx = make_wkb_context(st, GainProfile::for_medium(med));
    const double t = std::abs(st.t_hat);
    // Neglected terms are O(t^2) and O(t/K).
    CHECK(rel(boundary_factor(ctx), resonance_boundary_factor(med)) < 10.0 * t * t);

    const double eta = coeffs(med).eta;
    const auto rs = rho_sigma(ctx);
    CHECK(std::abs(rs.rho - 1.0 / (2.0 * 3.4)) < t * t);
    const double sigma1 = med.lambda_alpha() * eta / (4.0 * std::numbers::pi * 3.4 * 3.4);
    CHECK(std::abs(rs.sigma - sigma1) < t * t);
  }
  const auto sgl = kSample.with_nu(0.7).with_gain(80.0).with_pump(Pump::Single);
  const auto st = dimensionless_state(sgl, 1.0);
  const auto ctx = make_wkb_context(st, GainProfile::for_medium(sgl));
  CHECK(rel(boundary_factor(ctx), resonance_boundary_factor(sgl)) <
        10.0 * std::norm(st.t_hat));
}

TEST_CASE("validity metric") {
  SUBCASE("dense-grid oracle, double pump nu = 0.5") {
    const auto med = kSample.with_nu(0.5);
    const auto st = dimensionless_state(med, 1.0);
    const auto prof = GainProfile::for_medium(med);
    const double K2 = st.K * st.K;
    double dense = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i <= n; ++i) {
      const auto pv = prof.at(static_cast<double>(i) / n);
      const cplx w = K2 - (st.z1 + st.z2 * pv.f);
      const cplx dv = st.z2 * pv.df;
      const cplx d2v = st.z2 * pv.d2f;
      dense = std::max(dense, std::abs((4.0 * w * d2v + 5.0 * dv * dv) / (16.0 * w * w * w)));
    }
    const double coarse = validity_metric(make_wkb_context(st, prof));
    CHECK(coarse > 0.0);
    CHECK(std::abs(coarse - dense) <= 0.01 * dense);
  }
  SUBCASE("sample medium, nu = 0.1, is far inside the semiclassical regime") {
    const auto med = kSample.with_nu(0.1);
    const auto ctx = make_wkb_context(dimensionless_state(med, 1.0), GainProfile::for_medium(med));
    const double v = validity_metric(ctx);
    CHECK(v > 0.0);
    CHECK(v < 1e-7);
  }
}

TEST_CASE("uniform slab semiclassical condition is the exact one") {
  const cplx n(3.4, -0.004);
  for (double K : {10.0, 500.0, 1256.0}) {
    const auto ctx = make_wkb_context(K, n, cplx(0.0), GainProfile::uniform());
    const cplx ratio = (n + 1.0) / (n - 1.0);
    const cplx exact = std::exp(2.0 * kI * K * n) - ratio * ratio;
    CHECK(std::abs(jost_residual(ctx) - exact) <= 1e-12 * (1.0 + std::abs(exact)));
  }
}

TEST_CASE("context validation") {
  const auto prof = GainProfile::single_pump(1.0);
  CHECK_THROWS_AS(make_wkb_context(0.0, cplx(3.4), cplx(0.0), prof), InvalidInput);
  CHECK_THROWS_AS(make_wkb_context(10.0, cplx(-3.4), cplx(0.0), prof), InvalidInput);
  CHECK_THROWS_AS(make_wkb_context(10.0, cplx(3.4, NAN), cplx(0.0), prof), InvalidInput);
  // f reaches e^-1 - 1, so s = -2 puts a turning point inside the slab.
  CHECK_THROWS_AS(make_wkb_context(10.0, cplx(3.4), cplx(-2.0), prof), TurningPoint);
  CHECK_NOTHROW(make_wkb_context(10.0, cplx(3.4), cplx(-1.0), prof));
  // r = 1 with s = 0 makes the entry denominator vanish.
  const auto ctx = make_wkb_context(10.0, cplx(1.0), cplx(0.0), GainProfile::uniform());
  CHECK_THROWS_AS(boundary_factor(ctx), SingularConfiguration);
}

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "specsing/errors.hpp"
#include "specsing/medium.hpp"

using namespace specsing;

namespace {
const GainMedium kSample = GainMedium::semiconductor_sample();
}

TEST_CASE("medium validation") {
  CHECK_NOTHROW(kSample.validate());
  GainMedium m = kSample;
  m.n0 = 1.0;
  CHECK_THROWS_AS(m.validate(), InvalidInput);
  CHECK_THROWS_AS(kSample.with_gain(201.0).validate(), InvalidInput);
  CHECK_THROWS_AS(kSample.with_nu(-0.1).validate(), InvalidInput);
  m = kSample;
  m.lambda0_nm = NAN;
  CHECK_THROWS_AS(m.validate(), InvalidInput);
  // Net loss is allowed on input.
  CHECK_NOTHROW(kSample.with_gain(-20.0).validate());
}

TEST_CASE("pump names") {
  CHECK(parse_pump("Double") == Pump::Double);
  CHECK(parse_pump("single") == Pump::Single);
  CHECK(to_string(Pump::Uniform) == "uniform");
  CHECK_THROWS_AS(parse_pump("triple"), InvalidInput);
}

TEST_CASE("physical gain at the pumped faces") {
  const double half = 0.5 * kSample.thickness_um;
  for (double nu : {0.0, 0.1, 1.0, 3.0}) {
    const auto dbl = kSample.with_nu(nu);
    CHECK(physical_gain(dbl, -half) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(physical_gain(dbl, half) == doctest::Approx(50.0).epsilon(1e-14));
    const auto sgl = dbl.with_pump(Pump::Single);
    CHECK(physical_gain(sgl, -half) == doctest::Approx(50.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(physical_gain(kSample, 151.0), DomainError);
}

TEST_CASE("physical gain uniform limit and maximum") {
  const double half = 0.5 * kSample.thickness_um;
  for (Pump p : {Pump::Single, Pump::Double}) {
    const auto flat = kSample.with_nu(0.0).with_pump(p);
    for (double z = -half; z <= half; z += 7.5) CHECK(physical_gain(flat, z) == doctest::Approx(50.0));
    for (double nu : {0.05, 0.7, 2.5}) {
      const auto med = kSample.with_nu(nu).with_pump(p);
      double worst = -INFINITY;
      for (int i = 0; i <= 1000; ++i) {
        const double z = -half + kSample.thickness_um * i / 1000.0;
        worst = std::max(worst, physical_gain(med, std::clamp(z, -half, half)));
      }
      CHECK(worst == doctest::Approx(50.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("physical gain matches the profile shape") {
  // g0 = (g + alpha0) (1 + f) - alpha0 for both pump geometries.
  for (Pump p : {Pump::Single, Pump::Double}) {
    const auto med = kSample.with_nu(0.8).with_pump(p);
    const auto profile = GainProfile::for_medium(med);
    for (double zb : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      const double z = med.thickness_um * (zb - 0.5);
      const double expected = 250.0 * (1.0 + profile_f(profile, zb).f) - 200.0;
      CHECK(physical_gain(med, z) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("profile closed forms") {
  const auto d = GainProfile::double_pump(1.3);
  CHECK(profile_f(d, 0.0).f == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(profile_f(d, 1.0).f) < 1e-15);
  CHECK(profile_f(d, 0.5).f == doctest::Approx(1.0 / std::cosh(0.65) - 1.0));
  CHECK(profile_f(d, 0.0).df == doctest::Approx(-profile_f(d, 1.0).df));

  const auto s = GainProfile::single_pump(1.0);
  CHECK(profile_f(s, 0.0).f == 0.0);
  CHECK(profile_f(s, 1.0).f == doctest::Approx(-0.6321206).epsilon(1e-7));
  CHECK(profile_f(s, 0.3).df == doctest::Approx(-std::exp(-0.3)));

  CHECK(profile_f(GainProfile::double_pump(0.0), 0.4).f == 0.0);
  CHECK(profile_f(GainProfile::uniform(), 0.4).df == 0.0);
  CHECK(std::abs(profile_f(GainProfile::double_pump(1e-7), 0.5).f) < 1e-14);

  CHECK_THROWS_AS(profile_f(s, -1e-9), DomainError);
  CHECK_THROWS_AS(profile_f(d, 1.0 + 1e-12), DomainError);
}

TEST_CASE("profile derivatives agree with finite differences") {
  for (const auto& prof : {GainProfile::double_pump(2.0), GainProfile::single_pump(1.5)}) {
    for (double z : {0.1, 0.37, 0.8}) {
      const double h = 1e-5;
      const auto a = prof.at(z + h);
      const auto b = prof.at(z - h);
      CHECK(prof.at(z).df == doctest::Approx((a.f - b.f) / (2 * h)).epsilon(1e-8));
      CHECK(prof.at(z).d2f == doctest::Approx((a.df - b.df) / (2 * h)).epsilon(1e-8));
    }
  }
}

TEST_CASE("double-pump profile is even about the midpoint") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> zdist(0.0, 1.0);
  std::uniform_real_distribution<double> nudist(0.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const auto prof = GainProfile::double_pump(nudist(rng));
    const double z = zdist(rng);
    CHECK(std::abs(prof.at(z).f - prof.at(1.0 - z).f) <= 8.0 * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("single-pump profile decreases") {
  const auto prof = GainProfile::single_pump(0.4);
  double prev = prof.at(0.0).f;
  for (int i = 1; i <= 100; ++i) {
    const double f = prof.at(i / 100.0).f;
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("dimensionless state at resonance") {
  const auto st = dimensionless_state(kSample, 1.0);
  CHECK(st.K == doctest::Approx(1256.637).epsilon(1e-6));
  CHECK(st.t_hat.real() == 0.0);
  CHECK(st.t_hat.imag() == doctest::Approx(0.03 / (2 * std::numbers::pi * 3.4)).epsilon(1e-14));
  CHECK(std::abs(st.s) < 1.8e-3);
  CHECK(std::abs(st.t_hat) < 1.8e-3);
  CHECK(std::abs(st.r - 3.4) < 6.0e-4);
  CHECK_FALSE(st.r_sign_flipped);
  CHECK(st.K == doctest::Approx(1.0 * resonance_wavenumber(kSample)));
}

TEST_CASE("dimensionless state round trip through z1, z2") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wdist(0.9, 1.1);
  std::uniform_real_distribution<double> gdist(-0.5, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double w = wdist(rng);
    const auto st = dimensionless_state(kSample, w, gdist(rng));
    const double K2 = st.K * st.K;
    const cplx r = std::sqrt(1.0 - st.z1 / K2);
    const cplx s = st.z2 / (K2 - st.z1);
    CHECK(std::abs(r - st.r) <= 1e-12 * std::abs(st.r));
    CHECK(std::abs(s - st.s) <= 1e-12 * std::abs(st.s));
    CHECK(st.r.real() > 0.0);
    CHECK(st.K == doctest::Approx(w * 2 * std::numbers::pi * 300e3 / 1500.0).epsilon(1e-15));
  }
}

TEST_CASE("dimensionless state rejects bad input") {
  CHECK_THROWS_AS(dimensionless_state(kSample, 0.0), InvalidInput);
  CHECK_THROWS_AS(dimensionless_state(kSample, NAN), InvalidInput);
  GainMedium m = kSample;
  m.gamma_hat = INFINITY;
  CHECK_THROWS_AS(dimensionless_state(m, 1.0), InvalidInput);
}

TEST_CASE("series limits of the nu ratios") {
  CHECK(tanh_half_over(0.0) == 0.5);
  CHECK(one_minus_exp_over(0.0) == 1.0);
  CHECK(tanh_half_over(1e-7) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tanh_half_over(2e-6) == doctest::Approx(std::tanh(1e-6) / 2e-6).epsilon(1e-14));
  CHECK(one_minus_exp_over(2e-6) == doctest::Approx(-std::expm1(-2e-6) / 2e-6).epsilon(1e-14));
}

#include "specsing/medium.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "specsing/errors.hpp"
#include "specsing/units.hpp"

namespace specsing {

namespace {

constexpr double kSeriesCutoff = 1e-6;

void require(bool ok, const char* message) {
  if (!ok) throw InvalidInput(message);
}

}  // namespace

std::string_view to_string(Pump pump) {
  switch (pump) {
    case Pump::Uniform:
      return "uniform";
    case Pump::Single:
      return "single";
    case Pump::Double:
      return "double";
  }
  return "unknown";
}

Pump parse_pump(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "uniform") return Pump::Uniform;
  if (lower == "single") return Pump::Single;
  if (lower == "double") return Pump::Double;
  throw InvalidInput("unknown pump variant '" + std::string(text) +
                     "' (expected uniform, single or double)");
}

void GainMedium::validate() const {
  require(std::isfinite(n0) && std::isfinite(lambda0_nm) && std::isfinite(gamma_hat) &&
              std::isfinite(alpha0_per_cm) && std::isfinite(thickness_um) &&
              std::isfinite(nu) && std::isfinite(g_star_per_cm),
          "medium parameters must be finite");
  require(n0 > 1.0, "n0 must exceed 1");
  require(lambda0_nm > 0.0, "lambda0 must be positive");
  require(gamma_hat > 0.0, "gamma_hat must be positive");
  require(alpha0_per_cm > 0.0, "alpha0 must be positive");
  require(thickness_um > 0.0, "L must be positive");
  require(nu >= 0.0, "nu must be non-negative");
  require(g_star_per_cm <= alpha0_per_cm, "g_star cannot exceed alpha0");
}

double GainMedium::thickness_nm() const { return units::um_to_nm(thickness_um); }

double GainMedium::lambda_alpha() const {
  return lambda0_nm * units::per_cm_to_per_nm(alpha0_per_cm);
}

double GainMedium::alpha_length() const {
  return thickness_nm() * units::per_cm_to_per_nm(alpha0_per_cm);
}

GainMedium GainMedium::with_gain(double g_star) const {
  GainMedium out = *this;
  out.g_star_per_cm = g_star;
  return out;
}

GainMedium GainMedium::with_nu(double decay) const {
  GainMedium out = *this;
  out.nu = decay;
  return out;
}

GainMedium GainMedium::with_pump(Pump p) const {
  GainMedium out = *this;
  out.pump = p;
  return out;
}

GainMedium GainMedium::semiconductor_sample() { return GainMedium{}; }

double tanh_half_over(double nu) {
  if (std::abs(nu) < kSeriesCutoff) return 0.5 - nu * nu / 24.0;
  return std::tanh(0.5 * nu) / nu;
}

double one_minus_exp_over(double nu) {
  if (std::abs(nu) < kSeriesCutoff) return 1.0 - 0.5 * nu + nu * nu / 6.0;
  return -std::expm1(-nu) / nu;
}

GainProfile GainProfile::single_pump(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidInput("nu must be finite and >= 0");
  return GainProfile(Kind::SinglePump, nu);
}

GainProfile GainProfile::double_pump(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidInput("nu must be finite and >= 0");
  return GainProfile(Kind::DoublePump, nu);
}

GainProfile GainProfile::for_medium(const GainMedium& medium) {
  switch (medium.pump) {
    case Pump::Uniform:
      return uniform();
    case Pump::Single:
      return single_pump(medium.nu);
    case Pump::Double:
      return double_pump(medium.nu);
  }
  return uniform();
}

ProfileValue GainProfile::at(double z) const {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("profile coordinate outside [0,1]");
  if (is_flat()) return {};
  const double nu = nu_;
  if (kind_ == Kind::DoublePump) {
    const double c = std::cosh(0.5 * nu);
    const double x = nu * (z - 0.5);
    return {std::cosh(x) / c - 1.0, nu * std::sinh(x) / c, nu * nu * std::cosh(x) / c};
  }
  const double e = std::exp(-nu * z);
  return {std::expm1(-nu * z), -nu * e, nu * nu * e};
}

std::pair<double, double> GainProfile::range() const {
  if (is_flat()) return {0.0, 0.0};
  if (kind_ == Kind::DoublePump) return {1.0 / std::cosh(0.5 * nu_) - 1.0, 0.0};
  return {std::expm1(-nu_), 0.0};
}

ProfileValue profile_f(const GainProfile& profile, double z) { return profile.at(z); }

double physical_gain(const GainMedium& medium, double z_um) {
  const double half = 0.5 * medium.thickness_um;
  if (!(std::abs(z_um) <= half)) throw DomainError("z outside [-L/2, L/2]");
  const double g = medium.g_star_per_cm;
  const double a = medium.alpha0_per_cm;
  const double inv_ell = medium.nu / medium.thickness_um;
  switch (medium.pump) {
    case Pump::Uniform:
      return g;
    case Pump::Single:
      return (g + a) * std::exp(-half * inv_ell) * std::exp(-z_um * inv_ell) - a;
    case Pump::Double:
      return (g + a) / std::cosh(half * inv_ell) * std::cosh(z_um * inv_ell) - a;
  }
  return g;
}

double resonance_wavenumber(const GainMedium& medium) {
  return 2.0 * std::numbers::pi * medium.thickness_nm() / medium.lambda0_nm;
}

double wavelength_nm(const GainMedium& medium, double omega_hat) {
  return medium.lambda0_nm / omega_hat;
}

DimensionlessState dimensionless_state(const GainMedium& medium, double omega_hat) {
  return dimensionless_state(medium, omega_hat, medium.g_hat());
}

DimensionlessState dimensionless_state(const GainMedium& medium, double omega_hat,
                                       double g_hat) {
  if (!std::isfinite(omega_hat) || !std::isfinite(g_hat) || !std::isfinite(medium.n0) ||
      !std::isfinite(medium.lambda0_nm) || !std::isfinite(medium.gamma_hat) ||
      !std::isfinite(medium.alpha0_per_cm) || !std::isfinite(medium.thickness_um)) {
    throw InvalidInput("non-finite parameter in dimensionless_state");
  }
  if (!(omega_hat > 0.0)) throw InvalidInput("omega_hat must be positive");

  const double n0 = medium.n0;
  const double n0sq = n0 * n0;
  DimensionlessState st;
  st.omega_hat = omega_hat;
  st.K = omega_hat * resonance_wavenumber(medium);

  const double gw = medium.gamma_hat * omega_hat;
  const cplx detuning(1.0 - omega_hat * omega_hat, -gw);
  st.t_hat = medium.gamma_hat * medium.lambda_alpha() /
             (2.0 * std::numbers::pi * n0 * detuning);

  const cplx one_minus = 1.0 - g_hat * st.t_hat;
  st.r = n0 * std::sqrt(one_minus);
  if (st.r.real() <= 0.0) {
    st.r = -st.r;
    st.r_sign_flipped = true;
  }
  st.s = (1.0 + g_hat) * st.t_hat / one_minus;

  const double K2 = st.K * st.K;
  st.z1 = K2 * (n0sq * (g_hat * st.t_hat - 1.0) + 1.0);
  st.z2 = n0sq * K2 * (g_hat + 1.0) * st.t_hat;
  return st;
}

}  // namespace specsing

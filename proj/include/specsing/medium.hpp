#pragma once

#include <complex>
#include <string_view>
#include <utility>

namespace specsing {

using cplx = std::complex<double>;

enum class Pump { Uniform, Single, Double };

std::string_view to_string(Pump pump);
// Accepts "uniform", "single", "double" (case-insensitive); throws InvalidInput.
Pump parse_pump(std::string_view text);

// Planar slab doped with a two-level gain medium. Fields are in the
// presentation units named by their suffixes.
struct GainMedium {
  double n0 = 3.4;               // host refractive index
  double lambda0_nm = 1500.0;    // resonance wavelength
  double gamma_hat = 0.02;       // damping ratio gamma / omega_0
  double alpha0_per_cm = 200.0;  // absorption coefficient at resonance
  double thickness_um = 300.0;   // slab thickness L
  double nu = 0.0;               // decay constant L / ell
  double g_star_per_cm = 50.0;   // gain at the pumped face(s)
  Pump pump = Pump::Double;

  // Throws InvalidInput when any structural invariant is violated, including
  // the population-inversion ceiling g_star <= alpha0.
  void validate() const;

  double g_hat() const { return g_star_per_cm / alpha0_per_cm; }
  double thickness_nm() const;
  // lambda0 * alpha0, dimensionless.
  double lambda_alpha() const;
  // alpha0 * L, dimensionless.
  double alpha_length() const;

  GainMedium with_gain(double g_star) const;
  GainMedium with_nu(double decay) const;
  GainMedium with_pump(Pump p) const;

  // The semiconductor slab used throughout the examples and tests:
  // n0 = 3.4, lambda0 = 1500 nm, gamma_hat = 0.02, alpha0 = 200 cm^-1,
  // L = 300 um, double pumping.
  static GainMedium semiconductor_sample();
};

struct ProfileValue {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

// Shape function f on [0,1] of the potential v(z) = z1 + z2 f(z).
class GainProfile {
 public:
  enum class Kind { Uniform, SinglePump, DoublePump };

  static GainProfile uniform() { return GainProfile(Kind::Uniform, 0.0); }
  static GainProfile single_pump(double nu);
  static GainProfile double_pump(double nu);
  static GainProfile for_medium(const GainMedium& medium);

  Kind kind() const { return kind_; }
  double nu() const { return nu_; }
  bool is_flat() const { return kind_ == Kind::Uniform || nu_ == 0.0; }

  // Throws DomainError for z outside [0,1].
  ProfileValue at(double z) const;
  // Closed-form min and max of f over [0,1].
  std::pair<double, double> range() const;

 private:
  GainProfile(Kind kind, double nu) : kind_(kind), nu_(nu) {}
  Kind kind_;
  double nu_;
};

// f(z) and f'(z) (plus f'') of the profile; throws DomainError outside [0,1].
ProfileValue profile_f(const GainProfile& profile, double z);

// Net gain coefficient g0(z) in cm^-1 at z in um, z in [-L/2, L/2].
double physical_gain(const GainMedium& medium, double z_um);

// Reduced parameters of the scattering problem at frequency omega_hat.
struct DimensionlessState {
  double omega_hat = 1.0;
  double K = 0.0;  // L k = 2 pi L omega_hat / lambda0
  cplx t_hat;
  cplx r;
  cplx s;
  cplx z1;
  cplx z2;
  // Set when the principal root gave Re r <= 0 and the sign was flipped.
  bool r_sign_flipped = false;
};

// Uses the medium's own g_star.
DimensionlessState dimensionless_state(const GainMedium& medium, double omega_hat);
// Evaluates at an explicit g_hat = g_star / alpha0 without the ceiling check;
// used by the solver, which explores g_hat > 1 while bracketing.
DimensionlessState dimensionless_state(const GainMedium& medium, double omega_hat,
                                       double g_hat);

// K0 = 2 pi L / lambda0.
double resonance_wavenumber(const GainMedium& medium);
double wavelength_nm(const GainMedium& medium, double omega_hat);

// tanh(nu/2)/nu and (1 - e^-nu)/nu with their nu -> 0 limits.
double tanh_half_over(double nu);
double one_minus_exp_over(double nu);

}  // namespace specsing

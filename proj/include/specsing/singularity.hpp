#pragma once

#include <string_view>

namespace specsing {

enum class Method { WkbNumeric, Perturb1, Perturb2 };

std::string_view to_string(Method method);

// One spectral singularity (zero-width resonance) of mode number m.
struct SpectralSingularity {
  long m = 0;
  double nu = 0.0;
  double omega_hat = 0.0;
  double K = 0.0;
  double lambda_nm = 0.0;
  double g_star_per_cm = 0.0;
  // max(|e1|, |e2|) of the coupled real system at (omega_hat, g_star).
  double residual = 0.0;
  Method method = Method::WkbNumeric;
  int iterations = 0;
};

}  // namespace specsing

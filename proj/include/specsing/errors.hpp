#pragma once

#include <stdexcept>
#include <string>

namespace specsing {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature or integration did not reach the requested tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved)
      : Error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

// A denominator of the boundary factor vanishes.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

// 1 - s f(z) reaches zero or the branch cut inside the slab.
class TurningPoint : public Error {
 public:
  using Error::Error;
};

class IntegratorFailure : public Error {
 public:
  IntegratorFailure(const std::string& what, double z_reached, double step)
      : Error(what), z_reached(z_reached), last_step(step) {}
  double z_reached;
  double last_step;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double last_residual)
      : Error(what), iterations(iterations), last_residual(last_residual) {}
  int iterations;
  double last_residual;
};

// The system has a root, but only with g_star > alpha0.
class GainExceedsLoss : public Error {
 public:
  GainExceedsLoss(const std::string& what, double omega_hat, double g_hat)
      : Error(what), omega_hat(omega_hat), g_hat(g_hat) {}
  double omega_hat;
  double g_hat;
};

// The system has a root, but with g_star <= 0 (no gain).
class NonPhysicalRoot : public Error {
 public:
  NonPhysicalRoot(const std::string& what, double omega_hat, double g_hat)
      : Error(what), omega_hat(omega_hat), g_hat(g_hat) {}
  double omega_hat;
  double g_hat;
};

class NoRootAtZero : public Error {
 public:
  using Error::Error;
};

}  // namespace specsing

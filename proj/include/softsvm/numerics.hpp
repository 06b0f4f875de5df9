#pragma once

#include <limits>

namespace softsvm::numerics {

/// Machine precision of the working real type.
struct MachineEps {
  static constexpr double eps = std::numeric_limits<double>::epsilon();
};

/// log(1 + e^x), branching on the sign of x and on +/-log(eps).
double log1pe(double x) noexcept;

/// Soft-plus with softness kappa: log(1 + e^{kappa x}) / kappa.
/// Throws std::domain_error if kappa <= 0.
double softplus(double kappa, double x);

/// log cosh(x); even, zero at the origin.
double log_cosh(double x) noexcept;

/// asinh(e^x) without overflow for large x.
double asinh_exp(double x) noexcept;

/// log|sinh(x)|. Throws std::domain_error at x == 0.
double log_sinh(double x);

/// Logistic function 1 / (1 + e^{-x}).
double expit(double x) noexcept;

/// Bernoulli variance expit(x) * expit(-x).
double bernoulli_var(double x) noexcept;

/// log(mu / (1 - mu)) for mu in (0, 1).
double logit(double mu) noexcept;

}  // namespace softsvm::numerics

#include "softsvm/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace softsvm::numerics {
namespace {

constexpr double kEps = MachineEps::eps;
// -log(eps) and -log(sqrt(eps)).
const double kLogEpsInv = -std::log(kEps);
const double kLogSqrtEpsInv = -std::log(std::sqrt(kEps));

}  // namespace

double log1pe(double x) noexcept {
  if (x > kLogEpsInv) return x;
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  if (x >= -kLogEpsInv) return std::log1p(std::exp(x));
  // log(1 + e^x) = e^x to working precision; underflows to 0 for x < -745.
  return std::exp(x);
}

double softplus(double kappa, double x) {
  if (!(kappa > 0.0)) throw std::domain_error("softplus: kappa must be positive");
  return log1pe(kappa * x) / kappa;
}

double log_cosh(double x) noexcept {
  const double ax = std::fabs(x);
  if (ax > kLogSqrtEpsInv) return ax - std::numbers::ln2;
  // cosh(x) - 1 = 2 sinh^2(x/2) keeps relative accuracy near the origin.
  if (ax < 1.0) {
    const double s = std::sinh(0.5 * ax);
    return std::log1p(2.0 * s * s);
  }
  return ax - std::numbers::ln2 + log1pe(-2.0 * ax);
}

double asinh_exp(double x) noexcept {
  const double ax = std::fabs(x);
  // gamma(x) = sqrt(1 + e^{-2|x|}); gm1 = gamma - 1 computed without cancellation.
  double gamma = 1.0;
  double gm1 = 0.0;
  // The gamma = 1 shortcut is only taken for large positive x; for x < 0 the
  // dropped e^{2x}/2 term would cost relative accuracy sqrt(eps)/2.
  if (ax <= kLogSqrtEpsInv || x < 0.0) {
    const double t = std::exp(-2.0 * ax);
    gamma = std::sqrt(1.0 + t);
    gm1 = t / (1.0 + gamma);
  }
  if (x > 0.0) return x + std::log1p(gamma);
  return std::log1p(std::exp(x) + gm1);
}

double log_sinh(double x) {
  if (x == 0.0) throw std::domain_error("log_sinh: undefined at 0");
  const double ax = std::fabs(x);
  return -std::numbers::ln2 + ax + std::log(-std::expm1(-2.0 * ax));
}

double expit(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double bernoulli_var(double x) noexcept { return expit(x) * expit(-x); }

double logit(double mu) noexcept { return std::log(mu) - std::log1p(-mu); }

}  // namespace softsvm::numerics

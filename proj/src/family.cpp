#include "softsvm/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "softsvm/numerics.hpp"

namespace softsvm {

using numerics::asinh_exp;
using numerics::bernoulli_var;
using numerics::expit;
using numerics::log1pe;

FamilyParams::FamilyParams(double kappa, double alpha) : kappa_(kappa), alpha_(alpha) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("FamilyParams: kappa must be positive and finite");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("FamilyParams: alpha must be non-negative and finite");
}

namespace family {
namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// h_alpha(mu) = log cosh(2 alpha) + log(|mu - 1/2| / sqrt(mu (1 - mu))).
double h_alpha(double alpha, double mu) {
  return numerics::log_cosh(2.0 * alpha) + std::log(std::fabs(mu - 0.5)) -
         0.5 * (std::log(mu) + std::log1p(-mu));
}

void check_open_unit(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) throw std::domain_error("mean must lie in (0, 1)");
}

}  // namespace

double clamp_mean(double mu) noexcept { return std::clamp(mu, kMuEps, 1.0 - kMuEps); }

double cumulant(const FamilyParams& p, double theta) {
  const double kt = p.kappa() * theta;
  const double a2 = 2.0 * p.alpha();
  return 0.5 * (log1pe(kt + a2) + log1pe(kt - a2)) / p.kappa();
}

double mean(const FamilyParams& p, double theta) {
  const double kt = p.kappa() * theta;
  const double a2 = 2.0 * p.alpha();
  // Centered form keeps mean(0) == 1/2 exactly; the plain sum is kept where the mean is small.
  if (kt >= -a2) return 0.5 + 0.5 * (expit(kt + a2) - expit(a2 - kt));
  return 0.5 * (expit(kt + a2) + expit(kt - a2));
}

double variance_at_theta(const FamilyParams& p, double theta) {
  const double kt = p.kappa() * theta;
  const double a2 = 2.0 * p.alpha();
  return 0.5 * p.kappa() * (bernoulli_var(kt + a2) + bernoulli_var(kt - a2));
}

double theta_from_eta(const FamilyParams& p, double eta) {
  const double ke = p.kappa() * eta;
  return (log1pe(ke + p.alpha()) - log1pe(p.alpha() - ke)) / p.kappa();
}

double f_prime(const FamilyParams& p, double eta) {
  const double ke = p.kappa() * eta;
  return expit(ke + p.alpha()) + expit(p.alpha() - ke);
}

double f_second(const FamilyParams& p, double eta) {
  const double ke = p.kappa() * eta;
  return p.kappa() * (bernoulli_var(ke + p.alpha()) - bernoulli_var(p.alpha() - ke));
}

double eta_from_theta(const FamilyParams& p, double theta) {
  if (theta == 0.0) return 0.0;
  const double big_h = -p.alpha() + numerics::log_sinh(0.5 * p.kappa() * std::fabs(theta));
  return 0.5 * theta + sign(theta) * asinh_exp(big_h) / p.kappa();
}

double u_alpha(double alpha, double mu) {
  check_open_unit(mu);
  mu = clamp_mean(mu);
  if (mu == 0.5) return 0.0;
  return 0.5 * numerics::logit(mu) + sign(mu - 0.5) * asinh_exp(h_alpha(alpha, mu));
}

double inverse_mean(const FamilyParams& p, double mu) { return u_alpha(p.alpha(), mu) / p.kappa(); }

double link(const FamilyParams& p, double mu) { return eta_from_theta(p, inverse_mean(p, mu)); }

double composite_mean(const FamilyParams& p, double eta) { return mean(p, theta_from_eta(p, eta)); }

double variance_of_mean(const FamilyParams& p, double mu) {
  return variance_at_theta(p, inverse_mean(p, mu));
}

double shape_r(double alpha, double mu) {
  const double u = u_alpha(alpha, mu);
  return 0.5 * (bernoulli_var(u + 2.0 * alpha) + bernoulli_var(u - 2.0 * alpha));
}

double log_likelihood(const FamilyParams& p, std::span<const double> thetas, std::span<const double> y) {
  if (thetas.size() != y.size()) throw std::invalid_argument("log_likelihood: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) acc += y[i] * thetas[i] - cumulant(p, thetas[i]);
  return acc;
}

double hinge_cumulant(double theta) noexcept {
  return 0.5 * (std::max(theta + 2.0, 0.0) + std::max(theta - 2.0, 0.0));
}

double delta_of_kappa(double kappa) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("delta_of_kappa: kappa must be >= 1");
  return 1.0 - 1.0 / kappa;
}

}  // namespace family
}  // namespace softsvm

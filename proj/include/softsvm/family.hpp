#pragma once

#include <span>

namespace softsvm {

/// Softness kappa and scaled separation alpha = kappa * delta of the
/// Soft-SVM exponential family. (kappa, alpha) = (1, 0) is the Bernoulli
/// (logistic) family; kappa -> inf with delta -> 1 approaches the SVM hinge.
class FamilyParams {
 public:
  /// Throws std::invalid_argument unless kappa > 0 and alpha >= 0.
  FamilyParams(double kappa, double alpha);

  static FamilyParams logistic() { return {1.0, 0.0}; }
  static FamilyParams from_delta(double kappa, double delta) { return {kappa, kappa * delta}; }

  double kappa() const noexcept { return kappa_; }
  double alpha() const noexcept { return alpha_; }
  double delta() const noexcept { return alpha_ / kappa_; }

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;

 private:
  double kappa_;
  double alpha_;
};

namespace family {

/// Means handed to the link are clamped into [kMuEps, 1 - kMuEps].
inline constexpr double kMuEps = 1e-12;

double clamp_mean(double mu) noexcept;

/// b(theta) = [p(theta + 2 delta) + p(theta - 2 delta)] / 2.
double cumulant(const FamilyParams& p, double theta);
/// b'(theta).
double mean(const FamilyParams& p, double theta);
/// b''(theta).
double variance_at_theta(const FamilyParams& p, double theta);

/// Canonical map f(eta) = p(eta + delta) - p(delta - eta).
double theta_from_eta(const FamilyParams& p, double eta);
double f_prime(const FamilyParams& p, double eta);
double f_second(const FamilyParams& p, double eta);
/// f^{-1}.
double eta_from_theta(const FamilyParams& p, double theta);

/// [b']^{-1}. Throws std::domain_error unless mu is in (0, 1).
double inverse_mean(const FamilyParams& p, double mu);

/// g = f^{-1} o [b']^{-1}.
double link(const FamilyParams& p, double mu);
/// b'(f(eta)), the inverse of link.
double composite_mean(const FamilyParams& p, double eta);

/// V(mu) = b''([b']^{-1}(mu)).
double variance_of_mean(const FamilyParams& p, double mu);

/// kappa * inverse_mean; depends on alpha only.
double u_alpha(double alpha, double mu);
/// Variance shape: V(mu) = kappa * shape_r(alpha, mu).
double shape_r(double alpha, double mu);

/// sum_i y_i theta_i - b(theta_i). Throws std::invalid_argument on length mismatch.
double log_likelihood(const FamilyParams& p, std::span<const double> thetas, std::span<const double> y);

/// SVM cumulant s(theta) = [(theta + 2)_+ + (theta - 2)_+] / 2.
double hinge_cumulant(double theta) noexcept;

/// delta(kappa) = 1 - 1/kappa, the coupling used for illustration curves.
double delta_of_kappa(double kappa);

}  // namespace family
}  // namespace softsvm

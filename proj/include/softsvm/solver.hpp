#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "softsvm/data.hpp"
#include "softsvm/family.hpp"

namespace softsvm {

enum class WeightMode { Observed, Expected };

/// Settings for penalized Soft-SVM regression.
struct FitConfig {
  double lambda = 0.0;          ///< ridge penalty on non-intercept coefficients
  double epsilon = 1e-8;        ///< relative change in objective that stops the cycle
  double nu = 0.05;             ///< label perturbation for the starting means
  int max_outer_iters = 100;
  int max_newton_iters = 25;    ///< per kappa / alpha step
  std::pair<double, double> kappa_bounds{1e-2, 1e4};
  std::pair<double, double> alpha_bounds{0.0, 50.0};
  std::optional<double> fix_kappa;
  std::optional<double> fix_alpha;
  WeightMode weight_mode = WeightMode::Observed;
  double fd_step = 1e-5;        ///< relative finite-difference step for kappa / alpha scores

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Result of a fit. Coefficients live on the standardized feature scale.
struct FittedModel {
  double beta0 = 0.0;
  Vector beta;
  double kappa_hat = 1.0;
  double alpha_hat = 0.0;
  double penalized_loglik = 0.0;
  int n_iters = 0;
  bool converged = false;
  Standardization standardization;
  double lambda = 0.0;
  /// Objective after initialization and after every accepted sub-step. Not serialized.
  std::vector<double> trace;

  FamilyParams params() const { return {kappa_hat, alpha_hat}; }
  /// (beta0, beta) stacked to match a design matrix.
  Vector coefficients() const;
  std::size_t num_features() const { return static_cast<std::size_t>(beta.size()); }
};

namespace solver {

struct StartingPoint {
  Vector beta;
  Vector eta;
  FamilyParams params;
};

/// Perturbed-label start: mu = (y + nu) / (1 + 2 nu), eta = link(mu), and
/// beta from ridge least squares of eta on X.
StartingPoint initialize(const Matrix& x, const Vector& y, const FitConfig& cfg);

/// sum_i y_i f(eta_i) - b(f(eta_i)) - lambda/2 |beta_{1..f}|^2 with eta = X beta.
double penalized_loglik(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                        double lambda);

struct BetaStep {
  Vector beta;
  bool ascended = false;  ///< a step was accepted
  bool singular = false;  ///< neither weighting produced a solvable system
};

/// One Newton/IRLS update with step halving; never lowers the objective.
BetaStep beta_step(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                   double lambda, WeightMode mode = WeightMode::Observed);

/// Safeguarded finite-difference Newton update of kappa with beta, alpha held.
double kappa_step(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                  double lambda, const FitConfig& cfg);
/// Same for alpha with beta, kappa held.
double alpha_step(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                  double lambda, const FitConfig& cfg);

/// Cyclic kappa / alpha / beta ascent on a design matrix (first column ones).
/// Non-convergence is reported in the model.
FittedModel fit(const Matrix& x, const Vector& y, const FitConfig& cfg);

/// Optionally standardizes, builds the design matrix and fits.
FittedModel fit_dataset(const Dataset& d, const FitConfig& cfg, bool standardize = true);

/// Solves a symmetric positive definite system by Cholesky, adding a 1e-10
/// diagonal jitter if the plain factorization fails. Throws SingularSystem.
Vector solve_penalized_system(const Matrix& a, const Vector& b);

}  // namespace solver
}  // namespace softsvm

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "softsvm/solver.hpp"

namespace softsvm {

/// Factorial simulation study over imbalance rho and spread sigma. Soft-SVM
/// picks lambda by cross-validation; the logistic special case is fitted
/// unregularized. MCC is measured on an independent draw of the same spec.
struct FactorialConfig {
  std::vector<double> rhos{0.125, 0.25, 0.5};
  std::vector<double> sigmas{0.5, 1.0, 1.5};
  std::size_t n = 100;
  std::size_t reps = 50;
  std::uint64_t base_seed = 0;
  std::vector<double> lambda_grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  std::size_t cv_folds = 10;
  std::size_t cv_reps = 1;
  bool standardize = true;
  FitConfig soft;
  FitConfig logistic = logistic_config();
  unsigned threads = 0;

  static FitConfig logistic_config() {
    FitConfig c;
    c.fix_kappa = 1.0;
    c.fix_alpha = 0.0;
    c.lambda = 0.0;
    return c;
  }
};

struct FactorialRow {
  double rho;
  double sigma;
  std::size_t rep;
  std::string method;  ///< "softsvm" or "logistic"
  double mcc;          ///< NaN when the cell failed
  bool converged;
  double coef_norm;    ///< |beta|_2 without intercept, fit-time scale
  bool failed;
};

namespace data {

/// Rows ordered by rho, sigma, replication, method.
std::vector<FactorialRow> run_factorial(const FactorialConfig& cfg);

/// rho,sigma,rep,method,mcc,converged,coef_norm
std::string factorial_to_csv(const std::vector<FactorialRow>& rows);

}  // namespace data
}  // namespace softsvm

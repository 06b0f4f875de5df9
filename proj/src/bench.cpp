#include "softsvm/bench.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "softsvm/evaluation.hpp"
#include "softsvm/io.hpp"

namespace softsvm::data {
namespace {

struct MethodResult {
  double mcc = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  double coef_norm = std::numeric_limits<double>::quiet_NaN();
  bool failed = true;
};

MethodResult score(const FittedModel& m, const Dataset& test) {
  return {evaluation::evaluate(m, test.features, test.labels).mcc, m.converged, m.beta.norm(), false};
}

}  // namespace

std::vector<FactorialRow> run_factorial(const FactorialConfig& cfg) {
  if (cfg.rhos.empty() || cfg.sigmas.empty()) throw std::invalid_argument("run_factorial: empty rho or sigma grid");
  if (cfg.reps == 0) throw std::invalid_argument("run_factorial: reps must be >= 1");
  if (cfg.lambda_grid.empty()) throw std::invalid_argument("run_factorial: empty lambda grid");
  for (const double rho : cfg.rhos)
    for (const double sigma : cfg.sigmas) SimSpec{cfg.n, rho, sigma, 0}.validate();
  cfg.soft.validate();
  cfg.logistic.validate();

  const std::size_t cells = cfg.rhos.size() * cfg.sigmas.size() * cfg.reps;
  std::vector<FactorialRow> rows(2 * cells);

  evaluation::parallel_for(cells, cfg.threads, [&](std::size_t cell) {
    const std::size_t rep = cell % cfg.reps;
    const std::size_t js = (cell / cfg.reps) % cfg.sigmas.size();
    const std::size_t jr = cell / (cfg.reps * cfg.sigmas.size());
    const double rho = cfg.rhos[jr];
    const double sigma = cfg.sigmas[js];
    // Seeds fixed by grid position so scheduling cannot change results.
    const std::uint64_t seed = mix_seed(mix_seed(mix_seed(cfg.base_seed, jr), js), rep);
    const Dataset train = simulate_mixture({cfg.n, rho, sigma, seed});
    const Dataset test = simulate_mixture({cfg.n, rho, sigma, mix_seed(seed, 1)});

    MethodResult soft;
    try {
      CvOptions cv;
      cv.folds = cfg.cv_folds;
      cv.reps = cfg.cv_reps;
      cv.seed = seed;
      cv.standardize = cfg.standardize;
      cv.threads = 1;
      const CvReport report = evaluation::cross_validate(train, cfg.soft, cfg.lambda_grid, cv);
      FitConfig c = cfg.soft;
      c.lambda = report.selected_lambda;
      soft = score(solver::fit_dataset(train, c, cfg.standardize), test);
    } catch (const std::exception&) {
      soft = MethodResult{};
    }

    MethodResult logistic;
    try {
      logistic = score(solver::fit_dataset(train, cfg.logistic, cfg.standardize), test);
    } catch (const std::exception&) {
      logistic = MethodResult{};
    }

    rows[2 * cell] = {rho, sigma, rep, "softsvm", soft.mcc, soft.converged, soft.coef_norm, soft.failed};
    rows[2 * cell + 1] = {rho, sigma, rep, "logistic", logistic.mcc, logistic.converged, logistic.coef_norm,
                          logistic.failed};
  });
  return rows;
}

std::string factorial_to_csv(const std::vector<FactorialRow>& rows) {
  std::string out = "rho,sigma,rep,method,mcc,converged,coef_norm\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{}\n", io::format_real(r.rho), io::format_real(r.sigma), r.rep, r.method,
                       io::format_real(r.mcc), r.converged ? "true" : "false", io::format_real(r.coef_norm));
  return out;
}

}  // namespace softsvm::data

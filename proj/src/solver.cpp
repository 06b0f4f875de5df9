#include "softsvm/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "softsvm/errors.hpp"

namespace softsvm {

void FitConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("nu must lie in (0, 1)");
  if (max_outer_iters < 1 || max_newton_iters < 1) throw std::invalid_argument("iteration caps must be >= 1");
  if (!(kappa_bounds.first > 0.0 && kappa_bounds.first <= kappa_bounds.second))
    throw std::invalid_argument("kappa bounds must satisfy 0 < lo <= hi");
  if (!(alpha_bounds.first >= 0.0 && alpha_bounds.first <= alpha_bounds.second))
    throw std::invalid_argument("alpha bounds must satisfy 0 <= lo <= hi");
  if (fix_kappa && !(*fix_kappa > 0.0)) throw std::invalid_argument("fixed kappa must be > 0");
  if (fix_alpha && !(*fix_alpha >= 0.0)) throw std::invalid_argument("fixed alpha must be >= 0");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be > 0");
}

Vector FittedModel::coefficients() const {
  Vector c(beta.size() + 1);
  c(0) = beta0;
  c.tail(beta.size()) = beta;
  return c;
}

namespace solver {
namespace {

double unpenalized(const FamilyParams& p, const Vector& eta, const Vector& y) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double theta = family::theta_from_eta(p, eta(i));
    acc += y(i) * theta - family::cumulant(p, theta);
  }
  return acc;
}

double penalty(const Vector& beta, double lambda) {
  if (lambda == 0.0 || beta.size() < 2) return 0.0;
  return 0.5 * lambda * beta.tail(beta.size() - 1).squaredNorm();
}

// P = 0 (+) I_f scaled by lambda.
void add_ridge(Matrix& a, double lambda) {
  for (Eigen::Index j = 1; j < a.rows(); ++j) a(j, j) += lambda;
}

void check_shapes(const Vector& beta, const Matrix& x, const Vector& y) {
  if (x.rows() != y.size())
    throw std::invalid_argument(fmt::format("design has {} rows but {} labels", x.rows(), y.size()));
  if (x.cols() != beta.size())
    throw std::invalid_argument(fmt::format("design has {} columns but {} coefficients", x.cols(), beta.size()));
}

void check_inputs(const Matrix& x, const Vector& y) {
  if (x.rows() == 0) throw DataError("empty dataset");
  if (x.cols() == 0) throw std::invalid_argument("design matrix needs an intercept column");
  if (x.rows() != y.size())
    throw std::invalid_argument(fmt::format("design has {} rows but {} labels", x.rows(), y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y(i) != 0.0 && y(i) != 1.0) throw DataError(fmt::format("label {} at row {} is not 0 or 1", y(i), i));
  if (!(x.col(0).array() == 1.0).all()) throw std::invalid_argument("first design column must be all ones");
  if (!x.allFinite()) throw DataError("design matrix has non-finite entries");
}

constexpr double kScoreFloor = 1e-10;
constexpr int kMaxHalvings = 30;

// Golden-section maximization of phi over [a, b] in coordinate t, with
// x = to_x(t). Returns the best probe seen.
std::pair<double, double> golden_max(const std::function<double(double)>& phi, double a, double b,
                                     const std::function<double(double)>& to_x) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double best_x = to_x(b);
  double best_f = phi(best_x);
  auto eval = [&](double t) {
    const double xv = to_x(t);
    const double fv = phi(xv);
    if (fv > best_f) {
      best_f = fv;
      best_x = xv;
    }
    return fv;
  };
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < 80 && std::fabs(b - a) > 1e-10 * std::max(1.0, std::fabs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = eval(d);
    }
  }
  return {best_x, best_f};
}

// Safeguarded Newton ascent of a scalar objective on [lo, hi] using finite
// differences. Every accepted move strictly raises phi.
double newton_ascent_1d(const std::function<double(double)>& phi, double x, double lo, double hi,
                        double rel_h, int max_iters, bool log_scale) {
  double fx = phi(x);
  for (int it = 0; it < max_iters; ++it) {
    const double h = rel_h * std::max(1.0, std::fabs(x));
    double g = 0.0;
    double curv = 0.0;
    if (x - h >= lo && x + h <= hi) {
      const double fm = phi(x - h);
      const double fp = phi(x + h);
      g = (fp - fm) / (2.0 * h);
      curv = (fp - 2.0 * fx + fm) / (h * h);
    } else if (x + 2.0 * h <= hi) {
      const double f1 = phi(x + h);
      const double f2 = phi(x + 2.0 * h);
      g = (-3.0 * fx + 4.0 * f1 - f2) / (2.0 * h);
      curv = (fx - 2.0 * f1 + f2) / (h * h);
    } else if (x - 2.0 * h >= lo) {
      const double f1 = phi(x - h);
      const double f2 = phi(x - 2.0 * h);
      g = (3.0 * fx - 4.0 * f1 + f2) / (2.0 * h);
      curv = (fx - 2.0 * f1 + f2) / (h * h);
    } else {
      break;
    }
    if (!std::isfinite(g) || std::fabs(g) < kScoreFloor) break;

    double next = x;
    double f_next = fx;
    bool moved = false;
    if (curv < 0.0 && std::isfinite(curv)) {
      const double cand = std::clamp(x - g / curv, lo, hi);
      if (cand != x) {
        const double fc = phi(cand);
        if (fc > fx) {
          next = cand;
          f_next = fc;
          moved = true;
        }
      }
    }
    if (!moved) {
      const double bound = g > 0.0 ? hi : lo;
      if (bound == x) break;
      std::pair<double, double> best;
      if (log_scale) {
        best = golden_max(phi, std::log(x), std::log(bound), [](double t) { return std::exp(t); });
      } else {
        best = golden_max(phi, x, bound, [](double t) { return t; });
      }
      best.first = std::clamp(best.first, lo, hi);
      if (best.second > fx && best.first != x) {
        next = best.first;
        f_next = best.second;
        moved = true;
      }
    }
    if (!moved) break;
    const double dx = std::fabs(next - x);
    x = next;
    fx = f_next;
    if (dx <= 1e-12 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

}  // namespace

StartingPoint initialize(const Matrix& x, const Vector& y, const FitConfig& cfg) {
  cfg.validate();
  check_inputs(x, y);
  const double kappa0 =
      std::clamp(cfg.fix_kappa.value_or(1.0), cfg.kappa_bounds.first, cfg.kappa_bounds.second);
  const double alpha0 =
      std::clamp(cfg.fix_alpha.value_or(1.0), cfg.alpha_bounds.first, cfg.alpha_bounds.second);
  FamilyParams p(cfg.fix_kappa.value_or(kappa0), cfg.fix_alpha.value_or(alpha0));

  Vector eta(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double mu0 = (y(i) + cfg.nu) / (1.0 + 2.0 * cfg.nu);
    eta(i) = family::link(p, mu0);
  }
  Matrix a = x.transpose() * x;
  add_ridge(a, cfg.lambda);
  Vector beta = solve_penalized_system(a, x.transpose() * eta);
  return {std::move(beta), std::move(eta), p};
}

double penalized_loglik(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                        double lambda) {
  check_shapes(beta, x, y);
  const Vector eta = x * beta;
  return unpenalized(p, eta, y) - penalty(beta, lambda);
}

BetaStep beta_step(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                   double lambda, WeightMode mode) {
  check_shapes(beta, x, y);
  const Eigen::Index n = x.rows();
  const Vector eta = x * beta;
  Vector fp(n), fpp(n), resid(n), bpp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double theta = family::theta_from_eta(p, eta(i));
    fp(i) = family::f_prime(p, eta(i));
    fpp(i) = family::f_second(p, eta(i));
    bpp(i) = family::variance_at_theta(p, theta);
    resid(i) = y(i) - family::mean(p, theta);
  }
  const double base = unpenalized(p, eta, y) - penalty(beta, lambda);

  // Score of the penalized objective.
  Vector grad = x.transpose() * fp.cwiseProduct(resid);
  if (lambda != 0.0) grad.tail(grad.size() - 1) -= lambda * beta.tail(beta.size() - 1);

  BetaStep out{beta, false, true};
  auto try_direction = [&](const Matrix& a) {
    Vector dir;
    try {
      dir = solve_penalized_system(a, grad);
    } catch (const SingularSystem&) {
      return false;
    }
    out.singular = false;
    if (!dir.allFinite()) return false;
    // At the rounding floor a full Newton step may not raise the computed
    // objective; take it anyway so the coefficients still reach the optimum.
    const double floor = std::min(1e-13, 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(base));
    if (grad.dot(dir) <= floor) {
      const Vector cand = beta + dir;
      const double value = penalized_loglik(p, cand, x, y, lambda);
      if (std::isfinite(value) && value >= base - floor) {
        out.beta = cand;
        out.ascended = true;
        return true;
      }
    }
    double t = 1.0;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, t *= 0.5) {
      const Vector cand = beta + t * dir;
      const double value = penalized_loglik(p, cand, x, y, lambda);
      if (std::isfinite(value) && value > base) {
        out.beta = cand;
        out.ascended = true;
        return true;
      }
    }
    return false;
  };

  std::vector<WeightMode> modes{mode};
  if (mode == WeightMode::Observed) modes.push_back(WeightMode::Expected);
  Matrix expected_info;
  for (const WeightMode m : modes) {
    // Negated Hessian weights: (f')^2 b'' - (y - mu) f'' (observed) or (f')^2 b'' (expected).
    Vector w = fp.cwiseProduct(fp).cwiseProduct(bpp);
    if (m == WeightMode::Observed) w -= resid.cwiseProduct(fpp);
    Matrix a = x.transpose() * w.asDiagonal() * x;
    add_ridge(a, lambda);
    if (m == WeightMode::Expected) expected_info = a;
    if (try_direction(a)) return out;
  }
  if (grad.lpNorm<Eigen::Infinity>() == 0.0) {
    out.singular = false;
    return out;
  }

  // Curvature vanishes away from the margin when kappa is large; damp the
  // expected information toward a scaled gradient step until the objective rises.
  const Vector scale = (x.transpose() * x).diagonal().cwiseMax(1e-300);
  for (double tau = 1e-8; tau <= 1e8; tau *= 100.0) {
    Matrix a = expected_info;
    a.diagonal() += tau * scale;
    if (try_direction(a)) return out;
  }
  return out;
}

double kappa_step(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                  double lambda, const FitConfig& cfg) {
  if (cfg.fix_kappa) return *cfg.fix_kappa;
  check_shapes(beta, x, y);
  const Vector eta = x * beta;
  const double pen = penalty(beta, lambda);
  const double alpha = p.alpha();
  auto phi = [&](double kappa) { return unpenalized(FamilyParams(kappa, alpha), eta, y) - pen; };
  const auto [lo, hi] = cfg.kappa_bounds;
  return newton_ascent_1d(phi, std::clamp(p.kappa(), lo, hi), lo, hi, cfg.fd_step, cfg.max_newton_iters,
                          true);
}

double alpha_step(const FamilyParams& p, const Vector& beta, const Matrix& x, const Vector& y,
                  double lambda, const FitConfig& cfg) {
  if (cfg.fix_alpha) return *cfg.fix_alpha;
  check_shapes(beta, x, y);
  const Vector eta = x * beta;
  const double pen = penalty(beta, lambda);
  const double kappa = p.kappa();
  auto phi = [&](double alpha) { return unpenalized(FamilyParams(kappa, alpha), eta, y) - pen; };
  const auto [lo, hi] = cfg.alpha_bounds;
  return newton_ascent_1d(phi, std::clamp(p.alpha(), lo, hi), lo, hi, cfg.fd_step, cfg.max_newton_iters,
                          false);
}

FittedModel fit(const Matrix& x, const Vector& y, const FitConfig& cfg) {
  StartingPoint start = initialize(x, y, cfg);
  FamilyParams p = start.params;
  Vector beta = std::move(start.beta);

  FittedModel model;
  model.lambda = cfg.lambda;
  model.standardization = Standardization::identity(static_cast<std::size_t>(x.cols() - 1));
  double ll = penalized_loglik(p, beta, x, y, cfg.lambda);
  model.trace.push_back(ll);

  for (int t = 1; t <= cfg.max_outer_iters; ++t) {
    const double ll_prev = ll;
    if (!cfg.fix_kappa) {
      p = FamilyParams(kappa_step(p, beta, x, y, cfg.lambda, cfg), p.alpha());
      ll = penalized_loglik(p, beta, x, y, cfg.lambda);
      model.trace.push_back(ll);
    }
    if (!cfg.fix_alpha) {
      p = FamilyParams(p.kappa(), alpha_step(p, beta, x, y, cfg.lambda, cfg));
      ll = penalized_loglik(p, beta, x, y, cfg.lambda);
      model.trace.push_back(ll);
    }
    const BetaStep step = beta_step(p, beta, x, y, cfg.lambda, cfg.weight_mode);
    model.n_iters = t;
    if (step.singular) break;
    beta = step.beta;
    ll = penalized_loglik(p, beta, x, y, cfg.lambda);
    model.trace.push_back(ll);
    const double denom = std::max(std::fabs(ll_prev), std::numeric_limits<double>::min());
    if (std::fabs(ll - ll_prev) / denom < cfg.epsilon) {
      model.converged = true;
      break;
    }
  }

  model.beta0 = beta(0);
  model.beta = beta.tail(beta.size() - 1);
  model.kappa_hat = p.kappa();
  model.alpha_hat = p.alpha();
  model.penalized_loglik = ll;
  return model;
}

FittedModel fit_dataset(const Dataset& d, const FitConfig& cfg, bool standardize) {
  if (d.rows() == 0) throw DataError("empty dataset");
  if (!standardize) return fit(design_matrix(d), d.labels, cfg);
  auto [scaled, transform] = softsvm::standardize(d);
  FittedModel model = fit(design_matrix(scaled), scaled.labels, cfg);
  model.standardization = std::move(transform);
  return model;
}

Vector solve_penalized_system(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("solve_penalized_system: shape mismatch");
  const double tol = 1e-8 * (1.0 + b.lpNorm<Eigen::Infinity>());
  auto residual_ok = [&](const Vector& sol) {
    return sol.allFinite() && (a * sol - b).lpNorm<Eigen::Infinity>() <= tol;
  };
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    Vector sol = llt.solve(b);
    if (residual_ok(sol)) return sol;
  }
  Matrix jittered = a;
  jittered.diagonal().array() += 1e-10;
  llt.compute(jittered);
  if (llt.info() == Eigen::Success) {
    Vector sol = llt.solve(b);
    if (residual_ok(sol)) return sol;
  }
  throw SingularSystem("penalized system is singular after jitter");
}

}  // namespace solver
}  // namespace softsvm

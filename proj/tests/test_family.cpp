#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "softsvm/family.hpp"
#include "softsvm/numerics.hpp"

using namespace softsvm;
using namespace softsvm::family;
using doctest::Approx;

namespace {

const double kLog2 = std::log(2.0);

double v(double x) {
  const double e = std::exp(-std::fabs(x));
  return e / ((1 + e) * (1 + e));
}
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// b(theta) evaluated in extended precision straight from the definition.
double cumulant_oracle(double kappa, double alpha, double theta) {
  const oracle::Real k(kappa), a(alpha), t(theta);
  return oracle::to_double((oracle::log1pe(k * t + 2 * a) + oracle::log1pe(k * t - 2 * a)) / (2 * k));
}

double theta_oracle(double kappa, double alpha, double eta) {
  const oracle::Real k(kappa), a(alpha), e(eta);
  return oracle::to_double((oracle::log1pe(k * e + a) - oracle::log1pe(a - k * e)) / k);
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
  return out;
}

const std::vector<double> kKappas{0.5, 1.0, 2.0, 5.0, 20.0};
const std::vector<double> kAlphas{0.0, 0.5, 1.0, 4.0};

bool saturated(double mu) { return std::min(mu, 1.0 - mu) < 1e-6; }

}  // namespace

TEST_CASE("FamilyParams") {
  const FamilyParams p(5.0, 4.0);
  CHECK(p.kappa() == 5.0);
  CHECK(p.alpha() == 4.0);
  CHECK(p.delta() == 0.8);
  CHECK(FamilyParams::from_delta(5.0, 0.8) == p);
  CHECK(FamilyParams::logistic() == FamilyParams(1.0, 0.0));
  CHECK_THROWS_AS(FamilyParams(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FamilyParams(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FamilyParams(1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(FamilyParams(std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("cumulant examples") {
  const auto lg = FamilyParams::logistic();
  const FamilyParams p(5.0, 4.0);
  CHECK(cumulant(lg, 0.0) == Approx(kLog2).epsilon(1e-15));
  CHECK(cumulant(p, 0.0) == Approx(cumulant_oracle(5, 4, 0)).epsilon(1e-15));
  CHECK(cumulant(p, 0.0) == Approx(0.8000671).epsilon(1e-7));
  for (const double t : {-4.0, 0.3, 9.0}) CHECK(std::fabs(cumulant(p, t) - t - cumulant(p, -t)) <= 1e-12);
}

TEST_CASE("cumulant symmetry and oracle agreement on the parameter grid") {
  for (const double k : kKappas)
    for (const double a : kAlphas) {
      const FamilyParams p(k, a);
      for (const double t : grid(-30, 30, 0.05)) {
        CHECK(std::fabs(cumulant(p, t) - t - cumulant(p, -t)) <= 1e-12);
        CHECK(cumulant(p, t) == Approx(cumulant_oracle(k, a, t)).epsilon(1e-13));
      }
    }
}

TEST_CASE("mean examples and properties") {
  const FamilyParams p(5.0, 4.0);
  CHECK(mean(p, 0.0) == 0.5);
  CHECK(mean(FamilyParams(2.0, 3.0), 0.0) == Approx(0.5).epsilon(1e-16));
  CHECK(mean(FamilyParams::logistic(), 2.0) == Approx(0.8807971).epsilon(1e-7));
  CHECK(mean(p, 2.0) == Approx(0.5 * (sigmoid(18) + sigmoid(2))).epsilon(1e-15));
  CHECK(mean(p, 2.0) == Approx(0.9403985).epsilon(1e-7));
  for (const double k : kKappas)
    for (const double a : kAlphas) {
      const FamilyParams q(k, a);
      double prev = 0.0;
      for (const double t : grid(-3, 3, 0.01)) {
        const double m = mean(q, t);
        if (saturated(m)) CHECK(m >= prev);
        else CHECK(m > prev);
        prev = m;
        CHECK(std::fabs(mean(q, -t) - (1 - m)) <= 1e-15);
      }
    }
}

TEST_CASE("variance_at_theta examples") {
  CHECK(variance_at_theta(FamilyParams::logistic(), 0.0) == 0.25);
  const FamilyParams p(5.0, 4.0);
  CHECK(variance_at_theta(p, 0.0) == Approx(5 * v(8)).epsilon(1e-14));
  CHECK(variance_at_theta(p, 0.0) == Approx(1.6762e-3).epsilon(1e-4));
  CHECK(variance_at_theta(p, 3.0) == variance_at_theta(p, -3.0));
  for (const double t : grid(-20, 20, 0.5)) CHECK(variance_at_theta(p, t) > 0.0);
}

TEST_CASE("canonical map examples") {
  const auto lg = FamilyParams::logistic();
  const FamilyParams p(5.0, 4.0);
  CHECK(theta_from_eta(p, 0.0) == 0.0);
  CHECK(theta_from_eta(lg, 3.7) == Approx(3.7).epsilon(1e-15));
  const FamilyParams svm(100.0, 100.0);
  CHECK(std::fabs(theta_from_eta(svm, 0.5) - 1.0) <= 2 * kLog2 / 100);
  for (const double e : grid(-10, 10, 0.1)) {
    CHECK(theta_from_eta(p, -e) == -theta_from_eta(p, e));
    CHECK(theta_from_eta(p, e) == Approx(theta_oracle(5, 4, e)).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("f' and f'' examples") {
  const auto lg = FamilyParams::logistic();
  const FamilyParams p(5.0, 4.0);
  for (const double e : {-2.0, 0.0, 1.5}) {
    CHECK(f_prime(lg, e) == Approx(1.0).epsilon(1e-15));
    CHECK(f_second(lg, e) == 0.0);
  }
  CHECK(f_second(p, 0.0) == 0.0);
  CHECK(f_prime(p, 1.0) == Approx(sigmoid(9) + sigmoid(-1)).epsilon(1e-15));
  // expit(9) + expit(-1) = 0.99987660 + 0.26894142.
  CHECK(f_prime(p, 1.0) == Approx(1.2688180).epsilon(1e-7));
  for (const double e : grid(-6, 6, 0.05)) {
    CHECK(f_prime(p, e) > 0.0);
    CHECK(f_second(p, -e) == -f_second(p, e));
  }
}

TEST_CASE("inverse_mean examples") {
  const FamilyParams p(5.0, 4.0);
  CHECK(inverse_mean(p, 0.5) == 0.0);
  CHECK(inverse_mean(FamilyParams::logistic(), 0.9) == Approx(2.1972246).epsilon(1e-7));
  CHECK(inverse_mean(FamilyParams::logistic(), 0.9) == Approx(std::log(9.0)).epsilon(1e-14));
  CHECK(inverse_mean(p, mean(p, 1.3)) == Approx(1.3).epsilon(1e-10));
  CHECK(inverse_mean(p, 0.2) == -inverse_mean(p, 0.8));
  CHECK_THROWS_AS(inverse_mean(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(inverse_mean(p, 1.0), std::domain_error);
  CHECK_THROWS_AS(inverse_mean(p, -0.1), std::domain_error);
}

TEST_CASE("eta_from_theta examples") {
  const FamilyParams p(5.0, 4.0);
  CHECK(eta_from_theta(p, 0.0) == 0.0);
  CHECK(eta_from_theta(FamilyParams::logistic(), -2.5) == Approx(-2.5).epsilon(1e-15));
  CHECK(eta_from_theta(p, theta_from_eta(p, 0.7)) == Approx(0.7).epsilon(1e-10));
  CHECK(eta_from_theta(p, -1.1) == -eta_from_theta(p, 1.1));
}

TEST_CASE("link and composite_mean examples") {
  const auto lg = FamilyParams::logistic();
  const FamilyParams p(5.0, 4.0);
  CHECK(link(p, 0.5) == 0.0);
  CHECK(link(lg, sigmoid(1.0)) == Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(link(p, composite_mean(p, 0.42)) - 0.42) <= 1e-9);
  CHECK(composite_mean(p, 0.0) == 0.5);
  for (const double e : grid(-20, 20, 0.25)) CHECK(composite_mean(lg, e) == Approx(sigmoid(e)).epsilon(1e-15));
  CHECK(std::fabs(composite_mean(p, 2.0) - mean(p, theta_from_eta(p, 2.0))) <= 1e-12);
  const double chained = 0.5 * (sigmoid(5 * theta_oracle(5, 4, 2.0) + 8) + sigmoid(5 * theta_oracle(5, 4, 2.0) - 8));
  CHECK(composite_mean(p, 2.0) == Approx(chained).epsilon(1e-12));
}

TEST_CASE("mean clamping") {
  CHECK(clamp_mean(0.0) == kMuEps);
  CHECK(clamp_mean(1.0) == 1.0 - kMuEps);
  CHECK(clamp_mean(0.3) == 0.3);
  CHECK(std::isfinite(link(FamilyParams(5, 4), 1e-300)));
  CHECK(link(FamilyParams(5, 4), 1e-300) == link(FamilyParams(5, 4), kMuEps));
}

TEST_CASE("variance_of_mean examples") {
  CHECK(variance_of_mean(FamilyParams::logistic(), 0.3) == Approx(0.21).epsilon(1e-14));
  CHECK(variance_of_mean(FamilyParams(1, 1), 0.5) == Approx(v(2)).epsilon(1e-15));
  CHECK(variance_of_mean(FamilyParams(1, 1), 0.5) == Approx(0.1049936).epsilon(1e-6));
  CHECK(variance_of_mean(FamilyParams(3, 2), 0.5) == Approx(3 * v(4)).epsilon(1e-15));
  CHECK(variance_of_mean(FamilyParams(2, 1), 0.3) == Approx(variance_of_mean(FamilyParams(2, 1), 0.7)).epsilon(1e-13));
}

TEST_CASE("shape_r and u_alpha") {
  CHECK(shape_r(0.0, 0.5) == 0.25);
  CHECK(shape_r(1.0, 0.5) == Approx(v(2)).epsilon(1e-15));
  CHECK(u_alpha(0.0, 0.7) == Approx(std::log(0.7 / 0.3)).epsilon(1e-14));
  CHECK(u_alpha(2.0, 0.5) == 0.0);
  CHECK_THROWS_AS(u_alpha(1.0, 0.0), std::domain_error);
  for (const double k : {1.0, 3.0})
    for (const double a : {0.0, 1.0, 5.0})
      for (int i = 1; i <= 9; ++i) {
        const double mu = i / 10.0;
        CHECK(std::fabs(k * shape_r(a, mu) - variance_of_mean(FamilyParams(k, a), mu)) <= 1e-10);
        CHECK(std::fabs(u_alpha(a, mu) - k * inverse_mean(FamilyParams(k, a), mu)) <= 1e-12);
      }
}

TEST_CASE("log_likelihood") {
  const std::vector<double> t0{0.0}, y1{1.0}, none{};
  CHECK(log_likelihood(FamilyParams::logistic(), t0, y1) == Approx(-kLog2).epsilon(1e-15));
  CHECK(log_likelihood(FamilyParams::logistic(), none, none) == 0.0);
  const FamilyParams p(5.0, 4.0);
  const std::vector<double> t{1.2, -0.4}, y{1.0, 0.0};
  CHECK(log_likelihood(p, t, y) == Approx(1.2 - cumulant(p, 1.2) - cumulant(p, -0.4)).epsilon(1e-15));
  CHECK(log_likelihood(p, t, y) ==
        Approx(1.2 - cumulant_oracle(5, 4, 1.2) - cumulant_oracle(5, 4, -0.4)).epsilon(1e-14));
  CHECK_THROWS_AS(log_likelihood(p, t, y1), std::invalid_argument);
}

TEST_CASE("hinge_cumulant and delta_of_kappa") {
  CHECK(hinge_cumulant(0.0) == 1.0);
  CHECK(hinge_cumulant(-3.0) == 0.0);
  CHECK(hinge_cumulant(5.0) == 5.0);
  CHECK(delta_of_kappa(1.0) == 0.0);
  CHECK(delta_of_kappa(5.0) == Approx(0.8));
  CHECK_THROWS_AS(delta_of_kappa(0.5), std::invalid_argument);
}

TEST_CASE("logistic reduction") {
  const auto lg = FamilyParams::logistic();
  for (const double t : grid(-30, 30, 0.01)) {
    CHECK(std::fabs(cumulant(lg, t) - numerics::log1pe(t)) <= 1e-12 * std::max(1.0, std::fabs(t)));
    CHECK(std::fabs(mean(lg, t) - numerics::expit(t)) <= 1e-12);
    CHECK(std::fabs(theta_from_eta(lg, t) - t) <= 1e-12 * std::max(1.0, std::fabs(t)));
  }
  for (const double mu : grid(0.001, 0.999, 0.001))
    CHECK(std::fabs(link(lg, mu) - numerics::logit(mu)) <= 1e-12 * std::max(1.0, std::fabs(numerics::logit(mu))));
}

TEST_CASE("SVM limit bound") {
  for (const double k : {10.0, 100.0, 1000.0}) {
    const auto p = FamilyParams::from_delta(k, 1.0);
    double sup = 0.0;
    for (const double t : grid(-6, 6, 0.01)) sup = std::max(sup, std::fabs(cumulant(p, t) - hinge_cumulant(t)));
    CHECK(sup <= kLog2 / k);
  }
}

TEST_CASE("derivative consistency") {
  const double h = 1e-5;
  for (const double k : kKappas)
    for (const double a : kAlphas) {
      const FamilyParams p(k, a);
      for (const double t : grid(-30, 30, 0.1)) {
        const double fd_b = (cumulant(p, t + h) - cumulant(p, t - h)) / (2 * h);
        CHECK(std::fabs(mean(p, t) - fd_b) <= 1e-6 * std::max(1.0, std::fabs(mean(p, t))));
        const double fd_mu = (mean(p, t + h) - mean(p, t - h)) / (2 * h);
        CHECK(std::fabs(variance_at_theta(p, t) - fd_mu) <= 1e-6 * std::max(1.0, variance_at_theta(p, t)));
        const double fd_f = (theta_from_eta(p, t + h) - theta_from_eta(p, t - h)) / (2 * h);
        CHECK(std::fabs(f_prime(p, t) - fd_f) <= 1e-6 * std::max(1.0, f_prime(p, t)));
        const double fd_fp = (f_prime(p, t + h) - f_prime(p, t - h)) / (2 * h);
        CHECK(std::fabs(f_second(p, t) - fd_fp) <= 1e-6 * std::max(1.0, std::fabs(f_second(p, t))));
      }
    }
}

TEST_CASE("inverse roundtrips") {
  for (const double k : kKappas)
    for (const double a : kAlphas) {
      const FamilyParams p(k, a);
      for (const double x : grid(-15, 15, 0.05)) {
        const double mu = mean(p, x);
        if (!saturated(mu)) CHECK(std::fabs(inverse_mean(p, mu) - x) <= 1e-9);
        CHECK(std::fabs(eta_from_theta(p, theta_from_eta(p, x)) - x) <= 1e-9);
        const double cm = composite_mean(p, x);
        if (!saturated(cm)) CHECK(std::fabs(link(p, cm) - x) <= 1e-9);
      }
    }
}

TEST_CASE("monotonicity") {
  for (const double k : kKappas)
    for (const double a : kAlphas) {
      const FamilyParams p(k, a);
      double pm = -1, pf = -1e300, pe = -1e300;
      for (const double x : grid(-5, 5, 0.01)) {
        if (saturated(mean(p, x))) CHECK(mean(p, x) >= pm);
        else CHECK(mean(p, x) > pm);
        CHECK(theta_from_eta(p, x) > pf);
        CHECK(eta_from_theta(p, x) > pe);
        pm = mean(p, x);
        pf = theta_from_eta(p, x);
        pe = eta_from_theta(p, x);
      }
      double pl = -1e300;
      for (const double mu : grid(0.01, 0.99, 0.01)) {
        CHECK(link(p, mu) > pl);
        pl = link(p, mu);
      }
    }
}

TEST_CASE("symmetric link: composite_mean > 1/2 iff eta > 0") {
  std::uint64_t s = 12345;
  for (int i = 0; i < 1000; ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    const double eta = (static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5) * 20;
    const FamilyParams p(0.5 + (i % 7), (i % 5) * 0.9);
    CHECK((composite_mean(p, eta) > 0.5) == (eta > 0.0));
  }
}

namespace {
int local_maxima(double alpha) {
  const FamilyParams p(1.0, alpha);
  std::vector<double> vals;
  for (int i = 0; i < 2001; ++i) vals.push_back(variance_of_mean(p, 0.001 + 0.998 * i / 2000.0));
  int count = 0;
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    if (vals[i] > vals[i - 1] && vals[i] >= vals[i + 1]) ++count;
  return count;
}
}  // namespace

TEST_CASE("variance modality") {
  CHECK(local_maxima(0.5) == 1);
  CHECK(local_maxima(1.0) == 2);
  CHECK(local_maxima(0.0) == 1);
  CHECK(local_maxima(2.0) == 2);
}

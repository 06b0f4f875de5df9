#include "softsvm/model.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "softsvm/errors.hpp"

namespace softsvm {

std::string_view to_string(PointType t) {
  switch (t) {
    case PointType::SoftSupportVector:
      return "sv";
    case PointType::DeadZone:
      return "dead";
    case PointType::Inlier:
      return "inlier";
  }
  return "?";
}

namespace model {

Vector predict_mu(const FittedModel& m, const Matrix& features) {
  if (static_cast<std::size_t>(features.cols()) != m.num_features())
    throw DataError(
        fmt::format("model has {} features, data has {}", m.num_features(), features.cols()));
  const Vector eta = (m.standardization.apply(features) * m.beta).array() + m.beta0;
  const FamilyParams p = m.params();
  Vector mu(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = family::composite_mean(p, eta(i));
  return mu;
}

std::vector<int> classify(std::span<const double> mu) {
  std::vector<int> out;
  out.reserve(mu.size());
  for (const double v : mu) out.push_back(v > 0.5 ? 1 : 0);
  return out;
}

PointType point_type(double mu_hat, double variance_weight, const DiagnoseOptions& opts) {
  if (variance_weight >= opts.v_threshold) return PointType::SoftSupportVector;
  if (std::fabs(mu_hat - 0.5) < opts.mu_band) return PointType::DeadZone;
  return PointType::Inlier;
}

std::vector<PointDiagnostics> diagnose(const FittedModel& m, const Matrix& features,
                                       const DiagnoseOptions& opts) {
  const Vector mu = predict_mu(m, features);
  const FamilyParams p = m.params();
  std::vector<PointDiagnostics> out;
  out.reserve(static_cast<std::size_t>(mu.size()));
  for (const double v : mu) {
    const double weight = family::variance_of_mean(p, family::clamp_mean(v));
    out.push_back({v, weight, point_type(v, weight, opts), v > 0.5 ? 1 : 0});
  }
  return out;
}

double soft_margin(const FittedModel& m) {
  const double norm = m.beta.norm();
  if (!(norm > 0.0)) throw std::domain_error("soft margin undefined for zero coefficients");
  return (m.alpha_hat / m.kappa_hat) / norm;
}

}  // namespace model
}  // namespace softsvm

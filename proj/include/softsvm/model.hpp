#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "softsvm/solver.hpp"

namespace softsvm {

enum class PointType { SoftSupportVector, DeadZone, Inlier };

/// "sv", "dead" or "inlier".
std::string_view to_string(PointType t);

struct PointDiagnostics {
  double mu_hat;
  double variance_weight;
  PointType point_type;
  int predicted_label;
};

/// Thresholds for typing observations by fitted mean and variance weight.
struct DiagnoseOptions {
  double v_threshold = 1.0;
  double mu_band = 0.25;
};

namespace model {

/// Fitted means for raw feature rows; the model's standardization is applied first.
Vector predict_mu(const FittedModel& m, const Matrix& features);

/// Consensus rule: 1 iff mu > 0.5.
std::vector<int> classify(std::span<const double> mu);
inline std::vector<int> classify(const Vector& mu) { return classify(std::span(mu.data(), mu.size())); }

PointType point_type(double mu_hat, double variance_weight, const DiagnoseOptions& opts = {});

std::vector<PointDiagnostics> diagnose(const FittedModel& m, const Matrix& features,
                                       const DiagnoseOptions& opts = {});

/// M = (alpha / kappa) / |beta|_2 on the fit-time feature scale.
/// Throws std::domain_error for an all-zero coefficient vector.
double soft_margin(const FittedModel& m);

}  // namespace model
}  // namespace softsvm

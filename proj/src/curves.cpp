#include "softsvm/curves.hpp"

#include <fmt/format.h>

namespace softsvm::family {

std::vector<CurveRow> curves(const FamilyParams& p, const std::vector<double>& thetas) {
  std::vector<CurveRow> rows;
  rows.reserve(thetas.size());
  const double denom = static_cast<double>(thetas.size() + 1);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double t = thetas[i];
    const double mu = static_cast<double>(i + 1) / denom;
    rows.push_back({t, cumulant(p, t), mean(p, t), variance_at_theta(p, t), mu, variance_of_mean(p, mu)});
  }
  return rows;
}

std::string curves_to_csv(const std::vector<CurveRow>& rows) {
  std::string out = "theta,cumulant,mean,variance,mu,variance_of_mean\n";
  for (const auto& r : rows)
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.theta, r.cumulant, r.mean, r.variance, r.mu,
                       r.variance_of_mean);
  return out;
}

}  // namespace softsvm::family

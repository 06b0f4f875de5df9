#pragma once

#include <string>
#include <vector>

#include "softsvm/family.hpp"

namespace softsvm {

/// One sample of the family functions: cumulant, mean and variance at theta,
/// and the variance function at a mean on an evenly spaced grid in (0, 1).
struct CurveRow {
  double theta;
  double cumulant;
  double mean;
  double variance;
  double mu;
  double variance_of_mean;
};

namespace family {

/// theta runs over `thetas`; row i pairs it with mu_i = (i + 1) / (count + 1).
std::vector<CurveRow> curves(const FamilyParams& p, const std::vector<double>& thetas);

/// theta,cumulant,mean,variance,mu,variance_of_mean
std::string curves_to_csv(const std::vector<CurveRow>& rows);

}  // namespace family
}  // namespace softsvm

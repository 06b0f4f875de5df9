#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "softsvm/evaluation.hpp"
#include "softsvm/model.hpp"

namespace softsvm::io {

/// Model document: family, coefficients, lambda, fit, standardization, in
/// that order, numbers with 17 significant digits.
std::string model_to_json(const FittedModel& m);
/// Throws DataError on malformed documents.
FittedModel model_from_json(std::string_view text);

std::string cv_report_to_json(const CvReport& r);
/// lambda,rep,fold,mcc; missing cells written as NA.
std::string cv_report_to_csv(const CvReport& r);

/// mu,yhat,variance_weight,point_type.
std::string predictions_to_csv(const std::vector<PointDiagnostics>& rows);

/// "lo:hi:count", log-spaced and inclusive of both ends.
std::vector<double> parse_log_grid(std::string_view spec);
/// "lo:hi:step", arithmetic and inclusive of hi when it lands on the grid.
std::vector<double> parse_range(std::string_view spec);
/// Comma-separated reals.
std::vector<double> parse_list(std::string_view spec);

void write_file(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

std::string format_real(double x);

}  // namespace softsvm::io

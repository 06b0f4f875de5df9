#include "softsvm/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <stdexcept>

#include "softsvm/errors.hpp"

namespace softsvm::io {
namespace {

std::string json_real(double x) { return std::isfinite(x) ? format_real(x) : "null"; }

std::string json_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + json_real(v[i]);
  return out + "]";
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_real(std::string_view s, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument(fmt::format("invalid number '{}' in {}", s, what));
  return v;
}

std::vector<double> read_reals(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw DataError(fmt::format("model JSON: '{}' must be an array", key));
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw DataError(fmt::format("model JSON: '{}' holds a non-number", key));
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string model_to_json(const FittedModel& m) {
  std::vector<double> values(m.beta.data(), m.beta.data() + m.beta.size());
  std::string out = "{\n";
  out += fmt::format("  \"family\": {{\"kappa\": {}, \"alpha\": {}}},\n", json_real(m.kappa_hat), json_real(m.alpha_hat));
  out += fmt::format("  \"coefficients\": {{\"intercept\": {}, \"values\": {}}},\n", json_real(m.beta0), json_array(values));
  out += fmt::format("  \"lambda\": {},\n", json_real(m.lambda));
  out += fmt::format("  \"fit\": {{\"loglik\": {}, \"iters\": {}, \"converged\": {}}},\n", json_real(m.penalized_loglik),
                     m.n_iters, m.converged ? "true" : "false");
  out += fmt::format("  \"standardization\": {{\"means\": {}, \"scales\": {}}}\n", json_array(m.standardization.means),
                     json_array(m.standardization.scales));
  out += "}\n";
  return out;
}

FittedModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    FittedModel m;
    const auto& fam = j.at("family");
    m.kappa_hat = fam.at("kappa").get<double>();
    m.alpha_hat = fam.at("alpha").get<double>();
    const auto& coef = j.at("coefficients");
    m.beta0 = coef.at("intercept").get<double>();
    const auto values = read_reals(coef, "values");
    m.beta = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    m.lambda = j.at("lambda").get<double>();
    const auto& fit = j.at("fit");
    m.penalized_loglik = fit.at("loglik").is_null() ? std::nan("") : fit.at("loglik").get<double>();
    m.n_iters = fit.at("iters").get<int>();
    m.converged = fit.at("converged").get<bool>();
    const auto& st = j.at("standardization");
    m.standardization.means = read_reals(st, "means");
    m.standardization.scales = read_reals(st, "scales");
    m.standardization.constant.assign(m.standardization.means.size(), false);

    if (m.standardization.means.size() != values.size() || m.standardization.scales.size() != values.size())
      throw DataError("model JSON: standardization length differs from coefficient count");
    for (const double s : m.standardization.scales)
      if (!(s > 0.0)) throw DataError("model JSON: standardization scales must be positive");
    // Validates kappa > 0 and alpha >= 0.
    (void)m.params();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("model JSON: {}", e.what()));
  } catch (const std::invalid_argument& e) {
    throw DataError(fmt::format("model JSON: {}", e.what()));
  }
}

std::string cv_report_to_json(const CvReport& r) {
  std::string out = "{\n";
  out += fmt::format("  \"lambda_grid\": {},\n", json_array(r.lambda_grid));
  out += fmt::format("  \"reps\": {},\n  \"folds\": {},\n", r.reps, r.folds);
  out += "  \"metrics\": [";
  for (std::size_t l = 0; l < r.lambda_grid.size(); ++l) {
    out += l ? ",\n    [" : "\n    [";
    for (std::size_t rep = 0; rep < r.reps; ++rep) {
      out += rep ? ", [" : "[";
      for (std::size_t f = 0; f < r.folds; ++f) {
        const auto& c = r.cell(l, rep, f);
        out += (f ? ", " : "") + (c ? json_real(*c) : std::string("null"));
      }
      out += "]";
    }
    out += "]";
  }
  out += "\n  ],\n";
  out += "  \"replication_means\": [";
  for (std::size_t l = 0; l < r.replication_means.size(); ++l)
    out += (l ? ", " : "") + json_array(r.replication_means[l]);
  out += "],\n";
  out += fmt::format("  \"means\": {},\n", json_array(r.means));
  out += fmt::format("  \"selected_lambda\": {},\n", json_real(r.selected_lambda));
  out += fmt::format("  \"seed\": {}\n", r.seed);
  out += "}\n";
  return out;
}

std::string cv_report_to_csv(const CvReport& r) {
  std::string out = "lambda,rep,fold,mcc\n";
  for (std::size_t l = 0; l < r.lambda_grid.size(); ++l)
    for (std::size_t rep = 0; rep < r.reps; ++rep)
      for (std::size_t f = 0; f < r.folds; ++f) {
        const auto& c = r.cell(l, rep, f);
        out += fmt::format("{},{},{},{}\n", format_real(r.lambda_grid[l]), rep, f, c ? format_real(*c) : "NA");
      }
  return out;
}

std::string predictions_to_csv(const std::vector<PointDiagnostics>& rows) {
  std::string out = "mu,yhat,variance_weight,point_type\n";
  for (const auto& row : rows)
    out += fmt::format("{},{},{},{}\n", format_real(row.mu_hat), row.predicted_label, format_real(row.variance_weight),
                       to_string(row.point_type));
  return out;
}

std::vector<double> parse_log_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw std::invalid_argument(fmt::format("grid '{}' must look like lo:hi:count", spec));
  const double lo = to_real(parts[0], "grid");
  const double hi = to_real(parts[1], "grid");
  const double count_real = to_real(parts[2], "grid");
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument(fmt::format("grid '{}' needs 0 < lo <= hi", spec));
  if (count_real < 1.0 || count_real != std::floor(count_real) || count_real > 1e6)
    throw std::invalid_argument(fmt::format("grid '{}' needs an integer count >= 1", spec));
  const auto count = static_cast<std::size_t>(count_real);
  if (count == 1) {
    if (lo != hi) throw std::invalid_argument(fmt::format("grid '{}' with one point needs lo == hi", spec));
    return {lo};
  }
  const double l0 = std::log10(lo);
  const double l1 = std::log10(hi);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> parse_range(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw std::invalid_argument(fmt::format("range '{}' must look like lo:hi:step", spec));
  const double lo = to_real(parts[0], "range");
  const double hi = to_real(parts[1], "range");
  const double step = to_real(parts[2], "range");
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument(fmt::format("range '{}' needs lo <= hi and step > 0", spec));
  const double span = std::floor((hi - lo) / step + 1e-9);
  if (span > 1e7) throw std::invalid_argument(fmt::format("range '{}' has too many points", spec));
  const auto count = static_cast<std::size_t>(span) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  return out;
}

std::vector<double> parse_list(std::string_view spec) {
  std::vector<double> out;
  for (const auto part : split(spec, ',')) out.push_back(to_real(part, "list"));
  return out;
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace softsvm::io

#include "softsvm/data.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "softsvm/errors.hpp"

namespace softsvm {

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>((labels.array() == static_cast<double>(label)).count());
}

Dataset Dataset::subset(const std::vector<std::size_t>& idx) const {
  Dataset out;
  out.feature_names = feature_names;
  out.features.resize(static_cast<Eigen::Index>(idx.size()), features.cols());
  out.labels.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto src = static_cast<Eigen::Index>(idx[r]);
    out.features.row(static_cast<Eigen::Index>(r)) = features.row(src);
    out.labels(static_cast<Eigen::Index>(r)) = labels(src);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standardization

Standardization Standardization::identity(std::size_t num_features) {
  return {std::vector<double>(num_features, 0.0), std::vector<double>(num_features, 1.0),
          std::vector<bool>(num_features, false)};
}

Matrix Standardization::apply(const Matrix& features) const {
  if (static_cast<std::size_t>(features.cols()) != size())
    throw DataError(
        fmt::format("standardization expects {} features, got {}", size(), features.cols()));
  Matrix out = features;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    out.col(j) = (out.col(j).array() - means[k]) / scales[k];
  }
  return out;
}

Matrix Standardization::invert(const Matrix& standardized) const {
  Matrix out = standardized;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    out.col(j) = out.col(j).array() * scales[k] + means[k];
  }
  return out;
}

std::pair<Dataset, Standardization> standardize(const Dataset& d) {
  const auto f = d.num_features();
  const auto n = d.features.rows();
  Standardization s = Standardization::identity(f);
  for (std::size_t k = 0; k < f; ++k) {
    const auto col = d.features.col(static_cast<Eigen::Index>(k));
    const double m = n > 0 ? col.mean() : 0.0;
    s.means[k] = m;
    double sd = 0.0;
    if (n >= 2) sd = std::sqrt((col.array() - m).square().sum() / static_cast<double>(n - 1));
    if (sd > 0.0 && std::isfinite(sd)) {
      s.scales[k] = sd;
    } else {
      s.scales[k] = 1.0;
      s.constant[k] = true;
    }
  }
  Dataset out = d;
  out.features = s.apply(d.features);
  return {std::move(out), std::move(s)};
}

Dataset unstandardize(const Dataset& d, const Standardization& s) {
  Dataset out = d;
  out.features = s.invert(d.features);
  return out;
}

Matrix design_matrix(const Matrix& features) {
  Matrix x(features.rows(), features.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(features.cols()) = features;
  return x;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Splits RFC-4180 style records: quoted fields may hold commas, doubled
// quotes and line breaks. Returns records along with their 1-based line.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_records(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  char c;
  auto end_record = [&] {
    if (any || !fields.empty()) {
      fields.push_back(std::move(field));
      records.emplace_back(record_line, std::move(fields));
    }
    fields.clear();
    field.clear();
    any = false;
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        any = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        record_line = ++line;
        break;
      default:
        field.push_back(c);
        any = true;
    }
  }
  if (in_quotes) throw DataError(fmt::format("unterminated quoted field starting on line {}", record_line));
  end_record();
  return records;
}

bool parse_real(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& label_column, const LabelRule& rule) {
  auto records = read_records(in);
  if (records.empty()) throw DataError("empty CSV: no header");
  const auto& header = records.front().second;
  std::size_t label_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (trim(header[j]) == label_column) label_idx = j;
  const bool unlabeled = label_column.empty();
  if (!unlabeled && label_idx == header.size())
    throw DataError(fmt::format("label column '{}' not found", label_column));
  if (records.size() == 1) throw DataError("empty dataset: header only");

  Dataset d;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != label_idx) d.feature_names.push_back(trim(header[j]));
  const auto n = static_cast<Eigen::Index>(records.size() - 1);
  d.features.resize(n, static_cast<Eigen::Index>(d.feature_names.size()));
  d.labels.resize(n);

  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& [line, fields] = records[static_cast<std::size_t>(r) + 1];
    if (fields.size() != header.size())
      throw DataError(fmt::format("row {} (line {}): expected {} fields, got {}", r + 1, line,
                                  header.size(), fields.size()));
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_idx) continue;
      double v;
      if (!parse_real(fields[j], v))
        throw DataError(fmt::format("row {} (line {}): non-numeric value '{}' in column '{}'", r + 1,
                                    line, fields[j], header[j]));
      d.features(r, col++) = v;
    }
    if (unlabeled) {
      d.labels(r) = 0.0;
      continue;
    }
    const std::string raw = trim(fields[label_idx]);
    double label = 0.0;
    if (const auto* pv = std::get_if<PositiveValue>(&rule)) {
      label = raw == pv->value ? 1.0 : 0.0;
    } else {
      double v;
      if (!parse_real(raw, v))
        throw DataError(fmt::format("row {} (line {}): non-numeric label '{}'", r + 1, line, raw));
      label = v >= std::get<ThresholdAtLeast>(rule).threshold ? 1.0 : 0.0;
    }
    d.labels(r) = label;
  }
  return d;
}

Dataset load_csv(const std::string& path, const std::string& label_column, const LabelRule& rule) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  return parse_csv(in, label_column, rule);
}

std::string dataset_to_csv(const Dataset& d) {
  std::string out;
  for (const auto& name : d.feature_names) out += name + ",";
  out += "y\n";
  for (Eigen::Index r = 0; r < d.features.rows(); ++r) {
    for (Eigen::Index j = 0; j < d.features.cols(); ++j) out += fmt::format("{:.17g},", d.features(r, j));
    out += fmt::format("{}\n", static_cast<int>(d.labels(r)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

std::size_t SimSpec::n1() const {
  return static_cast<std::size_t>(std::floor(rho * static_cast<double>(n)));
}

void SimSpec::validate() const {
  if (n == 0) throw std::invalid_argument("simulate: n must be positive");
  if (!(rho > 0.0 && rho <= 0.5)) throw std::invalid_argument("simulate: rho must lie in (0, 0.5]");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("simulate: sigma must be positive");
  if (n1() == 0) throw std::invalid_argument("simulate: floor(rho * n) is zero");
}

Dataset simulate_mixture(const SimSpec& spec) {
  spec.validate();
  const double r2 = std::numbers::sqrt2;
  const double centers[2][2] = {{r2, 1.0}, {0.0, 1.0 + r2}};
  const std::size_t n1 = spec.n1();

  Rng rng(spec.seed);
  Dataset d;
  d.feature_names = {"x1", "x2"};
  d.features.resize(static_cast<Eigen::Index>(spec.n), 2);
  d.labels.resize(static_cast<Eigen::Index>(spec.n));
  for (std::size_t i = 0; i < spec.n; ++i) {
    const int label = i < n1 ? 0 : 1;
    const auto r = static_cast<Eigen::Index>(i);
    d.features(r, 0) = centers[label][0] + spec.sigma * rng.normal();
    d.features(r, 1) = centers[label][1] + spec.sigma * rng.normal();
    d.labels(r) = label;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Random numbers

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0, 1] x [0, 1).
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace softsvm

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace softsvm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Labeled observations: n x f features with binary {0, 1} labels.
struct Dataset {
  std::vector<std::string> feature_names;
  Matrix features;
  Vector labels;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t num_features() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t count_label(int label) const;
  /// Rows selected by index, in the given order.
  Dataset subset(const std::vector<std::size_t>& idx) const;
};

/// Per-feature centering and scaling recorded at fit time.
struct Standardization {
  std::vector<double> means;
  std::vector<double> scales;
  std::vector<bool> constant;

  static Standardization identity(std::size_t num_features);
  std::size_t size() const { return means.size(); }
  Matrix apply(const Matrix& features) const;
  Matrix invert(const Matrix& standardized) const;
};

/// Center each feature to mean 0 and scale to unit sample standard deviation.
/// Constant features get scale 1 and are flagged.
std::pair<Dataset, Standardization> standardize(const Dataset& d);
Dataset unstandardize(const Dataset& d, const Standardization& s);

/// n x (f + 1) matrix with a leading column of ones.
Matrix design_matrix(const Matrix& features);
inline Matrix design_matrix(const Dataset& d) { return design_matrix(d.features); }

/// How to turn the label column into {0, 1}: exact string match on the
/// positive value, or numeric value >= threshold.
struct PositiveValue {
  std::string value;
};
struct ThresholdAtLeast {
  double threshold;
};
using LabelRule = std::variant<PositiveValue, ThresholdAtLeast>;

/// An empty label column name reads every column as a feature and sets all labels to 0.
Dataset parse_csv(std::istream& in, const std::string& label_column, const LabelRule& rule);
Dataset load_csv(const std::string& path, const std::string& label_column, const LabelRule& rule);
/// Features in order followed by a "y" column.
std::string dataset_to_csv(const Dataset& d);

/// Two-class Gaussian mixture: floor(rho n) label-0 points around (sqrt 2, 1)
/// and the rest label-1 around (0, 1 + sqrt 2), isotropic standard deviation sigma.
struct SimSpec {
  std::size_t n = 100;
  double rho = 0.5;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  std::size_t n1() const;
  std::size_t n2() const { return n - n1(); }
  /// Throws std::invalid_argument if the settings are unusable.
  void validate() const;
};

Dataset simulate_mixture(const SimSpec& spec);

/// Seedable pseudorandom source with a fixed algorithm: mt19937_64 words,
/// 53-bit uniforms, Box-Muller normals, rejection-sampled bounded integers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Deterministic seed mixing (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace softsvm

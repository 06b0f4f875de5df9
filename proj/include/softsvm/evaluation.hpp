#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "softsvm/solver.hpp"

namespace softsvm {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Cross-validation results. Cells are indexed [lambda][replication][fold];
/// a missing cell is a fold whose training part held a single class.
struct CvReport {
  std::vector<double> lambda_grid;
  std::size_t reps = 0;
  std::size_t folds = 0;
  std::vector<std::optional<double>> cells;
  /// Per lambda, per replication: mean over available folds (NaN if none).
  std::vector<std::vector<double>> replication_means;
  /// Per lambda: mean of the available replication means (NaN if none).
  std::vector<double> means;
  double selected_lambda = 0.0;
  std::uint64_t seed = 0;

  const std::optional<double>& cell(std::size_t lambda_idx, std::size_t rep, std::size_t fold) const {
    return cells[(lambda_idx * reps + rep) * folds + fold];
  }
};

struct CvOptions {
  std::size_t folds = 10;
  std::size_t reps = 20;
  std::uint64_t seed = 0;
  bool standardize = true;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

struct Evaluation {
  ConfusionMatrix confusion;
  double mcc = 0.0;
  double accuracy = 0.0;
};

namespace evaluation {

/// Matthews correlation coefficient; 0 when any marginal is empty.
double mcc(const ConfusionMatrix& cm);

ConfusionMatrix confusion(std::span<const double> truth, std::span<const int> predicted);

/// Seeded permutation of 0..n-1 cut into k folds whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// For each replication r (fold seed = seed + r) and fold, fits every lambda
/// on the training part and scores MCC on the held-out part. Selects the
/// lambda with the largest mean MCC, ties going to the smallest lambda.
CvReport cross_validate(const Dataset& d, const FitConfig& base, std::span<const double> lambda_grid,
                        const CvOptions& opts);

Evaluation evaluate(const FittedModel& m, const Matrix& features, const Vector& labels);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace evaluation
}  // namespace softsvm

#include "softsvm/evaluation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "softsvm/errors.hpp"
#include "softsvm/model.hpp"

namespace softsvm::evaluation {

double mcc(const ConfusionMatrix& cm) {
  const auto tp = static_cast<double>(cm.tp);
  const auto fp = static_cast<double>(cm.fp);
  const auto tn = static_cast<double>(cm.tn);
  const auto fn = static_cast<double>(cm.fn);
  const double a = tp + fp;
  const double b = tp + fn;
  const double c = tn + fp;
  const double d = tn + fn;
  if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) return 0.0;
  // Pairing the factors keeps the perfect and inverted cases exact.
  const double r = (tp * tn - fp * fn) / (std::sqrt(a * b) * std::sqrt(c * d));
  return std::clamp(r, -1.0, 1.0);
}

ConfusionMatrix confusion(std::span<const double> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("confusion: length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == 1.0;
    const bool guess = predicted[i] == 1;
    if (actual && guess) ++cm.tp;
    else if (!actual && guess) ++cm.fp;
    else if (!actual && !guess) ++cm.tn;
    else ++cm.fn;
  }
  return cm;
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) throw std::invalid_argument(fmt::format("kfold_split: need 2 <= k <= n, got k={} n={}", k, n));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Fisher-Yates with a fixed engine so folds reproduce across platforms.
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

CvReport cross_validate(const Dataset& d, const FitConfig& base, std::span<const double> lambda_grid,
                        const CvOptions& opts) {
  if (lambda_grid.empty()) throw std::invalid_argument("cross_validate: empty lambda grid");
  for (const double l : lambda_grid)
    if (!(l >= 0.0) || !std::isfinite(l)) throw std::invalid_argument("cross_validate: lambdas must be finite and >= 0");
  if (opts.reps == 0) throw std::invalid_argument("cross_validate: reps must be >= 1");
  const std::size_t n = d.rows();
  if (opts.folds < 2 || opts.folds > n)
    throw std::invalid_argument(fmt::format("cross_validate: need 2 <= folds <= n, got {} folds for n={}", opts.folds, n));
  if (d.count_label(0) == 0 || d.count_label(1) == 0)
    throw DataError("cross_validate: labels must contain both classes");
  base.validate();

  CvReport report;
  report.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  std::stable_sort(report.lambda_grid.begin(), report.lambda_grid.end());
  report.reps = opts.reps;
  report.folds = opts.folds;
  report.seed = opts.seed;
  const std::size_t nl = report.lambda_grid.size();
  report.cells.assign(nl * opts.reps * opts.folds, std::nullopt);

  std::vector<std::vector<std::vector<std::size_t>>> splits;
  for (std::size_t r = 0; r < opts.reps; ++r) splits.push_back(kfold_split(n, opts.folds, opts.seed + r));

  parallel_for(opts.reps * opts.folds, opts.threads, [&](std::size_t cell) {
    const std::size_t r = cell / opts.folds;
    const std::size_t f = cell % opts.folds;
    const auto& test_idx = splits[r][f];
    std::vector<std::size_t> train_idx;
    train_idx.reserve(n - test_idx.size());
    for (std::size_t g = 0; g < opts.folds; ++g)
      if (g != f) train_idx.insert(train_idx.end(), splits[r][g].begin(), splits[r][g].end());
    const Dataset train = d.subset(train_idx);
    if (train.count_label(0) == 0 || train.count_label(1) == 0) return;
    const Dataset test = d.subset(test_idx);
    for (std::size_t li = 0; li < nl; ++li) {
      FitConfig cfg = base;
      cfg.lambda = report.lambda_grid[li];
      const FittedModel m = solver::fit_dataset(train, cfg, opts.standardize);
      report.cells[(li * opts.reps + r) * opts.folds + f] = evaluate(m, test.features, test.labels).mcc;
    }
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.replication_means.assign(nl, std::vector<double>(opts.reps, nan));
  report.means.assign(nl, nan);
  for (std::size_t li = 0; li < nl; ++li) {
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t r = 0; r < opts.reps; ++r) {
      double acc = 0.0;
      std::size_t cnt = 0;
      for (std::size_t f = 0; f < opts.folds; ++f) {
        if (const auto& c = report.cell(li, r, f)) {
          acc += *c;
          ++cnt;
        }
      }
      if (cnt == 0) continue;
      report.replication_means[li][r] = acc / static_cast<double>(cnt);
      total += report.replication_means[li][r];
      ++used;
    }
    if (used > 0) report.means[li] = total / static_cast<double>(used);
  }

  std::size_t best = nl;
  for (std::size_t li = 0; li < nl; ++li) {
    if (std::isnan(report.means[li])) continue;
    if (best == nl || report.means[li] > report.means[best]) best = li;
  }
  if (best == nl) throw DataError("cross_validate: every training fold held a single class");
  report.selected_lambda = report.lambda_grid[best];
  return report;
}

Evaluation evaluate(const FittedModel& m, const Matrix& features, const Vector& labels) {
  if (features.rows() != labels.size()) throw std::invalid_argument("evaluate: shape mismatch");
  const Vector mu = model::predict_mu(m, features);
  const std::vector<int> yhat = model::classify(mu);
  Evaluation e;
  e.confusion = confusion(std::span(labels.data(), static_cast<std::size_t>(labels.size())), yhat);
  e.mcc = mcc(e.confusion);
  e.accuracy = e.confusion.total() == 0
                   ? 0.0
                   : static_cast<double>(e.confusion.tp + e.confusion.tn) / static_cast<double>(e.confusion.total());
  return e;
}

}  // namespace softsvm::evaluation

// softsvm command-line tool. Talks to the library only through softsvm.h.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "softsvm/softsvm.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNotConverged = 3, kInternal = 4 };

struct Failure {
  int code;
};

int exit_code(softsvm_status s) {
  switch (s) {
    case SOFTSVM_OK: return kOk;
    case SOFTSVM_ERR_INVALID_ARGUMENT:
    case SOFTSVM_ERR_DOMAIN: return kUsage;
    case SOFTSVM_ERR_DATA:
    case SOFTSVM_ERR_IO:
    case SOFTSVM_ERR_NUMERIC: return kData;
    default: return kInternal;
  }
}

void check(softsvm_status s) {
  if (s == SOFTSVM_OK) return;
  std::fprintf(stderr, "softsvm: %s: %s\n", softsvm_status_name(s), softsvm_last_error());
  throw Failure{exit_code(s)};
}

[[noreturn]] void usage(const std::string& msg) {
  std::fprintf(stderr, "softsvm: usage error: %s\n", msg.c_str());
  throw Failure{kUsage};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<softsvm_dataset, Deleter<softsvm_dataset, softsvm_dataset_free>>;
using ModelPtr = std::unique_ptr<softsvm_model, Deleter<softsvm_model, softsvm_model_free>>;
using ReportPtr = std::unique_ptr<softsvm_cv_report, Deleter<softsvm_cv_report, softsvm_cv_report_free>>;

std::vector<double> parse_list(const std::string& spec, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      usage(std::string(flag) + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) usage(std::string(flag) + ": empty list");
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::size_t len = 0;
  check(softsvm_parse_lambda_grid(spec.c_str(), nullptr, 0, &len));
  std::vector<double> grid(len);
  check(softsvm_parse_lambda_grid(spec.c_str(), grid.data(), grid.size(), &len));
  return grid;
}

struct DataFlags {
  std::string path;
  std::string label_col = "y";
  std::optional<std::string> positive;
  std::optional<double> threshold;

  void add(CLI::App* cmd) {
    cmd->add_option("--data", path, "input CSV")->required();
    cmd->add_option("--label-col", label_col, "label column name")->capture_default_str();
    auto* pos = cmd->add_option("--positive", positive, "label value mapped to 1 (default \"1\")");
    cmd->add_option("--threshold", threshold, "label = 1 when the label column is >= this value")->excludes(pos);
  }

  DatasetPtr load(bool labeled = true) const {
    softsvm_label_rule rule{positive ? positive->c_str() : nullptr, threshold.value_or(0.0), threshold ? 1 : 0};
    softsvm_dataset* ds = nullptr;
    check(softsvm_dataset_load_csv(path.c_str(), labeled ? label_col.c_str() : nullptr, &rule, &ds));
    return DatasetPtr(ds);
  }
};

struct FitFlags {
  double lambda = 0.0;
  std::optional<double> fix_kappa;
  std::optional<double> fix_alpha;
  bool no_standardize = false;
  bool expected_weights = false;
  int max_iter = 0;
  double epsilon = 0.0;

  void add(CLI::App* cmd, bool with_lambda) {
    if (with_lambda) cmd->add_option("--lambda", lambda, "ridge penalty")->capture_default_str();
    cmd->add_option("--fix-kappa", fix_kappa, "hold kappa at this value");
    cmd->add_option("--fix-alpha", fix_alpha, "hold alpha at this value");
    cmd->add_flag("--no-standardize", no_standardize, "fit on raw features");
    cmd->add_flag("--expected-weights", expected_weights, "Fisher scoring weights in the beta step");
    cmd->add_option("--max-iter", max_iter, "outer iteration cap (default 100)");
    cmd->add_option("--epsilon", epsilon, "relative objective tolerance (default 1e-8)");
  }

  softsvm_fit_config config() const {
    softsvm_fit_config c;
    softsvm_fit_config_init(&c);
    c.lambda = lambda;
    if (fix_kappa) {
      c.fix_kappa = 1;
      c.kappa_value = *fix_kappa;
    }
    if (fix_alpha) {
      c.fix_alpha = 1;
      c.alpha_value = *fix_alpha;
    }
    c.standardize = no_standardize ? 0 : 1;
    c.expected_weights = expected_weights ? 1 : 0;
    if (max_iter > 0) c.max_outer_iters = max_iter;
    if (epsilon > 0.0) c.epsilon = epsilon;
    return c;
  }
};

int run_simulate(std::size_t n, double rho, double sigma, std::uint64_t seed, const std::string& out) {
  softsvm_dataset* raw = nullptr;
  check(softsvm_dataset_simulate(n, rho, sigma, seed, &raw));
  DatasetPtr ds(raw);
  check(softsvm_dataset_write_csv(ds.get(), out.c_str()));
  std::printf("n1=%zu n2=%zu\n", softsvm_dataset_count_label(ds.get(), 0), softsvm_dataset_count_label(ds.get(), 1));
  return kOk;
}

int run_fit(const DataFlags& data, const FitFlags& flags, bool strict, const std::string& out) {
  const softsvm_fit_config cfg = flags.config();
  DatasetPtr ds = data.load();
  softsvm_model* raw = nullptr;
  check(softsvm_fit(ds.get(), &cfg, &raw));
  ModelPtr model(raw);
  check(softsvm_model_save(model.get(), out.c_str()));
  softsvm_model_summary s;
  check(softsvm_model_summary_get(model.get(), &s));
  std::printf("kappa=%.17g alpha=%.17g loglik=%.17g iterations=%d converged=%s\n", s.kappa, s.alpha,
              s.penalized_loglik, s.iterations, s.converged ? "true" : "false");
  if (strict && !s.converged) {
    std::fprintf(stderr, "softsvm: fit did not converge\n");
    return kNotConverged;
  }
  return kOk;
}

int run_predict(const std::string& model_path, const DataFlags& data, bool unlabeled,
                const softsvm_diagnose_options& opts, const std::string& out) {
  softsvm_model* raw = nullptr;
  check(softsvm_model_load(model_path.c_str(), &raw));
  ModelPtr model(raw);
  DatasetPtr ds = data.load(!unlabeled);
  check(softsvm_predict_write_csv(model.get(), ds.get(), &opts, out.c_str()));
  std::printf("rows=%zu\n", softsvm_dataset_rows(ds.get()));
  if (!unlabeled) {
    softsvm_evaluation e;
    check(softsvm_evaluate(model.get(), ds.get(), &e));
    std::printf("mcc=%.17g accuracy=%.17g\n", e.mcc, e.accuracy);
  }
  return kOk;
}

std::string sibling_csv(const std::string& json_path) {
  std::filesystem::path p(json_path);
  if (p.extension() == ".csv") return p.replace_extension(".cells.csv").string();
  return p.replace_extension(".csv").string();
}

int run_cv(const DataFlags& data, const FitFlags& flags, const std::string& grid_spec, const softsvm_cv_options& opts,
           const std::string& out) {
  const std::vector<double> grid = parse_grid(grid_spec);
  const softsvm_fit_config cfg = flags.config();
  DatasetPtr ds = data.load();
  softsvm_cv_report* raw = nullptr;
  check(softsvm_cross_validate(ds.get(), &cfg, grid.data(), grid.size(), &opts, &raw));
  ReportPtr report(raw);
  check(softsvm_cv_report_write_json(report.get(), out.c_str()));
  const std::string csv = sibling_csv(out);
  check(softsvm_cv_report_write_csv(report.get(), csv.c_str()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    std::printf("lambda=%.17g mean_mcc=%.17g\n", grid[i], softsvm_cv_report_mean(report.get(), i));
  std::printf("selected_lambda=%.17g\n", softsvm_cv_report_selected_lambda(report.get()));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-SVM regression: simulate, fit, predict, cross-validate, curves, bench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(softsvm_version()));

  auto* sim = app.add_subcommand("simulate", "draw the two-class Gaussian mixture");
  std::size_t sim_n = 100;
  double sim_rho = 0.5;
  double sim_sigma = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  sim->add_option("--n", sim_n, "sample size")->capture_default_str();
  sim->add_option("--rho", sim_rho, "share of label-0 points, in (0, 0.5]")->capture_default_str();
  sim->add_option("--sigma", sim_sigma, "component standard deviation")->capture_default_str();
  sim->add_option("--seed", seed, "random seed")->capture_default_str();
  sim->add_option("--out", out, "output CSV")->required();

  auto* fit = app.add_subcommand("fit", "fit a Soft-SVM regression");
  DataFlags fit_data;
  FitFlags fit_flags;
  bool strict = false;
  fit_data.add(fit);
  fit_flags.add(fit, true);
  fit->add_flag("--strict", strict, "exit 3 when the fit does not converge");
  fit->add_option("--out", out, "model JSON")->required();

  auto* predict = app.add_subcommand("predict", "fitted means, labels and point types");
  std::string model_path;
  DataFlags pred_data;
  bool unlabeled = false;
  softsvm_diagnose_options diag;
  softsvm_diagnose_options_init(&diag);
  predict->add_option("--model", model_path, "model JSON")->required();
  pred_data.add(predict);
  predict->add_flag("--unlabeled", unlabeled, "every column is a feature");
  predict->add_option("--v-threshold", diag.v_threshold, "variance weight above which a point is a soft SV")
      ->capture_default_str();
  predict->add_option("--mu-band", diag.mu_band, "half-width of the mean band around 0.5")->capture_default_str();
  predict->add_option("--out", out, "predictions CSV")->required();

  auto* cv = app.add_subcommand("cv", "cross-validate the ridge penalty");
  DataFlags cv_data;
  FitFlags cv_flags;
  std::string grid = "1e-4:1e2:13";
  softsvm_cv_options cv_opts;
  softsvm_cv_options_init(&cv_opts);
  cv_data.add(cv);
  cv_flags.add(cv, false);
  cv->add_option("--folds", cv_opts.folds, "folds per replication")->capture_default_str();
  cv->add_option("--reps", cv_opts.reps, "replications")->capture_default_str();
  cv->add_option("--grid", grid, "lambda grid lo:hi:count, log-spaced")->capture_default_str();
  cv->add_option("--seed", cv_opts.seed, "fold seed")->capture_default_str();
  cv->add_option("--threads", cv_opts.threads, "worker threads, 0 for all cores")->capture_default_str();
  cv->add_option("--out", out, "report JSON; cell CSV goes alongside")->required();

  auto* curves = app.add_subcommand("curves", "tabulate family functions");
  double kappa = 1.0;
  std::optional<double> alpha;
  std::optional<double> delta;
  bool delta_of_kappa = false;
  std::string range;
  curves->add_option("--kappa", kappa, "dispersion kappa")->required();
  auto* a_opt = curves->add_option("--alpha", alpha, "alpha (default 0)");
  auto* d_opt = curves->add_option("--delta", delta, "delta = alpha / kappa");
  auto* dk_opt = curves->add_flag("--delta-of-kappa", delta_of_kappa, "delta = 1 - 1/kappa");
  a_opt->excludes(d_opt)->excludes(dk_opt);
  d_opt->excludes(dk_opt);
  curves->add_option("--range", range, "theta grid lo:hi:step")->required();
  curves->add_option("--out", out, "output CSV")->required();

  auto* bench = app.add_subcommand("bench", "simulation study over rho and sigma");
  softsvm_bench_config bcfg;
  softsvm_bench_config_init(&bcfg);
  std::string rhos = "0.125,0.25,0.5";
  std::string sigmas = "0.5,1,1.5";
  std::string bench_grid = "1e-4:1e2:7";
  bool bench_strict = false;
  bench->add_option("--rhos", rhos, "comma-separated imbalance levels")->capture_default_str();
  bench->add_option("--sigmas", sigmas, "comma-separated spreads")->capture_default_str();
  bench->add_option("--n", bcfg.n, "sample size per draw")->capture_default_str();
  bench->add_option("--reps", bcfg.reps, "replications per cell")->capture_default_str();
  bench->add_option("--seed", bcfg.seed, "base seed")->capture_default_str();
  bench->add_option("--grid", bench_grid, "lambda grid for the Soft-SVM cross-validation")->capture_default_str();
  bench->add_option("--folds", bcfg.cv_folds, "cross-validation folds")->capture_default_str();
  bench->add_option("--threads", bcfg.threads, "worker threads, 0 for all cores")->capture_default_str();
  bench->add_flag("--strict", bench_strict, "exit 3 when any cell failed or did not converge");
  bench->add_option("--out", out, "results CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return run_simulate(sim_n, sim_rho, sim_sigma, seed, out);
    if (*fit) return run_fit(fit_data, fit_flags, strict, out);
    if (*predict) return run_predict(model_path, pred_data, unlabeled, diag, out);
    if (*cv) return run_cv(cv_data, cv_flags, grid, cv_opts, out);
    if (*curves) {
      double a = alpha.value_or(0.0);
      if (delta) a = *delta * kappa;
      if (delta_of_kappa) {
        if (!(kappa >= 1.0)) usage("--delta-of-kappa needs kappa >= 1");
        a = (1.0 - 1.0 / kappa) * kappa;
      }
      check(softsvm_curves_write_csv(kappa, a, range.c_str(), out.c_str()));
      return kOk;
    }
    if (*bench) {
      const auto r = parse_list(rhos, "--rhos");
      const auto s = parse_list(sigmas, "--sigmas");
      const auto g = parse_grid(bench_grid);
      bcfg.rhos = r.data();
      bcfg.n_rhos = r.size();
      bcfg.sigmas = s.data();
      bcfg.n_sigmas = s.size();
      bcfg.lambda_grid = g.data();
      bcfg.grid_len = g.size();
      std::size_t rows = 0, failed = 0, not_converged = 0;
      check(softsvm_bench_run(&bcfg, out.c_str(), &rows, &failed, &not_converged));
      std::printf("rows=%zu failed=%zu not_converged=%zu\n", rows, failed, not_converged);
      return bench_strict && (failed > 0 || not_converged > 0) ? kNotConverged : kOk;
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kUsage;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "softsvm/softsvm.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("softsvm_capi_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(softsvm_status_name(SOFTSVM_OK)) == "ok");
  CHECK(std::string(softsvm_status_name(SOFTSVM_ERR_DATA)) == "data error");
  CHECK(std::string(softsvm_version()).size() > 0);
  double out = 0;
  CHECK(softsvm_family_eval(0.0, 1.0, SOFTSVM_FN_MEAN, 0.0, &out) == SOFTSVM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(softsvm_last_error()).find("kappa") != std::string::npos);
  CHECK(softsvm_family_eval(1.0, 0.0, SOFTSVM_FN_INVERSE_MEAN, 1.5, &out) == SOFTSVM_ERR_DOMAIN);
  CHECK(softsvm_family_eval(1.0, 0.0, SOFTSVM_FN_MEAN, 0.0, nullptr) == SOFTSVM_ERR_INVALID_ARGUMENT);
  CHECK(softsvm_family_eval(1.0, 0.0, SOFTSVM_FN_MEAN, 0.0, &out) == SOFTSVM_OK);
  CHECK(std::string(softsvm_last_error()).empty());
  CHECK(out == 0.5);
}

TEST_CASE("family evaluation") {
  double out = 0;
  REQUIRE(softsvm_family_eval(1.0, 0.0, SOFTSVM_FN_CUMULANT, 0.0, &out) == SOFTSVM_OK);
  CHECK(out == doctest::Approx(std::log(2.0)));
  REQUIRE(softsvm_family_eval(1.0, 0.0, SOFTSVM_FN_LINK, 0.9, &out) == SOFTSVM_OK);
  CHECK(out == doctest::Approx(std::log(9.0)));
  REQUIRE(softsvm_family_eval(1.0, 1.0, SOFTSVM_FN_VARIANCE_OF_MEAN, 0.5, &out) == SOFTSVM_OK);
  CHECK(out == doctest::Approx(0.1049936));
  double theta = 0, eta = 0;
  REQUIRE(softsvm_family_eval(5.0, 4.0, SOFTSVM_FN_THETA_FROM_ETA, 0.7, &theta) == SOFTSVM_OK);
  REQUIRE(softsvm_family_eval(5.0, 4.0, SOFTSVM_FN_ETA_FROM_THETA, theta, &eta) == SOFTSVM_OK);
  CHECK(eta == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(softsvm_family_eval(1.0, 0.0, static_cast<softsvm_family_fn>(99), 0.0, &out) ==
        SOFTSVM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("dataset, fit, predict, serialize") {
  TempDir tmp;
  softsvm_dataset* ds = nullptr;
  REQUIRE(softsvm_dataset_simulate(100, 0.25, 1.0, 4, &ds) == SOFTSVM_OK);
  CHECK(softsvm_dataset_rows(ds) == 100);
  CHECK(softsvm_dataset_features(ds) == 2);
  CHECK(softsvm_dataset_count_label(ds, 0) == 25);
  REQUIRE(softsvm_dataset_write_csv(ds, tmp.file("d.csv").c_str()) == SOFTSVM_OK);

  softsvm_dataset* loaded = nullptr;
  REQUIRE(softsvm_dataset_load_csv(tmp.file("d.csv").c_str(), "y", nullptr, &loaded) == SOFTSVM_OK);
  CHECK(softsvm_dataset_count_label(loaded, 1) == 75);
  softsvm_dataset* bad = nullptr;
  CHECK(softsvm_dataset_load_csv(tmp.file("d.csv").c_str(), "nope", nullptr, &bad) == SOFTSVM_ERR_DATA);
  CHECK(bad == nullptr);
  CHECK(softsvm_dataset_load_csv(tmp.file("missing.csv").c_str(), "y", nullptr, &bad) == SOFTSVM_ERR_IO);
  softsvm_dataset* unlabeled = nullptr;
  REQUIRE(softsvm_dataset_load_csv(tmp.file("d.csv").c_str(), nullptr, nullptr, &unlabeled) == SOFTSVM_OK);
  CHECK(softsvm_dataset_features(unlabeled) == 3);
  softsvm_label_rule rule{nullptr, 0.5, 1};
  softsvm_dataset* thresholded = nullptr;
  REQUIRE(softsvm_dataset_load_csv(tmp.file("d.csv").c_str(), "y", &rule, &thresholded) == SOFTSVM_OK);
  CHECK(softsvm_dataset_count_label(thresholded, 1) == 75);

  softsvm_fit_config cfg;
  softsvm_fit_config_init(&cfg);
  CHECK(cfg.epsilon == 1e-8);
  CHECK(cfg.max_outer_iters == 100);
  CHECK(cfg.standardize == 1);
  cfg.lambda = 0.1;
  softsvm_model* m = nullptr;
  REQUIRE(softsvm_fit(loaded, &cfg, &m) == SOFTSVM_OK);
  softsvm_model_summary s;
  REQUIRE(softsvm_model_summary_get(m, &s) == SOFTSVM_OK);
  CHECK(s.converged == 1);
  CHECK(s.n_features == 2);
  CHECK(s.lambda == 0.1);
  std::vector<double> coef(2);
  CHECK(softsvm_model_coefficients(m, coef.data(), 1) == SOFTSVM_ERR_INVALID_ARGUMENT);
  REQUIRE(softsvm_model_coefficients(m, coef.data(), 2) == SOFTSVM_OK);
  double margin = 0;
  REQUIRE(softsvm_model_soft_margin(m, &margin) == SOFTSVM_OK);
  CHECK(margin == doctest::Approx((s.alpha / s.kappa) / std::hypot(coef[0], coef[1])));

  char* json = nullptr;
  REQUIRE(softsvm_model_to_json(m, &json) == SOFTSVM_OK);
  softsvm_model* back = nullptr;
  REQUIRE(softsvm_model_from_json(json, &back) == SOFTSVM_OK);
  REQUIRE(softsvm_model_save(m, tmp.file("m.json").c_str()) == SOFTSVM_OK);
  CHECK(slurp(tmp.file("m.json")) == std::string(json));
  softsvm_string_free(json);
  softsvm_model* from_file = nullptr;
  REQUIRE(softsvm_model_load(tmp.file("m.json").c_str(), &from_file) == SOFTSVM_OK);
  softsvm_model* broken = nullptr;
  CHECK(softsvm_model_from_json("{", &broken) == SOFTSVM_ERR_DATA);
  CHECK(broken == nullptr);

  softsvm_diagnose_options opts;
  softsvm_diagnose_options_init(&opts);
  CHECK(opts.v_threshold == 1.0);
  CHECK(opts.mu_band == 0.25);
  std::vector<double> mu(100), w(100), mu2(100);
  std::vector<int> yhat(100), type(100);
  REQUIRE(softsvm_predict(m, loaded, &opts, mu.data(), yhat.data(), w.data(), type.data(), 100) == SOFTSVM_OK);
  REQUIRE(softsvm_predict(from_file, loaded, nullptr, mu2.data(), nullptr, nullptr, nullptr, 100) == SOFTSVM_OK);
  CHECK(mu == mu2);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(yhat[i] == (mu[i] > 0.5 ? 1 : 0));
    CHECK(type[i] >= 0);
    CHECK(type[i] <= 2);
  }
  CHECK(softsvm_predict(m, loaded, &opts, mu.data(), nullptr, nullptr, nullptr, 99) == SOFTSVM_ERR_INVALID_ARGUMENT);
  CHECK(softsvm_predict(m, unlabeled, &opts, nullptr, nullptr, nullptr, nullptr, 100) == SOFTSVM_ERR_DATA);
  REQUIRE(softsvm_predict_write_csv(m, loaded, &opts, tmp.file("p.csv").c_str()) == SOFTSVM_OK);
  CHECK(slurp(tmp.file("p.csv")).rfind("mu,yhat,variance_weight,point_type\n", 0) == 0);

  softsvm_evaluation e;
  REQUIRE(softsvm_evaluate(m, loaded, &e) == SOFTSVM_OK);
  CHECK(e.tp + e.fp + e.tn + e.fn == 100);
  CHECK(e.mcc > 0.5);

  softsvm_model_free(m);
  softsvm_model_free(back);
  softsvm_model_free(from_file);
  softsvm_dataset_free(ds);
  softsvm_dataset_free(loaded);
  softsvm_dataset_free(unlabeled);
  softsvm_dataset_free(thresholded);
  softsvm_dataset_free(nullptr);
  softsvm_model_free(nullptr);
}

TEST_CASE("fixed family through the C API") {
  softsvm_dataset* ds = nullptr;
  REQUIRE(softsvm_dataset_simulate(80, 0.5, 1.0, 1, &ds) == SOFTSVM_OK);
  softsvm_fit_config cfg;
  softsvm_fit_config_init(&cfg);
  cfg.fix_kappa = 1;
  cfg.kappa_value = 1.0;
  cfg.fix_alpha = 1;
  cfg.alpha_value = 0.0;
  softsvm_model* m = nullptr;
  REQUIRE(softsvm_fit(ds, &cfg, &m) == SOFTSVM_OK);
  softsvm_model_summary s;
  softsvm_model_summary_get(m, &s);
  CHECK(s.kappa == 1.0);
  CHECK(s.alpha == 0.0);
  cfg.nu = 2.0;
  softsvm_model* bad = nullptr;
  CHECK(softsvm_fit(ds, &cfg, &bad) == SOFTSVM_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  softsvm_model_free(m);
  softsvm_dataset_free(ds);
}

TEST_CASE("grid parsing and cross-validation") {
  std::size_t len = 0;
  REQUIRE(softsvm_parse_lambda_grid("1e-2:1e2:5", nullptr, 0, &len) == SOFTSVM_OK);
  CHECK(len == 5);
  std::vector<double> grid(len);
  REQUIRE(softsvm_parse_lambda_grid("1e-2:1e2:5", grid.data(), grid.size(), &len) == SOFTSVM_OK);
  CHECK(grid == std::vector<double>{0.01, 0.1, 1, 10, 100});
  CHECK(softsvm_parse_lambda_grid("1e-2:1e2:5", grid.data(), 2, &len) == SOFTSVM_ERR_INVALID_ARGUMENT);
  CHECK(softsvm_parse_lambda_grid("bad", grid.data(), 5, &len) == SOFTSVM_ERR_INVALID_ARGUMENT);

  TempDir tmp;
  softsvm_dataset* ds = nullptr;
  REQUIRE(softsvm_dataset_simulate(60, 0.5, 1.0, 3, &ds) == SOFTSVM_OK);
  softsvm_fit_config cfg;
  softsvm_fit_config_init(&cfg);
  softsvm_cv_options o;
  softsvm_cv_options_init(&o);
  CHECK(o.folds == 10);
  CHECK(o.reps == 20);
  CHECK(o.seed == 0);
  o.folds = 5;
  o.reps = 2;
  softsvm_cv_report* r = nullptr;
  REQUIRE(softsvm_cross_validate(ds, &cfg, grid.data(), grid.size(), &o, &r) == SOFTSVM_OK);
  CHECK(softsvm_cv_report_grid_size(r) == 5);
  const double sel = softsvm_cv_report_selected_lambda(r);
  CHECK(std::find(grid.begin(), grid.end(), sel) != grid.end());
  CHECK(std::isnan(softsvm_cv_report_mean(r, 99)));
  REQUIRE(softsvm_cv_report_write_json(r, tmp.file("r.json").c_str()) == SOFTSVM_OK);
  REQUIRE(softsvm_cv_report_write_csv(r, tmp.file("r.csv").c_str()) == SOFTSVM_OK);
  CHECK(slurp(tmp.file("r.csv")).rfind("lambda,rep,fold,mcc\n", 0) == 0);
  softsvm_cv_report_free(r);
  o.folds = 1000;
  CHECK(softsvm_cross_validate(ds, &cfg, grid.data(), grid.size(), &o, &r) == SOFTSVM_ERR_INVALID_ARGUMENT);
  softsvm_dataset_free(ds);
}

TEST_CASE("curves and bench") {
  TempDir tmp;
  REQUIRE(softsvm_curves_write_csv(1.0, 0.0, "-1:1:0.5", tmp.file("c.csv").c_str()) == SOFTSVM_OK);
  std::istringstream in(slurp(tmp.file("c.csv")));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 6);
  CHECK(softsvm_curves_write_csv(1.0, 0.0, "1:0:1", tmp.file("x.csv").c_str()) == SOFTSVM_ERR_INVALID_ARGUMENT);
  CHECK_FALSE(fs::exists(tmp.file("x.csv")));

  softsvm_bench_config b;
  softsvm_bench_config_init(&b);
  CHECK(b.n_rhos == 3);
  CHECK(b.n_sigmas == 3);
  CHECK(b.reps == 50);
  CHECK(b.n == 100);
  const double rho = 0.5, sigma = 1.0;
  b.rhos = &rho;
  b.n_rhos = 1;
  b.sigmas = &sigma;
  b.n_sigmas = 1;
  b.reps = 1;
  b.threads = 1;
  std::size_t rows = 0, failed = 9, nc = 9;
  REQUIRE(softsvm_bench_run(&b, tmp.file("b.csv").c_str(), &rows, &failed, &nc) == SOFTSVM_OK);
  CHECK(rows == 2);
  CHECK(failed == 0);
  CHECK(nc == 0);
}

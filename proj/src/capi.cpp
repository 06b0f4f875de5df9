// extern "C" surface over the C++ core.

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "softsvm/bench.hpp"
#include "softsvm/curves.hpp"
#include "softsvm/errors.hpp"
#include "softsvm/evaluation.hpp"
#include "softsvm/io.hpp"
#include "softsvm/model.hpp"
#include "softsvm/softsvm.h"

struct softsvm_dataset {
  softsvm::Dataset data;
};

struct softsvm_model {
  softsvm::FittedModel model;
};

struct softsvm_cv_report {
  softsvm::CvReport report;
};

namespace {

thread_local std::string last_error;

template <class F>
softsvm_status guarded(F&& fn) {
  last_error.clear();
  try {
    fn();
    return SOFTSVM_OK;
  } catch (const softsvm::DataError& e) {
    last_error = e.what();
    return SOFTSVM_ERR_DATA;
  } catch (const softsvm::IoError& e) {
    last_error = e.what();
    return SOFTSVM_ERR_IO;
  } catch (const softsvm::SingularSystem& e) {
    last_error = e.what();
    return SOFTSVM_ERR_NUMERIC;
  } catch (const std::domain_error& e) {
    last_error = e.what();
    return SOFTSVM_ERR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return SOFTSVM_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SOFTSVM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return SOFTSVM_ERR_INTERNAL;
  }
}

template <class T>
const T& deref(const T* p, const char* what) {
  if (p == nullptr) throw std::invalid_argument(std::string(what) + " is NULL");
  return *p;
}

std::string cstr(const char* s, const char* what) {
  if (s == nullptr) throw std::invalid_argument(std::string(what) + " is NULL");
  return s;
}

template <class T>
void require_out(T** out) {
  if (out == nullptr) throw std::invalid_argument("output pointer is NULL");
  *out = nullptr;
}

softsvm::FitConfig to_cpp(const softsvm_fit_config& c) {
  softsvm::FitConfig f;
  f.lambda = c.lambda;
  f.epsilon = c.epsilon;
  f.nu = c.nu;
  f.max_outer_iters = c.max_outer_iters;
  f.max_newton_iters = c.max_newton_iters;
  f.kappa_bounds = {c.kappa_min, c.kappa_max};
  f.alpha_bounds = {c.alpha_min, c.alpha_max};
  if (c.fix_kappa) f.fix_kappa = c.kappa_value;
  if (c.fix_alpha) f.fix_alpha = c.alpha_value;
  f.weight_mode = c.expected_weights ? softsvm::WeightMode::Expected : softsvm::WeightMode::Observed;
  f.fd_step = c.fd_step;
  f.validate();
  return f;
}

softsvm::DiagnoseOptions to_cpp(const softsvm_diagnose_options* o) {
  softsvm::DiagnoseOptions d;
  if (o) {
    d.v_threshold = o->v_threshold;
    d.mu_band = o->mu_band;
  }
  return d;
}

std::vector<double> to_vector(const double* p, size_t n, const char* what) {
  if (n > 0 && p == nullptr) throw std::invalid_argument(std::string(what) + " is NULL");
  return std::vector<double>(p, p + n);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const double kDefaultRhos[] = {0.125, 0.25, 0.5};
const double kDefaultSigmas[] = {0.5, 1.0, 1.5};
const double kDefaultGrid[] = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};

}  // namespace

extern "C" {

const char* softsvm_last_error(void) { return last_error.c_str(); }

const char* softsvm_status_name(softsvm_status status) {
  switch (status) {
    case SOFTSVM_OK: return "ok";
    case SOFTSVM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SOFTSVM_ERR_DATA: return "data error";
    case SOFTSVM_ERR_IO: return "i/o error";
    case SOFTSVM_ERR_DOMAIN: return "domain error";
    case SOFTSVM_ERR_NUMERIC: return "numeric error";
    case SOFTSVM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* softsvm_version(void) { return "1.0.0"; }

void softsvm_string_free(char* s) { std::free(s); }

softsvm_status softsvm_family_eval(double kappa, double alpha, softsvm_family_fn fn, double x, double* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("output pointer is NULL");
    namespace fam = softsvm::family;
    const softsvm::FamilyParams p(kappa, alpha);
    switch (fn) {
      case SOFTSVM_FN_CUMULANT: *out = fam::cumulant(p, x); break;
      case SOFTSVM_FN_MEAN: *out = fam::mean(p, x); break;
      case SOFTSVM_FN_VARIANCE: *out = fam::variance_at_theta(p, x); break;
      case SOFTSVM_FN_THETA_FROM_ETA: *out = fam::theta_from_eta(p, x); break;
      case SOFTSVM_FN_ETA_FROM_THETA: *out = fam::eta_from_theta(p, x); break;
      case SOFTSVM_FN_INVERSE_MEAN: *out = fam::inverse_mean(p, x); break;
      case SOFTSVM_FN_LINK: *out = fam::link(p, x); break;
      case SOFTSVM_FN_COMPOSITE_MEAN: *out = fam::composite_mean(p, x); break;
      case SOFTSVM_FN_VARIANCE_OF_MEAN: *out = fam::variance_of_mean(p, x); break;
      default: throw std::invalid_argument("unknown family function");
    }
  });
}

softsvm_status softsvm_curves_write_csv(double kappa, double alpha, const char* range_spec, const char* path) {
  return guarded([&] {
    const softsvm::FamilyParams p(kappa, alpha);
    const auto thetas = softsvm::io::parse_range(cstr(range_spec, "range"));
    const std::string csv = softsvm::family::curves_to_csv(softsvm::family::curves(p, thetas));
    softsvm::io::write_file(cstr(path, "path"), csv);
  });
}

softsvm_status softsvm_dataset_load_csv(const char* path, const char* label_column, const softsvm_label_rule* rule,
                                        softsvm_dataset** out) {
  return guarded([&] {
    require_out(out);
    softsvm::LabelRule r = softsvm::PositiveValue{"1"};
    if (rule && rule->use_threshold) {
      r = softsvm::ThresholdAtLeast{rule->threshold};
    } else if (rule && rule->positive_value) {
      r = softsvm::PositiveValue{rule->positive_value};
    }
    auto ds = std::make_unique<softsvm_dataset>();
    ds->data = softsvm::load_csv(cstr(path, "path"), label_column ? label_column : "", r);
    *out = ds.release();
  });
}

softsvm_status softsvm_dataset_simulate(size_t n, double rho, double sigma, uint64_t seed, softsvm_dataset** out) {
  return guarded([&] {
    require_out(out);
    auto ds = std::make_unique<softsvm_dataset>();
    ds->data = softsvm::simulate_mixture({n, rho, sigma, seed});
    *out = ds.release();
  });
}

softsvm_status softsvm_dataset_write_csv(const softsvm_dataset* ds, const char* path) {
  return guarded([&] {
    const std::string csv = softsvm::dataset_to_csv(deref(ds, "dataset").data);
    softsvm::io::write_file(cstr(path, "path"), csv);
  });
}

size_t softsvm_dataset_rows(const softsvm_dataset* ds) { return ds ? ds->data.rows() : 0; }
size_t softsvm_dataset_features(const softsvm_dataset* ds) { return ds ? ds->data.num_features() : 0; }
size_t softsvm_dataset_count_label(const softsvm_dataset* ds, int label) {
  return ds ? ds->data.count_label(label) : 0;
}
void softsvm_dataset_free(softsvm_dataset* ds) { delete ds; }

void softsvm_fit_config_init(softsvm_fit_config* cfg) {
  if (!cfg) return;
  const softsvm::FitConfig d;
  *cfg = softsvm_fit_config{};
  cfg->lambda = d.lambda;
  cfg->epsilon = d.epsilon;
  cfg->nu = d.nu;
  cfg->max_outer_iters = d.max_outer_iters;
  cfg->max_newton_iters = d.max_newton_iters;
  cfg->kappa_min = d.kappa_bounds.first;
  cfg->kappa_max = d.kappa_bounds.second;
  cfg->alpha_min = d.alpha_bounds.first;
  cfg->alpha_max = d.alpha_bounds.second;
  cfg->kappa_value = 1.0;
  cfg->alpha_value = 0.0;
  cfg->fd_step = d.fd_step;
  cfg->standardize = 1;
}

softsvm_status softsvm_fit(const softsvm_dataset* ds, const softsvm_fit_config* cfg, softsvm_model** out) {
  return guarded([&] {
    require_out(out);
    const auto& c = deref(cfg, "config");
    auto m = std::make_unique<softsvm_model>();
    m->model = softsvm::solver::fit_dataset(deref(ds, "dataset").data, to_cpp(c), c.standardize != 0);
    *out = m.release();
  });
}

softsvm_status softsvm_model_summary_get(const softsvm_model* m, softsvm_model_summary* out) {
  return guarded([&] {
    const auto& mm = deref(m, "model").model;
    if (!out) throw std::invalid_argument("output pointer is NULL");
    *out = {mm.kappa_hat, mm.alpha_hat, mm.lambda, mm.beta0, mm.penalized_loglik, mm.n_iters, mm.converged ? 1 : 0,
            mm.num_features()};
  });
}

softsvm_status softsvm_model_coefficients(const softsvm_model* m, double* out, size_t len) {
  return guarded([&] {
    const auto& mm = deref(m, "model").model;
    if (len != mm.num_features()) throw std::invalid_argument("coefficient buffer length differs from feature count");
    if (len > 0 && !out) throw std::invalid_argument("output pointer is NULL");
    for (size_t j = 0; j < len; ++j) out[j] = mm.beta(static_cast<Eigen::Index>(j));
  });
}

softsvm_status softsvm_model_soft_margin(const softsvm_model* m, double* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("output pointer is NULL");
    *out = softsvm::model::soft_margin(deref(m, "model").model);
  });
}

softsvm_status softsvm_model_to_json(const softsvm_model* m, char** out) {
  return guarded([&] {
    require_out(out);
    *out = duplicate(softsvm::io::model_to_json(deref(m, "model").model));
  });
}

softsvm_status softsvm_model_from_json(const char* json, softsvm_model** out) {
  return guarded([&] {
    require_out(out);
    auto m = std::make_unique<softsvm_model>();
    m->model = softsvm::io::model_from_json(cstr(json, "json"));
    *out = m.release();
  });
}

softsvm_status softsvm_model_save(const softsvm_model* m, const char* path) {
  return guarded([&] {
    const std::string json = softsvm::io::model_to_json(deref(m, "model").model);
    softsvm::io::write_file(cstr(path, "path"), json);
  });
}

softsvm_status softsvm_model_load(const char* path, softsvm_model** out) {
  return guarded([&] {
    require_out(out);
    auto m = std::make_unique<softsvm_model>();
    m->model = softsvm::io::model_from_json(softsvm::io::read_file(cstr(path, "path")));
    *out = m.release();
  });
}

void softsvm_model_free(softsvm_model* m) { delete m; }

void softsvm_diagnose_options_init(softsvm_diagnose_options* opts) {
  if (!opts) return;
  const softsvm::DiagnoseOptions d;
  opts->v_threshold = d.v_threshold;
  opts->mu_band = d.mu_band;
}

softsvm_status softsvm_predict(const softsvm_model* m, const softsvm_dataset* ds, const softsvm_diagnose_options* opts,
                               double* mu, int* yhat, double* variance_weight, int* point_type, size_t len) {
  return guarded([&] {
    const auto& data = deref(ds, "dataset").data;
    if (len != data.rows()) throw std::invalid_argument("output length differs from dataset rows");
    const auto diag = softsvm::model::diagnose(deref(m, "model").model, data.features, to_cpp(opts));
    for (size_t i = 0; i < diag.size(); ++i) {
      if (mu) mu[i] = diag[i].mu_hat;
      if (yhat) yhat[i] = diag[i].predicted_label;
      if (variance_weight) variance_weight[i] = diag[i].variance_weight;
      if (point_type) point_type[i] = static_cast<int>(diag[i].point_type);
    }
  });
}

softsvm_status softsvm_predict_write_csv(const softsvm_model* m, const softsvm_dataset* ds,
                                         const softsvm_diagnose_options* opts, const char* path) {
  return guarded([&] {
    const auto diag = softsvm::model::diagnose(deref(m, "model").model, deref(ds, "dataset").data.features, to_cpp(opts));
    softsvm::io::write_file(cstr(path, "path"), softsvm::io::predictions_to_csv(diag));
  });
}

softsvm_status softsvm_evaluate(const softsvm_model* m, const softsvm_dataset* ds, softsvm_evaluation* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("output pointer is NULL");
    const auto& data = deref(ds, "dataset").data;
    const auto e = softsvm::evaluation::evaluate(deref(m, "model").model, data.features, data.labels);
    *out = {e.confusion.tp, e.confusion.fp, e.confusion.tn, e.confusion.fn, e.mcc, e.accuracy};
  });
}

void softsvm_cv_options_init(softsvm_cv_options* opts) {
  if (!opts) return;
  const softsvm::CvOptions d;
  opts->folds = d.folds;
  opts->reps = d.reps;
  opts->seed = d.seed;
  opts->threads = d.threads;
}

softsvm_status softsvm_parse_lambda_grid(const char* spec, double* out, size_t cap, size_t* len) {
  return guarded([&] {
    const auto grid = softsvm::io::parse_log_grid(cstr(spec, "grid spec"));
    if (len) *len = grid.size();
    if (out == nullptr && cap == 0) return;
    if (grid.size() > cap) throw std::invalid_argument("grid has more points than the output buffer");
    if (!out) throw std::invalid_argument("output pointer is NULL");
    std::copy(grid.begin(), grid.end(), out);
  });
}

softsvm_status softsvm_cross_validate(const softsvm_dataset* ds, const softsvm_fit_config* cfg,
                                      const double* lambda_grid, size_t grid_len, const softsvm_cv_options* opts,
                                      softsvm_cv_report** out) {
  return guarded([&] {
    require_out(out);
    const auto& c = deref(cfg, "config");
    softsvm::CvOptions o;
    if (opts) {
      o.folds = opts->folds;
      o.reps = opts->reps;
      o.seed = opts->seed;
      o.threads = opts->threads;
    }
    o.standardize = c.standardize != 0;
    const auto grid = to_vector(lambda_grid, grid_len, "lambda grid");
    auto r = std::make_unique<softsvm_cv_report>();
    r->report = softsvm::evaluation::cross_validate(deref(ds, "dataset").data, to_cpp(c), grid, o);
    *out = r.release();
  });
}

double softsvm_cv_report_selected_lambda(const softsvm_cv_report* r) {
  return r ? r->report.selected_lambda : std::numeric_limits<double>::quiet_NaN();
}

size_t softsvm_cv_report_grid_size(const softsvm_cv_report* r) { return r ? r->report.lambda_grid.size() : 0; }

double softsvm_cv_report_mean(const softsvm_cv_report* r, size_t i) {
  if (!r || i >= r->report.means.size()) return std::numeric_limits<double>::quiet_NaN();
  return r->report.means[i];
}

softsvm_status softsvm_cv_report_write_json(const softsvm_cv_report* r, const char* path) {
  return guarded([&] {
    softsvm::io::write_file(cstr(path, "path"), softsvm::io::cv_report_to_json(deref(r, "report").report));
  });
}

softsvm_status softsvm_cv_report_write_csv(const softsvm_cv_report* r, const char* path) {
  return guarded([&] {
    softsvm::io::write_file(cstr(path, "path"), softsvm::io::cv_report_to_csv(deref(r, "report").report));
  });
}

void softsvm_cv_report_free(softsvm_cv_report* r) { delete r; }

void softsvm_bench_config_init(softsvm_bench_config* cfg) {
  if (!cfg) return;
  *cfg = softsvm_bench_config{};
  cfg->rhos = kDefaultRhos;
  cfg->n_rhos = 3;
  cfg->sigmas = kDefaultSigmas;
  cfg->n_sigmas = 3;
  cfg->n = 100;
  cfg->reps = 50;
  cfg->seed = 0;
  cfg->lambda_grid = kDefaultGrid;
  cfg->grid_len = 7;
  cfg->cv_folds = 10;
  cfg->threads = 0;
}

softsvm_status softsvm_bench_run(const softsvm_bench_config* cfg, const char* path, size_t* rows, size_t* failed,
                                 size_t* not_converged) {
  return guarded([&] {
    const auto& c = deref(cfg, "config");
    softsvm::FactorialConfig f;
    f.rhos = to_vector(c.rhos, c.n_rhos, "rhos");
    f.sigmas = to_vector(c.sigmas, c.n_sigmas, "sigmas");
    f.n = c.n;
    f.reps = c.reps;
    f.base_seed = c.seed;
    f.lambda_grid = to_vector(c.lambda_grid, c.grid_len, "lambda grid");
    f.cv_folds = c.cv_folds;
    f.threads = c.threads;
    const auto result = softsvm::data::run_factorial(f);
    softsvm::io::write_file(cstr(path, "path"), softsvm::data::factorial_to_csv(result));
    size_t nf = 0;
    size_t nc = 0;
    for (const auto& row : result) {
      nf += row.failed ? 1 : 0;
      nc += row.converged ? 0 : 1;
    }
    if (rows) *rows = result.size();
    if (failed) *failed = nf;
    if (not_converged) *not_converged = nc;
  });
}

}  // extern "C"

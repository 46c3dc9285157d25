#include "nagd/nagd.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "nagd/experiment.hpp"
#include "nagd/special.hpp"

struct nagd_spectrum {
  nagd::Spectrum s;
};

struct nagd_trajectory {
  nagd::TrajectoryRecord t;
};

struct nagd_config {
  nagd::ExperimentConfig c;
};

namespace {

thread_local std::string g_last_error;

nagd_status map_code(nagd::ErrorCode c) {
  using nagd::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return NAGD_INVALID_ARGUMENT;
    case ErrorCode::EigensolverNoConvergence: return NAGD_EIGENSOLVER_NO_CONVERGENCE;
    case ErrorCode::DomainError: return NAGD_DOMAIN_ERROR;
    case ErrorCode::OverflowSaturation: return NAGD_OVERFLOW_SATURATION;
    case ErrorCode::SingularBasis: return NAGD_SINGULAR_BASIS;
    case ErrorCode::NoEquilibrium: return NAGD_NO_EQUILIBRIUM;
    case ErrorCode::NotApplicable: return NAGD_NOT_APPLICABLE;
    case ErrorCode::NonFiniteField: return NAGD_NON_FINITE_FIELD;
    case ErrorCode::InsufficientPoints: return NAGD_INSUFFICIENT_POINTS;
    case ErrorCode::NonPositive: return NAGD_NON_POSITIVE;
    case ErrorCode::TrivialNullspace: return NAGD_TRIVIAL_NULLSPACE;
    case ErrorCode::ConfigError: return NAGD_CONFIG_ERROR;
    case ErrorCode::GridTooLarge: return NAGD_GRID_TOO_LARGE;
    case ErrorCode::IoError: return NAGD_IO_ERROR;
  }
  return NAGD_INTERNAL_ERROR;
}

nagd_status fail(nagd_status st, std::string msg) {
  g_last_error = std::move(msg);
  return st;
}

template <class F>
nagd_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return NAGD_OK;
  } catch (const nagd::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NAGD_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(NAGD_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(NAGD_INTERNAL_ERROR, "unknown failure");
  }
}

char* dup(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(bool ok, const char* what) {
  if (!ok) throw nagd::Error(nagd::ErrorCode::InvalidArgument, what);
}

nagd::IntegratorConfig to_cfg(const nagd_integrator* c) {
  nagd::IntegratorConfig cfg;
  if (c) {
    cfg.t0 = c->t0;
    cfg.t_end = c->t_end;
    cfg.dt = c->dt;
    cfg.r = c->r;
    cfg.record_stride = c->record_stride;
  }
  return cfg;
}

nagd::Matrix to_matrix(size_t n, const double* g) {
  require(n > 0 && g, "matrix must be non-empty");
  return nagd::Matrix::from_row_major(n, n, std::span<const double>(g, n * n));
}

nagd::Vector vec_or_zero(size_t n, const double* p) {
  return p ? nagd::Vector(p, p + n) : nagd::Vector(n, 0.0);
}

void copy_vec(const nagd::CVector& v, double* re, double* im) {
  for (size_t k = 0; k < v.size(); ++k) {
    if (re) re[k] = v[k].real();
    if (im) im[k] = v[k].imag();
  }
}

}  // namespace

extern "C" {

const char* nagd_status_string(nagd_status status) {
  switch (status) {
    case NAGD_OK: return "ok";
    case NAGD_INTERNAL_ERROR: return "internal error";
    default: break;
  }
  if (status > NAGD_OK && status < NAGD_INTERNAL_ERROR) {
    return nagd::to_string(static_cast<nagd::ErrorCode>(status - 1));
  }
  return "unknown status";
}

const char* nagd_last_error(void) { return g_last_error.c_str(); }

void nagd_string_free(char* s) { delete[] s; }

nagd_status nagd_spectrum_create(size_t n, const double* g, nagd_spectrum** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = nullptr;
    auto h = std::make_unique<nagd_spectrum>();
    h->s = nagd::eigendecompose(to_matrix(n, g));
    *out = h.release();
  });
}

void nagd_spectrum_destroy(nagd_spectrum* s) { delete s; }

size_t nagd_spectrum_dim(const nagd_spectrum* s) { return s ? s->s.n : 0; }

nagd_status nagd_spectrum_eigenvalue(const nagd_spectrum* s, size_t i, double* re, double* im) {
  return guarded([&] {
    require(s && i < s->s.n, "eigenvalue index out of range");
    if (re) *re = s->s.eigenvalues[i].real();
    if (im) *im = s->s.eigenvalues[i].imag();
  });
}

nagd_status nagd_spectrum_right_vector(const nagd_spectrum* s, size_t i, double* re, double* im) {
  return guarded([&] {
    require(s && i < s->s.n, "eigenvector index out of range");
    copy_vec(s->s.right_vector(i), re, im);
  });
}

nagd_status nagd_spectrum_left_vector(const nagd_spectrum* s, size_t i, double* re, double* im) {
  return guarded([&] {
    require(s && i < s->s.n, "eigenvector index out of range");
    copy_vec(s->s.left_vector(i), re, im);
  });
}

int nagd_spectrum_is_symmetric(const nagd_spectrum* s) { return s && s->s.is_symmetric; }
int nagd_spectrum_is_normal(const nagd_spectrum* s) { return s && s->s.is_normal; }
int nagd_spectrum_is_diagonalizable(const nagd_spectrum* s) { return s && s->s.is_diagonalizable; }
double nagd_spectrum_kappa(const nagd_spectrum* s) { return s ? s->s.kappa_P : std::nan(""); }

nagd_status nagd_classify_eigenvalue(double re, double im, double tol, int* tag, double* rate) {
  return guarded([&] {
    require(tol >= 0.0 && std::isfinite(re) && std::isfinite(im), "eigenvalue and tolerance must be finite");
    const auto c = nagd::classify_eigenvalue({re, im}, tol);
    if (tag) *tag = static_cast<int>(c.tag);
    if (rate) *rate = c.rate;
  });
}

nagd_status nagd_classify(const nagd_spectrum* s, double t0, nagd_verdict* out) {
  return guarded([&] {
    require(s && out, "null argument");
    const auto v = nagd::classify_matrix(s->s, t0);
    out->nagd_verdict = static_cast<int>(v.nagd_verdict);
    out->first_order_verdict = static_cast<int>(v.first_order_verdict);
    out->dominant_growth_rate = v.dominant_growth_rate;
    out->first_order_rate = v.first_order_rate;
    out->has_bound_constant = v.bound_constant_C.has_value();
    out->bound_constant_C = v.bound_constant_C.value_or(0.0);
    out->kappa_P = v.kappa_P;
  });
}

nagd_status nagd_boundedness_bound(const nagd_spectrum* s, double t0, double q0_norm, double v0_norm,
                                   double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = nagd::boundedness_bound(s->s, t0, q0_norm, v0_norm);
  });
}

nagd_status nagd_bessel_j1(double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    const auto v = nagd::bessel_j1({re, im});
    if (out_re) *out_re = v.real();
    if (out_im) *out_im = v.imag();
  });
}

nagd_status nagd_bessel_y1(double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    const auto v = nagd::bessel_y1({re, im});
    if (out_re) *out_re = v.real();
    if (out_im) *out_im = v.imag();
  });
}

nagd_status nagd_bessel_i1(double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = nagd::bessel_i1(x);
  });
}

nagd_status nagd_bessel_k1(double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = nagd::bessel_k1(x);
  });
}

nagd_status nagd_modal_eval(double lambda_re, double lambda_im, double t0, const double y0[2],
                            const double ydot0[2], double t, double out[4], int* saturated) {
  return guarded([&] {
    require(y0 && ydot0 && out, "null argument");
    const auto sol = nagd::make_modal_solution({lambda_re, lambda_im}, t0, {y0[0], y0[1]}, {ydot0[0], ydot0[1]});
    const auto v = nagd::eval_modal(sol, t);
    out[0] = v.y.real();
    out[1] = v.y.imag();
    out[2] = v.ydot.real();
    out[3] = v.ydot.imag();
    if (saturated) *saturated = v.saturated;
  });
}

void nagd_integrator_default(nagd_integrator* c) {
  if (!c) return;
  const nagd::IntegratorConfig d;
  c->t0 = d.t0;
  c->t_end = d.t_end;
  c->dt = d.dt;
  c->r = d.r;
  c->record_stride = d.record_stride;
}

nagd_status nagd_simulate(size_t n, const double* g, const double* b, const double* q0, const double* v0,
                          const nagd_integrator* cfg, nagd_trajectory** out) {
  return guarded([&] {
    require(out && q0, "null argument");
    *out = nullptr;
    const auto G = to_matrix(n, g);
    auto h = std::make_unique<nagd_trajectory>();
    h->t = nagd::simulate_nagd(G, vec_or_zero(n, b), nagd::Vector(q0, q0 + n), vec_or_zero(n, v0), to_cfg(cfg));
    *out = h.release();
  });
}

nagd_status nagd_simulate_first_order(size_t n, const double* g, const double* b, const double* x0,
                                      const nagd_integrator* cfg, nagd_trajectory** out) {
  return guarded([&] {
    require(out && x0, "null argument");
    *out = nullptr;
    const auto G = to_matrix(n, g);
    auto h = std::make_unique<nagd_trajectory>();
    h->t = nagd::simulate_first_order(G, vec_or_zero(n, b), nagd::Vector(x0, x0 + n), to_cfg(cfg));
    *out = h.release();
  });
}

void nagd_trajectory_destroy(nagd_trajectory* t) { delete t; }
size_t nagd_trajectory_size(const nagd_trajectory* t) { return t ? t->t.size() : 0; }
size_t nagd_trajectory_dim(const nagd_trajectory* t) { return t ? t->t.dim() : 0; }
int nagd_trajectory_saturated(const nagd_trajectory* t) { return t && t->t.saturated; }

double nagd_trajectory_time(const nagd_trajectory* t, size_t k) {
  return t && k < t->t.size() ? t->t.time(k) : std::nan("");
}

nagd_status nagd_trajectory_q(const nagd_trajectory* t, size_t k, double* out) {
  return guarded([&] {
    require(t && out && k < t->t.size(), "sample index out of range");
    const auto q = t->t.q(k);
    std::copy(q.begin(), q.end(), out);
  });
}

nagd_status nagd_trajectory_v(const nagd_trajectory* t, size_t k, double* out) {
  return guarded([&] {
    require(t && out && k < t->t.size(), "sample index out of range");
    const auto v = t->t.v(k);
    std::copy(v.begin(), v.end(), out);
  });
}

nagd_status nagd_config_parse(const char* text, nagd_config** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = nullptr;
    auto h = std::make_unique<nagd_config>();
    h->c = nagd::parse_config(text);
    *out = h.release();
  });
}

nagd_status nagd_config_load(const char* path, nagd_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto h = std::make_unique<nagd_config>();
    h->c = nagd::load_config(path);
    *out = h.release();
  });
}

nagd_status nagd_config_to_json(const nagd_config* cfg, char** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = dup(nagd::config_to_json(cfg->c));
  });
}

nagd_status nagd_config_set_stride(nagd_config* cfg, size_t stride) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    if (stride == 0) throw nagd::Error(nagd::ErrorCode::ConfigError, "config: integrator.record_stride: must be >= 1");
    cfg->c.integrator.record_stride = stride;
  });
}

void nagd_config_destroy(nagd_config* cfg) { delete cfg; }

nagd_status nagd_run_classify(const nagd_config* cfg, int as_json, char** report) {
  return guarded([&] {
    require(cfg && report, "null argument");
    const auto r = nagd::classify(cfg->c);
    *report = dup(as_json ? nagd::format_json(r) : nagd::format_text(r));
  });
}

nagd_status nagd_run_simulate(const nagd_config* cfg, const char* out_dir, char** csv_path, int* saturated) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    if (csv_path) *csv_path = nullptr;
    const std::filesystem::path base = out_dir && *out_dir ? out_dir : ".";
    std::filesystem::path dir = base;
    std::string stem = cfg->c.name.empty() ? "simulation" : cfg->c.name;
    if (!cfg->c.output.path.empty()) {
      std::filesystem::path p = cfg->c.output.path;
      if (p.is_relative()) p = base / p;
      dir = p.parent_path();
      stem = p.stem().string();
    }
    const auto out = nagd::run_experiment(cfg->c);
    const auto path = nagd::write_outputs(dir, stem, out);
    if (saturated) *saturated = out.traj.saturated;
    if (csv_path) *csv_path = dup(path.string());
  });
}

nagd_status nagd_reproduce(const char* figure_id, const char* out_dir, int* pass, char** summary_json) {
  return guarded([&] {
    require(figure_id != nullptr, "null argument");
    const auto s = nagd::reproduce_figure(figure_id, out_dir ? out_dir : "");
    if (pass) *pass = s.pass;
    if (summary_json) *summary_json = dup(s.json);
  });
}

nagd_status nagd_sweep(const char* grid, int measure, unsigned jobs, char** csv) {
  return guarded([&] {
    require(grid && csv, "null argument");
    auto spec = nagd::parse_grid(grid);
    spec.measure = measure != 0;
    spec.jobs = jobs;
    *csv = dup(nagd::sweep_csv(nagd::sweep(spec)));
  });
}

nagd_status nagd_check(double dt, int* all_pass, char** report_json) {
  return guarded([&] {
    nagd::CheckOptions opts;
    if (dt > 0.0) opts.dt = dt;
    const auto results = nagd::run_checks(opts);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.status != nagd::CheckStatus::Fail;
    if (all_pass) *all_pass = ok;
    if (report_json) *report_json = dup(nagd::checks_json(results));
  });
}

}  // extern "C"

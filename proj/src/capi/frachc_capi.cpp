#include "frachc/frachc.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/diagnostics.hpp"
#include "core/stepper.hpp"

using namespace frachc;

struct frachc_config {
  ProblemKind kind = ProblemKind::Example1;
  ModelParams params;
  int N = 256;
  int M = 256;
  SolverOptions opts;
  bool allow_small_sigma = false;
};

struct frachc_run {
  ProblemKind kind = ProblemKind::Example1;
  ModelParams params;
  Discretization disc;
  RunRecord record;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_field;

frachc_status fail(frachc_status s, std::string msg, std::string field = {}) {
  g_last_error = std::move(msg);
  g_last_field = std::move(field);
  return s;
}

struct Cancelled {};

template <class F>
frachc_status guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return fail(FRACHC_ERR_CONFIG, e.what(), e.field());
  } catch (const DomainError& e) {
    return fail(FRACHC_ERR_DOMAIN, e.what());
  } catch (const StepFailure& e) {
    return fail(FRACHC_ERR_NOT_CONVERGED, e.what());
  } catch (const NumericalFailure& e) {
    return fail(FRACHC_ERR_NUMERICAL, e.what());
  } catch (const Cancelled&) {
    return fail(FRACHC_ERR_CANCELLED, "run cancelled by observer");
  } catch (const std::invalid_argument& e) {
    return fail(FRACHC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRACHC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRACHC_ERR_NUMERICAL, e.what());
  } catch (...) {
    return fail(FRACHC_ERR_INTERNAL, "unknown exception");
  }
}

#define FRACHC_REQUIRE(cond, msg) \
  do {                            \
    if (!(cond)) return fail(FRACHC_ERR_INVALID_ARGUMENT, msg); \
  } while (0)

bool to_kind(frachc_problem p, ProblemKind& out) {
  switch (p) {
    case FRACHC_EXAMPLE1: out = ProblemKind::Example1; return true;
    case FRACHC_EXAMPLE2: out = ProblemKind::Example2; return true;
    case FRACHC_EXAMPLEA: out = ProblemKind::ExampleA; return true;
  }
  return false;
}

frachc_problem from_kind(ProblemKind k) {
  switch (k) {
    case ProblemKind::Example1: return FRACHC_EXAMPLE1;
    case ProblemKind::Example2: return FRACHC_EXAMPLE2;
    case ProblemKind::ExampleA: return FRACHC_EXAMPLEA;
  }
  return FRACHC_EXAMPLE1;
}

double* real_slot(frachc_config* c, frachc_real_param which) {
  switch (which) {
    case FRACHC_ALPHA: return &c->params.alpha;
    case FRACHC_EPSILON2: return &c->params.epsilon2;
    case FRACHC_SIGMA: return &c->params.sigma;
    case FRACHC_HALF_WIDTH: return &c->params.L;
    case FRACHC_FINAL_TIME: return &c->params.T;
    case FRACHC_NEWTON_TOL: return &c->opts.newton.rel_tol;
    case FRACHC_KRYLOV_TOL: return &c->opts.krylov.rel_tol;
  }
  return nullptr;
}

Discretization make_disc(const frachc_config* c) {
  validate(c->params, c->allow_small_sigma);
  validate(c->opts.newton);
  validate(c->opts.krylov);
  if (c->opts.dense_cap < 1) throw ConfigError("dense_cap", "must be positive");
  return Discretization::make(c->params, c->N, c->M);
}

}  // namespace

extern "C" {

const char* frachc_version(void) { return "0.1.0"; }

const char* frachc_status_string(frachc_status s) {
  switch (s) {
    case FRACHC_OK: return "ok";
    case FRACHC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FRACHC_ERR_CONFIG: return "invalid configuration";
    case FRACHC_ERR_DOMAIN: return "domain error";
    case FRACHC_ERR_NOT_CONVERGED: return "not converged";
    case FRACHC_ERR_NUMERICAL: return "numerical failure";
    case FRACHC_ERR_CANCELLED: return "cancelled";
    case FRACHC_ERR_UNAVAILABLE: return "unavailable";
    case FRACHC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* frachc_last_error(void) { return g_last_error.c_str(); }
const char* frachc_last_error_field(void) { return g_last_field.c_str(); }

frachc_status frachc_config_create(frachc_problem problem, frachc_config** out) {
  FRACHC_REQUIRE(out, "config_create: out is null");
  ProblemKind kind;
  FRACHC_REQUIRE(to_kind(problem, kind), "config_create: unknown problem");
  return guarded([&] {
    auto* c = new frachc_config;
    c->kind = kind;
    c->params = default_params(kind);
    *out = c;
    return FRACHC_OK;
  });
}

frachc_status frachc_config_clone(const frachc_config* config, frachc_config** out) {
  FRACHC_REQUIRE(config && out, "config_clone: null argument");
  return guarded([&] {
    *out = new frachc_config(*config);
    return FRACHC_OK;
  });
}

void frachc_config_destroy(frachc_config* config) { delete config; }

frachc_status frachc_config_set_real(frachc_config* config, frachc_real_param which,
                                     double value) {
  FRACHC_REQUIRE(config, "config_set_real: config is null");
  double* slot = real_slot(config, which);
  FRACHC_REQUIRE(slot, "config_set_real: unknown parameter");
  *slot = value;
  return FRACHC_OK;
}

frachc_status frachc_config_get_real(const frachc_config* config, frachc_real_param which,
                                     double* value) {
  FRACHC_REQUIRE(config && value, "config_get_real: null argument");
  const double* slot = real_slot(const_cast<frachc_config*>(config), which);
  FRACHC_REQUIRE(slot, "config_get_real: unknown parameter");
  *value = *slot;
  return FRACHC_OK;
}

frachc_status frachc_config_set_int(frachc_config* config, frachc_int_param which, int value) {
  FRACHC_REQUIRE(config, "config_set_int: config is null");
  switch (which) {
    case FRACHC_CELLS: config->N = value; return FRACHC_OK;
    case FRACHC_STEPS: config->M = value; return FRACHC_OK;
    case FRACHC_NEWTON_MAX_ITERS: config->opts.newton.max_iters = value; return FRACHC_OK;
    case FRACHC_KRYLOV_MAX_ITERS: config->opts.krylov.max_iters = value; return FRACHC_OK;
    case FRACHC_DENSE_CAP: config->opts.dense_cap = value; return FRACHC_OK;
    case FRACHC_TRACK_ENERGY: config->opts.track_energy = value != 0; return FRACHC_OK;
    case FRACHC_ALLOW_SMALL_SIGMA: config->allow_small_sigma = value != 0; return FRACHC_OK;
  }
  return fail(FRACHC_ERR_INVALID_ARGUMENT, "config_set_int: unknown parameter");
}

frachc_status frachc_config_get_int(const frachc_config* config, frachc_int_param which,
                                    int* value) {
  FRACHC_REQUIRE(config && value, "config_get_int: null argument");
  switch (which) {
    case FRACHC_CELLS: *value = config->N; return FRACHC_OK;
    case FRACHC_STEPS: *value = config->M; return FRACHC_OK;
    case FRACHC_NEWTON_MAX_ITERS: *value = config->opts.newton.max_iters; return FRACHC_OK;
    case FRACHC_KRYLOV_MAX_ITERS: *value = config->opts.krylov.max_iters; return FRACHC_OK;
    case FRACHC_DENSE_CAP: *value = config->opts.dense_cap; return FRACHC_OK;
    case FRACHC_TRACK_ENERGY: *value = config->opts.track_energy ? 1 : 0; return FRACHC_OK;
    case FRACHC_ALLOW_SMALL_SIGMA: *value = config->allow_small_sigma ? 1 : 0; return FRACHC_OK;
  }
  return fail(FRACHC_ERR_INVALID_ARGUMENT, "config_get_int: unknown parameter");
}

frachc_status frachc_config_set_precond(frachc_config* config, frachc_precond p) {
  FRACHC_REQUIRE(config, "config_set_precond: config is null");
  switch (p) {
    case FRACHC_PRECOND_NONE: config->opts.variant = PrecondVariant::None; return FRACHC_OK;
    case FRACHC_PRECOND_SKEW: config->opts.variant = PrecondVariant::Skew; return FRACHC_OK;
    case FRACHC_PRECOND_CIRC: config->opts.variant = PrecondVariant::Circ; return FRACHC_OK;
    case FRACHC_PRECOND_DENSE: config->opts.variant = PrecondVariant::Dense; return FRACHC_OK;
  }
  return fail(FRACHC_ERR_INVALID_ARGUMENT, "config_set_precond: unknown variant");
}

frachc_status frachc_config_get_precond(const frachc_config* config, frachc_precond* p) {
  FRACHC_REQUIRE(config && p, "config_get_precond: null argument");
  switch (config->opts.variant) {
    case PrecondVariant::None: *p = FRACHC_PRECOND_NONE; break;
    case PrecondVariant::Skew: *p = FRACHC_PRECOND_SKEW; break;
    case PrecondVariant::Circ: *p = FRACHC_PRECOND_CIRC; break;
    case PrecondVariant::Dense: *p = FRACHC_PRECOND_DENSE; break;
  }
  return FRACHC_OK;
}

frachc_status frachc_config_get_problem(const frachc_config* config, frachc_problem* problem) {
  FRACHC_REQUIRE(config && problem, "config_get_problem: null argument");
  *problem = from_kind(config->kind);
  return FRACHC_OK;
}

frachc_status frachc_config_validate(const frachc_config* config) {
  FRACHC_REQUIRE(config, "config_validate: config is null");
  return guarded([&] {
    make_disc(config);
    return FRACHC_OK;
  });
}

frachc_status frachc_config_nodes(const frachc_config* config, double* x, size_t len) {
  FRACHC_REQUIRE(config && x, "config_nodes: null argument");
  return guarded([&] {
    const auto d = make_disc(config);
    if (len != static_cast<size_t>(d.interior()))
      return fail(FRACHC_ERR_INVALID_ARGUMENT, "config_nodes: len must be N - 1");
    for (int i = 1; i < d.N; ++i) x[i - 1] = d.node(config->params, i);
    return FRACHC_OK;
  });
}

frachc_status frachc_simulate(const frachc_config* config, frachc_observer observer,
                              void* user_data, frachc_run** out) {
  FRACHC_REQUIRE(config && out, "simulate: null argument");
  *out = nullptr;
  return guarded([&] {
    const auto disc = make_disc(config);
    const Problem problem = make_problem(config->kind, config->params);
    StepObserver obs;
    if (observer) {
      obs = [observer, user_data](const StepInfo& s) {
        frachc_step_info info;
        info.step = s.step;
        info.time = s.time;
        info.n = s.phi->size();
        info.phi = s.phi->data();
        info.mu = s.mu->data();
        info.newton_iters = s.newton_iters;
        info.krylov_iters = s.krylov_iters->data();
        if (observer(&info, user_data) != 0) throw Cancelled{};
      };
    }
    auto* run = new frachc_run;
    try {
      run->kind = config->kind;
      run->params = config->params;
      run->disc = disc;
      run->record = frachc::run(problem, config->params, disc, config->opts, obs);
    } catch (...) {
      delete run;
      throw;
    }
    *out = run;
    return FRACHC_OK;
  });
}

void frachc_run_destroy(frachc_run* run) { delete run; }

size_t frachc_run_levels(const frachc_run* run) {
  return run ? run->record.time.size() : 0;
}

size_t frachc_run_size(const frachc_run* run) { return run ? run->record.phi.size() : 0; }

frachc_status frachc_run_trace(const frachc_run* run, frachc_trace which, double* out,
                               size_t len) {
  FRACHC_REQUIRE(run && out, "run_trace: null argument");
  const auto& r = run->record;
  FRACHC_REQUIRE(len == r.time.size(), "run_trace: len must equal the number of levels");
  const std::vector<double>* src = nullptr;
  switch (which) {
    case FRACHC_TRACE_TIME: src = &r.time; break;
    case FRACHC_TRACE_ENERGY: src = &r.energy; break;
    case FRACHC_TRACE_MODIFIED_ENERGY: src = &r.modified_energy; break;
    case FRACHC_TRACE_PHI_INF: src = &r.phi_inf; break;
    case FRACHC_TRACE_MEAN_KRYLOV:
      for (size_t k = 0; k < len; ++k) {
        const int it1 = r.newton_iters[k];
        double s = 0.0;
        for (int c : r.krylov_iters[k]) s += c;
        out[k] = it1 > 0 ? s / it1 : 0.0;
      }
      return FRACHC_OK;
    default:
      return fail(FRACHC_ERR_INVALID_ARGUMENT, "run_trace: unknown trace");
  }
  if (src->size() != len)
    return fail(FRACHC_ERR_UNAVAILABLE, "run_trace: energy was not tracked for this run");
  std::memcpy(out, src->data(), len * sizeof(double));
  return FRACHC_OK;
}

frachc_status frachc_run_newton_iters(const frachc_run* run, int* out, size_t len) {
  FRACHC_REQUIRE(run && out, "run_newton_iters: null argument");
  FRACHC_REQUIRE(len == run->record.newton_iters.size(),
                 "run_newton_iters: len must equal the number of levels");
  std::memcpy(out, run->record.newton_iters.data(), len * sizeof(int));
  return FRACHC_OK;
}

frachc_status frachc_run_final_state(const frachc_run* run, double* phi, double* mu, size_t len) {
  FRACHC_REQUIRE(run, "run_final_state: run is null");
  FRACHC_REQUIRE(len == run->record.phi.size(), "run_final_state: len must be N - 1");
  if (phi) std::memcpy(phi, run->record.phi.data(), len * sizeof(double));
  if (mu) std::memcpy(mu, run->record.mu.data(), len * sizeof(double));
  return FRACHC_OK;
}

frachc_status frachc_run_errors(const frachc_run* run, double* err_inf, double* err_2) {
  FRACHC_REQUIRE(run, "run_errors: run is null");
  return guarded([&] {
    const Problem problem = make_problem(run->kind, run->params);
    if (!problem.has_exact())
      return fail(FRACHC_ERR_UNAVAILABLE,
                  std::string("run_errors: ") + to_string(run->kind) + " has no exact solution");
    const auto e = error_metrics(run->record.phi, problem, run->params, run->disc, run->params.T);
    if (err_inf) *err_inf = e.err_inf;
    if (err_2) *err_2 = e.err_2;
    return FRACHC_OK;
  });
}

frachc_status frachc_run_iteration_stats(const frachc_run* run, double* iter1, double* iter2) {
  FRACHC_REQUIRE(run, "run_iteration_stats: run is null");
  const auto s = iteration_stats(run->record);
  if (iter1) *iter1 = s.iter1;
  if (iter2) *iter2 = s.iter2;
  return FRACHC_OK;
}

frachc_status frachc_run_solve_seconds(const frachc_run* run, double* seconds) {
  FRACHC_REQUIRE(run && seconds, "run_solve_seconds: null argument");
  *seconds = run->record.solve_seconds;
  return FRACHC_OK;
}

frachc_status frachc_convergence_order(double err_coarse, double step_coarse, double err_fine,
                                       double step_fine, double* order) {
  FRACHC_REQUIRE(order, "convergence_order: order is null");
  return guarded([&] {
    *order = convergence_order(err_coarse, step_coarse, err_fine, step_fine);
    return FRACHC_OK;
  });
}

frachc_status frachc_matrix_rows(const frachc_config* config, frachc_matrix which,
                                 size_t* rows) {
  FRACHC_REQUIRE(config && rows, "matrix_rows: null argument");
  const size_t n = config->N > 1 ? static_cast<size_t>(config->N - 1) : 0;
  switch (which) {
    case FRACHC_MATRIX_G:
    case FRACHC_MATRIX_SKEW:
    case FRACHC_MATRIX_CIRC: *rows = n; return FRACHC_OK;
    case FRACHC_MATRIX_JACOBIAN: *rows = 2 * n; return FRACHC_OK;
  }
  return fail(FRACHC_ERR_INVALID_ARGUMENT, "matrix_rows: unknown matrix");
}

frachc_status frachc_matrix_export(const frachc_config* config, frachc_matrix which, double* out,
                                   size_t len) {
  FRACHC_REQUIRE(config && out, "matrix_export: null argument");
  return guarded([&] {
    const auto disc = make_disc(config);
    const int n = disc.interior();
    if (n > config->opts.dense_cap)
      throw ConfigError("N", "dense export refused: N - 1 = " + std::to_string(n) +
                                 " exceeds the dense cap " +
                                 std::to_string(config->opts.dense_cap));
    const Problem problem = make_problem(config->kind, config->params);
    const auto ctx = StepContext::make(problem, config->params, disc);
    std::vector<double> a;
    switch (which) {
      case FRACHC_MATRIX_G: a = dense(ctx.op); break;
      case FRACHC_MATRIX_SKEW: a = dense(*ctx.ops.skew); break;
      case FRACHC_MATRIX_CIRC: a = dense(*ctx.ops.circ); break;
      case FRACHC_MATRIX_JACOBIAN: {
        const auto phi0 = sample_interior(problem.initial_condition, config->params, disc);
        const auto fs = first_step(phi0, ctx);
        BlockJacobian J;
        J.G = ctx.ops.G;
        J.tau = disc.tau;
        J.epsilon2 = config->params.epsilon2;
        J.sigma = config->params.sigma;
        J.phi_sq.resize(n);
        for (int i = 0; i < n; ++i) J.phi_sq[i] = fs.phi1[i] * fs.phi1[i];
        a = J.dense();
        break;
      }
      default:
        return fail(FRACHC_ERR_INVALID_ARGUMENT, "matrix_export: unknown matrix");
    }
    if (len != a.size())
      return fail(FRACHC_ERR_INVALID_ARGUMENT, "matrix_export: len must be rows * rows");
    std::memcpy(out, a.data(), len * sizeof(double));
    return FRACHC_OK;
  });
}

frachc_status frachc_gershgorin(double alpha, int cells, double half_width, double* center,
                                double* radius, int* definite) {
  return guarded([&] {
    ModelParams p;
    p.alpha = alpha;
    p.L = half_width;
    validate(p, true);
    const auto disc = Discretization::make(p, cells, 2);
    const auto g = gershgorin_check(build_operator(p, disc));
    if (center) *center = g.center;
    if (radius) *radius = g.max_radius;
    if (definite) *definite = g.is_definite ? 1 : 0;
    return FRACHC_OK;
  });
}

frachc_status frachc_distance_bound(double alpha, int cells, double* ratio, double* bound,
                                    int* holds) {
  return guarded([&] {
    ModelParams p;
    p.alpha = alpha;
    validate(p, true);
    const auto disc = Discretization::make(p, cells, 2);
    const auto d = toeplitz_distance_bound(build_operator(p, disc));
    if (ratio) *ratio = d.ratio;
    if (bound) *bound = d.bound;
    if (holds) *holds = d.holds ? 1 : 0;
    return FRACHC_OK;
  });
}

}  // extern "C"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <frachc/frachc.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <thread>
#include <vector>

namespace {

struct ConfigDeleter {
  void operator()(frachc_config* c) const { frachc_config_destroy(c); }
};
struct RunDeleter {
  void operator()(frachc_run* r) const { frachc_run_destroy(r); }
};
using Config = std::unique_ptr<frachc_config, ConfigDeleter>;
using Run = std::unique_ptr<frachc_run, RunDeleter>;

Config make_config(frachc_problem p, int N, int M) {
  frachc_config* c = nullptr;
  REQUIRE(frachc_config_create(p, &c) == FRACHC_OK);
  REQUIRE(frachc_config_set_int(c, FRACHC_CELLS, N) == FRACHC_OK);
  REQUIRE(frachc_config_set_int(c, FRACHC_STEPS, M) == FRACHC_OK);
  return Config(c);
}

Run simulate(const frachc_config* c) {
  frachc_run* r = nullptr;
  REQUIRE(frachc_simulate(c, nullptr, nullptr, &r) == FRACHC_OK);
  return Run(r);
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(frachc_version()) > 0);
  CHECK(std::string(frachc_status_string(FRACHC_OK)).size() > 0);
  CHECK(std::string(frachc_status_string(FRACHC_ERR_CONFIG)) !=
        std::string(frachc_status_string(FRACHC_OK)));
}

TEST_CASE("configuration defaults and accessors") {
  auto c = make_config(FRACHC_EXAMPLE2, 64, 32);
  double v = 0.0;
  CHECK(frachc_config_get_real(c.get(), FRACHC_HALF_WIDTH, &v) == FRACHC_OK);
  CHECK(v == doctest::Approx(M_PI));
  CHECK(frachc_config_get_real(c.get(), FRACHC_FINAL_TIME, &v) == FRACHC_OK);
  CHECK(v == 46.0);
  CHECK(frachc_config_set_real(c.get(), FRACHC_ALPHA, 1.2) == FRACHC_OK);
  CHECK(frachc_config_get_real(c.get(), FRACHC_ALPHA, &v) == FRACHC_OK);
  CHECK(v == 1.2);
  int n = 0;
  CHECK(frachc_config_get_int(c.get(), FRACHC_CELLS, &n) == FRACHC_OK);
  CHECK(n == 64);
  frachc_problem pr;
  CHECK(frachc_config_get_problem(c.get(), &pr) == FRACHC_OK);
  CHECK(pr == FRACHC_EXAMPLE2);
  frachc_precond pc;
  CHECK(frachc_config_get_precond(c.get(), &pc) == FRACHC_OK);
  CHECK(pc == FRACHC_PRECOND_SKEW);

  std::vector<double> x(63);
  CHECK(frachc_config_nodes(c.get(), x.data(), x.size()) == FRACHC_OK);
  CHECK(x.front() == doctest::Approx(-M_PI + 2 * M_PI / 64));
  CHECK(frachc_config_nodes(c.get(), x.data(), 10) == FRACHC_ERR_INVALID_ARGUMENT);

  frachc_config* copy = nullptr;
  CHECK(frachc_config_clone(c.get(), &copy) == FRACHC_OK);
  Config owned(copy);
  CHECK(frachc_config_get_real(copy, FRACHC_ALPHA, &v) == FRACHC_OK);
  CHECK(v == 1.2);
}

TEST_CASE("invalid arguments are reported, not crashed on") {
  CHECK(frachc_config_create(FRACHC_EXAMPLE1, nullptr) == FRACHC_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(frachc_last_error()) > 0);
  frachc_config* c = nullptr;
  CHECK(frachc_config_create(static_cast<frachc_problem>(42), &c) == FRACHC_ERR_INVALID_ARGUMENT);
  CHECK(c == nullptr);
  auto cfg = make_config(FRACHC_EXAMPLE1, 16, 4);
  CHECK(frachc_config_set_real(cfg.get(), static_cast<frachc_real_param>(99), 1.0) ==
        FRACHC_ERR_INVALID_ARGUMENT);
  CHECK(frachc_config_set_precond(cfg.get(), static_cast<frachc_precond>(9)) ==
        FRACHC_ERR_INVALID_ARGUMENT);
  CHECK(frachc_config_validate(nullptr) == FRACHC_ERR_INVALID_ARGUMENT);
  frachc_config_destroy(nullptr);
  frachc_run_destroy(nullptr);
}

TEST_CASE("small sigma needs the override") {
  auto c = make_config(FRACHC_EXAMPLE1, 16, 4);
  CHECK(frachc_config_set_real(c.get(), FRACHC_SIGMA, 0.01) == FRACHC_OK);
  CHECK(frachc_config_validate(c.get()) == FRACHC_ERR_CONFIG);
  CHECK(std::string(frachc_last_error_field()) == "sigma");
  frachc_run* r = nullptr;
  CHECK(frachc_simulate(c.get(), nullptr, nullptr, &r) == FRACHC_ERR_CONFIG);
  CHECK(r == nullptr);
  CHECK(frachc_config_set_int(c.get(), FRACHC_ALLOW_SMALL_SIGMA, 1) == FRACHC_OK);
  CHECK(frachc_config_validate(c.get()) == FRACHC_OK);

  CHECK(frachc_config_set_real(c.get(), FRACHC_ALPHA, 2.0) == FRACHC_OK);
  CHECK(frachc_config_validate(c.get()) == FRACHC_ERR_CONFIG);
  CHECK(std::string(frachc_last_error_field()) == "alpha");
}

TEST_CASE("simulation of the manufactured problem") {
  auto c = make_config(FRACHC_EXAMPLE1, 32, 8);
  auto r = simulate(c.get());
  CHECK(frachc_run_levels(r.get()) == 9);
  CHECK(frachc_run_size(r.get()) == 31);
  double ei = 0.0, e2 = 0.0;
  CHECK(frachc_run_errors(r.get(), &ei, &e2) == FRACHC_OK);
  CHECK(ei > 0.0);
  CHECK(ei < 0.05);
  CHECK(e2 <= ei * std::sqrt(2.0));

  std::vector<double> t(9), m(9);
  CHECK(frachc_run_trace(r.get(), FRACHC_TRACE_TIME, t.data(), t.size()) == FRACHC_OK);
  CHECK(t.back() == doctest::Approx(1.0));
  CHECK(frachc_run_trace(r.get(), FRACHC_TRACE_ENERGY, m.data(), m.size()) ==
        FRACHC_ERR_UNAVAILABLE);
  CHECK(frachc_run_trace(r.get(), FRACHC_TRACE_TIME, t.data(), 3) == FRACHC_ERR_INVALID_ARGUMENT);
  CHECK(frachc_run_trace(r.get(), FRACHC_TRACE_MEAN_KRYLOV, m.data(), m.size()) == FRACHC_OK);
  CHECK(m[0] == 0.0);
  CHECK(m[5] > 0.0);

  std::vector<int> it(9);
  CHECK(frachc_run_newton_iters(r.get(), it.data(), it.size()) == FRACHC_OK);
  CHECK(it[1] == 0);
  CHECK(it[2] > 0);

  std::vector<double> phi(31), mu(31);
  CHECK(frachc_run_final_state(r.get(), phi.data(), mu.data(), 31) == FRACHC_OK);
  CHECK(phi[15] == doctest::Approx(std::exp(1.0)).epsilon(0.05));

  double i1 = 0.0, i2 = 0.0, secs = -1.0;
  CHECK(frachc_run_iteration_stats(r.get(), &i1, &i2) == FRACHC_OK);
  CHECK(i1 > 1.0);
  CHECK(frachc_run_solve_seconds(r.get(), &secs) == FRACHC_OK);
  CHECK(secs >= 0.0);
}

TEST_CASE("energy traces when tracking is on") {
  auto c = make_config(FRACHC_EXAMPLE2, 32, 16);
  CHECK(frachc_config_set_int(c.get(), FRACHC_TRACK_ENERGY, 1) == FRACHC_OK);
  auto r = simulate(c.get());
  std::vector<double> e(17), me(17);
  CHECK(frachc_run_trace(r.get(), FRACHC_TRACE_ENERGY, e.data(), e.size()) == FRACHC_OK);
  CHECK(frachc_run_trace(r.get(), FRACHC_TRACE_MODIFIED_ENERGY, me.data(), me.size()) == FRACHC_OK);
  for (int k = 2; k < 17; ++k) CHECK(me[k] <= me[k - 1] + 1e-12);
  double ei, e2;
  CHECK(frachc_run_errors(r.get(), &ei, &e2) == FRACHC_ERR_UNAVAILABLE);
}

namespace {

struct Seen {
  std::vector<int> steps;
  int stop_at = -1;
};

int observe(const frachc_step_info* info, void* user) {
  auto* s = static_cast<Seen*>(user);
  s->steps.push_back(info->step);
  if (info->step >= 2) {
    CHECK(info->newton_iters > 0);
    CHECK(info->krylov_iters != nullptr);
  }
  CHECK(info->n == 15);
  return info->step == s->stop_at ? 1 : 0;
}

}  // namespace

TEST_CASE("observer and cancellation") {
  auto c = make_config(FRACHC_EXAMPLE2, 16, 6);
  Seen all;
  frachc_run* r = nullptr;
  CHECK(frachc_simulate(c.get(), observe, &all, &r) == FRACHC_OK);
  Run owned(r);
  CHECK(all.steps == std::vector<int>{0, 1, 2, 3, 4, 5, 6});

  Seen some;
  some.stop_at = 3;
  frachc_run* r2 = nullptr;
  CHECK(frachc_simulate(c.get(), observe, &some, &r2) == FRACHC_ERR_CANCELLED);
  CHECK(r2 == nullptr);
  CHECK(some.steps.back() == 3);
}

TEST_CASE("Newton failure maps to NOT_CONVERGED") {
  auto c = make_config(FRACHC_EXAMPLE2, 32, 8);
  CHECK(frachc_config_set_int(c.get(), FRACHC_NEWTON_MAX_ITERS, 1) == FRACHC_OK);
  frachc_run* r = nullptr;
  CHECK(frachc_simulate(c.get(), nullptr, nullptr, &r) == FRACHC_ERR_NOT_CONVERGED);
  CHECK(std::string(frachc_last_error()).find("step 2") != std::string::npos);
}

TEST_CASE("dense and structured solvers agree through the API") {
  auto c = make_config(FRACHC_EXAMPLE2, 32, 16);
  auto a = simulate(c.get());
  CHECK(frachc_config_set_precond(c.get(), FRACHC_PRECOND_DENSE) == FRACHC_OK);
  auto b = simulate(c.get());
  std::vector<double> pa(31), pb(31), mu(31);
  frachc_run_final_state(a.get(), pa.data(), mu.data(), 31);
  frachc_run_final_state(b.get(), pb.data(), mu.data(), 31);
  for (int i = 0; i < 31; ++i) CHECK(std::abs(pa[i] - pb[i]) <= 1e-8);

  CHECK(frachc_config_set_int(c.get(), FRACHC_DENSE_CAP, 8) == FRACHC_OK);
  frachc_run* r = nullptr;
  CHECK(frachc_simulate(c.get(), nullptr, nullptr, &r) == FRACHC_ERR_CONFIG);
}

TEST_CASE("matrix export") {
  auto c = make_config(FRACHC_EXAMPLE2, 16, 8);
  size_t rows = 0;
  CHECK(frachc_matrix_rows(c.get(), FRACHC_MATRIX_G, &rows) == FRACHC_OK);
  CHECK(rows == 15);
  std::vector<double> G(rows * rows);
  CHECK(frachc_matrix_export(c.get(), FRACHC_MATRIX_G, G.data(), G.size()) == FRACHC_OK);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < rows; ++j) CHECK(G[i * rows + j] == G[j * rows + i]);
  CHECK(G[0] < 0.0);
  CHECK(G[1] > 0.0);

  std::vector<double> S(rows * rows);
  CHECK(frachc_matrix_export(c.get(), FRACHC_MATRIX_SKEW, S.data(), S.size()) == FRACHC_OK);
  for (size_t i = 0; i < rows; ++i) CHECK(S[i * rows + i] == G[0]);

  CHECK(frachc_matrix_rows(c.get(), FRACHC_MATRIX_JACOBIAN, &rows) == FRACHC_OK);
  CHECK(rows == 30);
  std::vector<double> J(rows * rows);
  CHECK(frachc_matrix_export(c.get(), FRACHC_MATRIX_JACOBIAN, J.data(), J.size()) == FRACHC_OK);
  CHECK(J[0] == 3.0);
  CHECK(frachc_matrix_export(c.get(), FRACHC_MATRIX_JACOBIAN, J.data(), 5) ==
        FRACHC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("certificates") {
  double center = 0, radius = 0;
  int definite = 0;
  CHECK(frachc_gershgorin(1.5, 64, 1.0, &center, &radius, &definite) == FRACHC_OK);
  CHECK(definite == 1);
  CHECK(radius < center);
  CHECK(frachc_gershgorin(2.5, 64, 1.0, &center, &radius, &definite) == FRACHC_ERR_CONFIG);
  CHECK(std::string(frachc_last_error_field()) == "alpha");

  double ratio = 0, bound = 0;
  int holds = 0;
  CHECK(frachc_distance_bound(1.5, 256, &ratio, &bound, &holds) == FRACHC_OK);
  CHECK(holds == 1);
  CHECK(bound < 2.0 / 3.0);

  double order = 0;
  CHECK(frachc_convergence_order(4e-4, 0.1, 1e-4, 0.05, &order) == FRACHC_OK);
  CHECK(order == doctest::Approx(2.0));
  CHECK(frachc_convergence_order(-1, 0.1, 1e-4, 0.05, &order) == FRACHC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("errors are per thread and handles can run concurrently") {
  auto c = make_config(FRACHC_EXAMPLE2, 32, 16);
  auto seq = simulate(c.get());
  std::vector<double> ref(31), mu(31);
  frachc_run_final_state(seq.get(), ref.data(), mu.data(), 31);

  std::vector<double> out[2];
  std::string other_error;
  std::thread workers[2];
  for (int w = 0; w < 2; ++w) {
    workers[w] = std::thread([&, w] {
      frachc_config* local = nullptr;
      frachc_config_clone(c.get(), &local);
      frachc_run* r = nullptr;
      if (frachc_simulate(local, nullptr, nullptr, &r) == FRACHC_OK) {
        out[w].resize(31);
        std::vector<double> m(31);
        frachc_run_final_state(r, out[w].data(), m.data(), 31);
      }
      frachc_run_destroy(r);
      frachc_config_destroy(local);
    });
  }
  frachc_config_create(FRACHC_EXAMPLE1, nullptr);
  const std::string mine = frachc_last_error();
  for (auto& t : workers) t.join();
  std::thread([&] {
    frachc_config_set_real(nullptr, FRACHC_ALPHA, 1.0);
    other_error = frachc_last_error();
  }).join();
  CHECK(std::string(frachc_last_error()) == mine);
  CHECK(other_error != mine);
  CHECK(out[0] == ref);
  CHECK(out[1] == ref);
}

// frachc command-line front end. Talks to the solver only through the C API.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "csv.hpp"
#include "frachc/frachc.h"
#include "svg.hpp"

namespace fs = std::filesystem;
using frachc::io::CsvWriter;
using frachc::io::format_number;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

// Error carrying the process exit code.
struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

void check(frachc_status s) {
  if (s == FRACHC_OK) return;
  std::string msg = frachc_last_error();
  if (s == FRACHC_ERR_CONFIG || s == FRACHC_ERR_INVALID_ARGUMENT || s == FRACHC_ERR_DOMAIN)
    throw CliError(kExitConfig, msg);
  throw CliError(kExitRun, std::string(frachc_status_string(s)) + ": " + msg);
}

struct ConfigDeleter {
  void operator()(frachc_config* c) const { frachc_config_destroy(c); }
};
struct RunDeleter {
  void operator()(frachc_run* r) const { frachc_run_destroy(r); }
};
using ConfigPtr = std::unique_ptr<frachc_config, ConfigDeleter>;
using RunPtr = std::unique_ptr<frachc_run, RunDeleter>;

class Log {
public:
  void open(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::app);
    if (!file_) throw CliError(kExitConfig, "cannot open log file " + path);
  }
  void operator()(const std::string& msg) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", std::localtime(&now));
    if (file_.is_open())
      file_ << stamp << ' ' << msg << std::endl;
    else if (!quiet)
      std::cerr << msg << std::endl;
  }
  bool quiet = false;

private:
  std::ofstream file_;
  std::mutex mutex_;
};

struct Options {
  std::string problem;
  std::optional<double> alpha, sigma, epsilon2, L, T, newton_tol, krylov_tol;
  std::optional<int> N, M, newton_max, krylov_max, dense_cap;
  std::string precond = "skew";
  std::string out = "out";
  std::string log_path;
  bool plots = false;
  bool allow_small_sigma = false;
  bool quiet = false;
  std::vector<int> M_list, N_list;
  std::vector<double> sigma_list;
  std::vector<std::string> variants;
};

frachc_problem parse_problem(const std::string& name) {
  if (name == "example1" || name == "1") return FRACHC_EXAMPLE1;
  if (name == "example2" || name == "2") return FRACHC_EXAMPLE2;
  if (name == "exampleA" || name == "examplea" || name == "A") return FRACHC_EXAMPLEA;
  throw CliError(kExitConfig, "problem: unknown problem '" + name + "'");
}

const char* problem_name(frachc_problem p) {
  switch (p) {
    case FRACHC_EXAMPLE1: return "example1";
    case FRACHC_EXAMPLE2: return "example2";
    case FRACHC_EXAMPLEA: return "exampleA";
  }
  return "unknown";
}

frachc_precond parse_precond(const std::string& name) {
  if (name == "none") return FRACHC_PRECOND_NONE;
  if (name == "skew") return FRACHC_PRECOND_SKEW;
  if (name == "circ") return FRACHC_PRECOND_CIRC;
  if (name == "dense") return FRACHC_PRECOND_DENSE;
  throw CliError(kExitConfig, "precond: unknown variant '" + name +
                                  "' (expected none, skew, circ, dense)");
}

ConfigPtr make_config(const Options& o, const std::string& default_problem) {
  const frachc_problem p = parse_problem(o.problem.empty() ? default_problem : o.problem);
  frachc_config* raw = nullptr;
  check(frachc_config_create(p, &raw));
  ConfigPtr c(raw);
  auto set_real = [&](frachc_real_param w, const std::optional<double>& v) {
    if (v) check(frachc_config_set_real(c.get(), w, *v));
  };
  auto set_int = [&](frachc_int_param w, const std::optional<int>& v) {
    if (v) check(frachc_config_set_int(c.get(), w, *v));
  };
  set_real(FRACHC_ALPHA, o.alpha);
  set_real(FRACHC_SIGMA, o.sigma);
  set_real(FRACHC_EPSILON2, o.epsilon2);
  set_real(FRACHC_HALF_WIDTH, o.L);
  set_real(FRACHC_FINAL_TIME, o.T);
  set_real(FRACHC_NEWTON_TOL, o.newton_tol);
  set_real(FRACHC_KRYLOV_TOL, o.krylov_tol);
  set_int(FRACHC_CELLS, o.N);
  set_int(FRACHC_STEPS, o.M);
  set_int(FRACHC_NEWTON_MAX_ITERS, o.newton_max);
  set_int(FRACHC_KRYLOV_MAX_ITERS, o.krylov_max);
  set_int(FRACHC_DENSE_CAP, o.dense_cap);
  check(frachc_config_set_int(c.get(), FRACHC_ALLOW_SMALL_SIGMA, o.allow_small_sigma ? 1 : 0));
  check(frachc_config_set_precond(c.get(), parse_precond(o.precond)));
  check(frachc_config_validate(c.get()));
  return c;
}

ConfigPtr clone(const frachc_config* c) {
  frachc_config* raw = nullptr;
  check(frachc_config_clone(c, &raw));
  return ConfigPtr(raw);
}

double get_real(const frachc_config* c, frachc_real_param w) {
  double v = 0.0;
  check(frachc_config_get_real(c, w, &v));
  return v;
}

int get_int(const frachc_config* c, frachc_int_param w) {
  int v = 0;
  check(frachc_config_get_int(c, w, &v));
  return v;
}

RunPtr simulate(const frachc_config* c) {
  frachc_run* raw = nullptr;
  check(frachc_simulate(c, nullptr, nullptr, &raw));
  return RunPtr(raw);
}

std::string tag(const frachc_config* c) {
  char buf[160];
  frachc_problem p;
  check(frachc_config_get_problem(c, &p));
  std::snprintf(buf, sizeof buf, "%s alpha=%g sigma=%g N=%d M=%d", problem_name(p),
                get_real(c, FRACHC_ALPHA), get_real(c, FRACHC_SIGMA), get_int(c, FRACHC_CELLS),
                get_int(c, FRACHC_STEPS));
  return buf;
}

int worker_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACHC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) cap = v;
  }
  return std::max(1, cap);
}

// Runs task(i) for i in [0, count) on up to worker_cap() threads. Results are
// owned by the caller and indexed by i, so output order never depends on timing.
template <class Task>
void parallel_for(int count, Task task) {
  const int workers = std::min(count, worker_cap());
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto body = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError(kExitConfig, "out: cannot create directory " + dir + ": " + ec.message());
}

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string int_str(long v) { return std::to_string(v); }

// ---------------------------------------------------------------------------

int cmd_simulate(const Options& o, Log& log) {
  auto cfg = make_config(o, "example2");
  check(frachc_config_set_int(cfg.get(), FRACHC_TRACK_ENERGY, 1));
  ensure_dir(o.out);
  log("simulate " + tag(cfg.get()));
  auto run = simulate(cfg.get());

  const size_t levels = frachc_run_levels(run.get());
  const size_t n = frachc_run_size(run.get());
  std::vector<double> t(levels), e(levels), me(levels), pinf(levels), kr(levels);
  std::vector<int> it1(levels);
  check(frachc_run_trace(run.get(), FRACHC_TRACE_TIME, t.data(), levels));
  check(frachc_run_trace(run.get(), FRACHC_TRACE_ENERGY, e.data(), levels));
  check(frachc_run_trace(run.get(), FRACHC_TRACE_MODIFIED_ENERGY, me.data(), levels));
  check(frachc_run_trace(run.get(), FRACHC_TRACE_PHI_INF, pinf.data(), levels));
  check(frachc_run_trace(run.get(), FRACHC_TRACE_MEAN_KRYLOV, kr.data(), levels));
  check(frachc_run_newton_iters(run.get(), it1.data(), levels));

  CsvWriter trace({"step", "time", "energy", "modified_energy", "phi_inf", "newton_iters",
                   "mean_krylov_iters"});
  for (size_t k = 0; k < levels; ++k)
    trace.add_row({int_str(static_cast<long>(k)), format_number(t[k]), format_number(e[k]),
                   format_number(me[k]), format_number(pinf[k]), int_str(it1[k]),
                   format_number(kr[k])});
  trace.save(path_in(o.out, "trace.csv"));

  std::vector<double> x(n), phi(n), mu(n);
  check(frachc_config_nodes(cfg.get(), x.data(), n));
  check(frachc_run_final_state(run.get(), phi.data(), mu.data(), n));
  CsvWriter fin({"x", "phi", "mu"});
  for (size_t i = 0; i < n; ++i)
    fin.add_row({format_number(x[i]), format_number(phi[i]), format_number(mu[i])});
  fin.save(path_in(o.out, "final.csv"));

  double iter1 = 0, iter2 = 0, err_inf = 0, err_2 = 0;
  check(frachc_run_iteration_stats(run.get(), &iter1, &iter2));
  const bool has_exact = frachc_run_errors(run.get(), &err_inf, &err_2) == FRACHC_OK;
  frachc_problem prob;
  check(frachc_config_get_problem(cfg.get(), &prob));
  CsvWriter summary({"problem", "alpha", "epsilon2", "sigma", "L", "T", "N", "M", "precond",
                     "iter1", "iter2", "err_inf", "err_2"});
  summary.add_row({problem_name(prob), format_number(get_real(cfg.get(), FRACHC_ALPHA)),
                   format_number(get_real(cfg.get(), FRACHC_EPSILON2)),
                   format_number(get_real(cfg.get(), FRACHC_SIGMA)),
                   format_number(get_real(cfg.get(), FRACHC_HALF_WIDTH)),
                   format_number(get_real(cfg.get(), FRACHC_FINAL_TIME)),
                   int_str(get_int(cfg.get(), FRACHC_CELLS)),
                   int_str(get_int(cfg.get(), FRACHC_STEPS)), o.precond, format_number(iter1),
                   format_number(iter2), has_exact ? format_number(err_inf) : "",
                   has_exact ? format_number(err_2) : ""});
  summary.save(path_in(o.out, "summary.csv"));

  if (o.plots) {
    frachc::io::Plot pe{"Energy", "t", "energy", false, false,
                        {{"E_h", t, e, false}, {"modified", t, me, false}}};
    frachc::io::save_svg(path_in(o.out, "energy.svg"), pe);
    frachc::io::Plot pp{"Final profile", "x", "value", false, false,
                        {{"phi", x, phi, false}, {"mu", x, mu, false}}};
    frachc::io::save_svg(path_in(o.out, "profile.svg"), pp);
  }
  double secs = 0;
  check(frachc_run_solve_seconds(run.get(), &secs));
  log("simulate done: iter1=" + format_number(iter1) + " iter2=" + format_number(iter2) +
      " solve_seconds=" + format_number(secs));
  return 0;
}

struct LadderEntry {
  int level = 0;  // M or N
  double step = 0.0;
  double err_inf = 0.0, err_2 = 0.0;
};

std::vector<LadderEntry> run_ladder(const frachc_config* base, const std::vector<int>& levels,
                                    frachc_int_param which, Log& log) {
  std::vector<LadderEntry> out(levels.size());
  std::vector<ConfigPtr> cfgs;
  for (int lv : levels) {
    cfgs.push_back(clone(base));
    check(frachc_config_set_int(cfgs.back().get(), which, lv));
    check(frachc_config_validate(cfgs.back().get()));
  }
  parallel_for(static_cast<int>(levels.size()), [&](int i) {
    const frachc_config* c = cfgs[i].get();
    log("run " + tag(c));
    auto run = simulate(c);
    LadderEntry& e = out[i];
    e.level = levels[i];
    e.step = which == FRACHC_STEPS
                 ? get_real(c, FRACHC_FINAL_TIME) / levels[i]
                 : 2.0 * get_real(c, FRACHC_HALF_WIDTH) / levels[i];
    check(frachc_run_errors(run.get(), &e.err_inf, &e.err_2));
    log("done " + tag(c) + " err_inf=" + format_number(e.err_inf));
  });
  return out;
}

std::string order_cell(const std::vector<LadderEntry>& l, size_t i, bool inf) {
  if (i == 0) return "";
  double co = 0.0;
  const auto& a = l[i - 1];
  const auto& b = l[i];
  check(frachc_convergence_order(inf ? a.err_inf : a.err_2, a.step, inf ? b.err_inf : b.err_2,
                                 b.step, &co));
  return format_number(co);
}

void require_exact(const frachc_config* c, const char* verb) {
  frachc_problem p;
  check(frachc_config_get_problem(c, &p));
  if (p == FRACHC_EXAMPLE2)
    throw CliError(kExitConfig,
                   std::string("problem: ") + verb + " needs a problem with an exact solution");
}

int cmd_order(const Options& o, Log& log, bool time) {
  Options oo = o;
  frachc_problem p = parse_problem(o.problem.empty() ? "example1" : o.problem);
  if (time && !oo.N) oo.N = 2048;
  if (!time && !oo.M) oo.M = 1024;
  auto cfg = make_config(oo, "example1");
  require_exact(cfg.get(), time ? "order-time" : "order-space");
  std::vector<int> levels = time ? o.M_list : o.N_list;
  if (levels.empty()) {
    if (time)
      levels = p == FRACHC_EXAMPLEA ? std::vector<int>{16, 32, 64, 128, 256}
                                    : std::vector<int>{8, 16, 32, 64, 128};
    else
      levels = {16, 32, 64, 128, 256};
  }
  ensure_dir(o.out);
  const auto ladder = run_ladder(cfg.get(), levels, time ? FRACHC_STEPS : FRACHC_CELLS, log);

  const char* level_name = time ? "M" : "N";
  CsvWriter csv({"alpha", level_name, time ? "tau" : "h", "err_inf", "co_inf", "err_2", "co_2"});
  const double alpha = get_real(cfg.get(), FRACHC_ALPHA);
  for (size_t i = 0; i < ladder.size(); ++i)
    csv.add_row({format_number(alpha), int_str(ladder[i].level), format_number(ladder[i].step),
                 format_number(ladder[i].err_inf), order_cell(ladder, i, true),
                 format_number(ladder[i].err_2), order_cell(ladder, i, false)});
  const std::string name = time ? "order_time" : "order_space";
  csv.save(path_in(o.out, name + ".csv"));

  if (o.plots) {
    frachc::io::Series si{"Err_inf", {}, {}, true}, s2{"Err_2", {}, {}, true};
    for (const auto& e : ladder) {
      si.x.push_back(e.step);
      si.y.push_back(e.err_inf);
      s2.x.push_back(e.step);
      s2.y.push_back(e.err_2);
    }
    frachc::io::Plot plot{time ? "Temporal convergence" : "Spatial convergence",
                          time ? "tau" : "h", "error", true, true, {si, s2}};
    frachc::io::save_svg(path_in(o.out, name + ".svg"), plot);
  }
  return 0;
}

int cmd_sigma_sweep(const Options& o, Log& log) {
  Options oo = o;
  if (!oo.N) oo.N = 512;
  oo.sigma.reset();
  auto base = make_config(oo, "example1");
  require_exact(base.get(), "sigma-sweep");
  const std::vector<double> sigmas =
      o.sigma_list.empty() ? std::vector<double>{1.0 / 16.0, 1.0, 1.8, 3.0, 5.0} : o.sigma_list;
  const std::vector<int> levels =
      o.M_list.empty() ? std::vector<int>{8, 16, 32, 64, 128} : o.M_list;
  ensure_dir(o.out);

  CsvWriter csv({"sigma", "M", "tau", "err_inf", "err_2"});
  frachc::io::Plot plot{"Error versus tau", "tau", "Err_inf", true, true, {}};
  for (double s : sigmas) {
    auto c = clone(base.get());
    check(frachc_config_set_real(c.get(), FRACHC_SIGMA, s));
    check(frachc_config_validate(c.get()));
    const auto ladder = run_ladder(c.get(), levels, FRACHC_STEPS, log);
    frachc::io::Series series{"sigma=" + format_number(s).substr(0, 6), {}, {}, true};
    for (const auto& e : ladder) {
      csv.add_row({format_number(s), int_str(e.level), format_number(e.step),
                   format_number(e.err_inf), format_number(e.err_2)});
      series.x.push_back(e.step);
      series.y.push_back(e.err_inf);
    }
    plot.series.push_back(std::move(series));
  }
  csv.save(path_in(o.out, "sigma_sweep.csv"));
  if (o.plots) frachc::io::save_svg(path_in(o.out, "sigma_sweep.svg"), plot);
  return 0;
}

int cmd_precond_bench(const Options& o, Log& log) {
  if (!o.problem.empty() && parse_problem(o.problem) != FRACHC_EXAMPLE2)
    throw CliError(kExitConfig, "problem: precond-bench runs Example 2 only");
  Options oo = o;
  oo.problem = "example2";
  auto base = make_config(oo, "example2");
  const std::vector<int> sizes =
      o.N_list.empty() ? std::vector<int>{64, 128, 256, 512} : o.N_list;
  const std::vector<std::string> variants =
      o.variants.empty() ? std::vector<std::string>{"dense", "circ", "skew"} : o.variants;
  ensure_dir(o.out);

  const double alpha = get_real(base.get(), FRACHC_ALPHA);
  CsvWriter csv({"alpha", "N", "M", "variant", "iter1", "iter2"});
  CsvWriter timing({"alpha", "N", "variant", "solve_seconds"});
  // Sequential on purpose: concurrent runs would distort the timings.
  for (int N : sizes) {
    for (const auto& v : variants) {
      auto c = clone(base.get());
      check(frachc_config_set_int(c.get(), FRACHC_CELLS, N));
      check(frachc_config_set_int(c.get(), FRACHC_STEPS, N));
      check(frachc_config_set_precond(c.get(), parse_precond(v)));
      check(frachc_config_validate(c.get()));
      log("bench " + v + " " + tag(c.get()));
      auto run = simulate(c.get());
      double i1 = 0, i2 = 0, secs = 0;
      check(frachc_run_iteration_stats(run.get(), &i1, &i2));
      check(frachc_run_solve_seconds(run.get(), &secs));
      csv.add_row({format_number(alpha), int_str(N), int_str(N), v, format_number(i1),
                   format_number(i2)});
      timing.add_row({format_number(alpha), int_str(N), v, format_number(secs)});
      log("bench " + v + " N=" + int_str(N) + " iter1=" + format_number(i1) +
          " iter2=" + format_number(i2) + " seconds=" + format_number(secs));
    }
  }
  csv.save(path_in(o.out, "precond_bench.csv"));
  timing.save(path_in(o.out, "precond_bench_timing.csv"));
  return 0;
}

int cmd_export_operator(const Options& o, Log& log) {
  auto cfg = make_config(o, "example2");
  ensure_dir(o.out);
  const std::pair<frachc_matrix, const char*> mats[] = {{FRACHC_MATRIX_G, "G.csv"},
                                                        {FRACHC_MATRIX_SKEW, "skew.csv"},
                                                        {FRACHC_MATRIX_CIRC, "circ.csv"},
                                                        {FRACHC_MATRIX_JACOBIAN, "jacobian.csv"}};
  for (const auto& [which, name] : mats) {
    size_t rows = 0;
    check(frachc_matrix_rows(cfg.get(), which, &rows));
    std::vector<double> a(rows * rows);
    check(frachc_matrix_export(cfg.get(), which, a.data(), a.size()));
    frachc::io::save_matrix(path_in(o.out, name), a, rows, rows);
    log(std::string("exported ") + name + " (" + int_str(static_cast<long>(rows)) + "x" +
        int_str(static_cast<long>(rows)) + ")");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-fractional Cahn-Hilliard solver (mBDF2, Newton, preconditioned FGMRES)",
               "frachc"};
  app.set_config("--config", "", "TOML file with option defaults; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--problem", o.problem, "example1 | example2 | exampleA");
  app.add_option("--alpha", o.alpha, "Fractional order, 1 < alpha < 2");
  app.add_option("--sigma", o.sigma, "Stabilization parameter (>= 1/16)");
  app.add_option("--epsilon2", o.epsilon2, "Interface parameter epsilon^2");
  app.add_option("--L", o.L, "Domain half-width");
  app.add_option("--T", o.T, "Final time");
  app.add_option("--N", o.N, "Spatial cells");
  app.add_option("--M", o.M, "Time steps");
  app.add_option("--precond", o.precond, "none | skew | circ | dense")
      ->check(CLI::IsMember({"none", "skew", "circ", "dense"}));
  app.add_option("--newton-tol", o.newton_tol, "Newton relative update tolerance");
  app.add_option("--newton-max", o.newton_max, "Newton iteration cap");
  app.add_option("--krylov-tol", o.krylov_tol, "FGMRES relative residual tolerance");
  app.add_option("--krylov-max", o.krylov_max, "FGMRES iteration cap");
  app.add_option("--dense-cap", o.dense_cap, "Largest N - 1 for dense solves and exports");
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--log", o.log_path, "Append timestamped progress to this file");
  app.add_flag("--plots", o.plots, "Also write SVG plots");
  app.add_flag("--allow-small-sigma", o.allow_small_sigma,
               "Accept sigma < 1/16 (energy stability not guaranteed)");
  app.add_flag("-q,--quiet", o.quiet, "No progress messages on stderr");
  app.add_option("--M-list", o.M_list, "Time-step ladder")->delimiter(',');
  app.add_option("--N-list", o.N_list, "Spatial ladder")->delimiter(',');
  app.add_option("--sigma-list", o.sigma_list, "Sigma values for sigma-sweep")->delimiter(',');
  app.add_option("--variants", o.variants, "Preconditioners for precond-bench")->delimiter(',');

  auto* sim = app.add_subcommand("simulate", "Run one simulation; write trace, final state, summary");
  auto* ot = app.add_subcommand("order-time", "Temporal convergence ladder over --M-list");
  auto* os = app.add_subcommand("order-space", "Spatial convergence ladder over --N-list");
  auto* ss = app.add_subcommand("sigma-sweep", "Error versus tau for each sigma in --sigma-list");
  auto* pb = app.add_subcommand("precond-bench", "Iteration counts and timings with M = N");
  auto* ex = app.add_subcommand("export-operator", "Write dense G, sk(G), s(G) and a Jacobian");

  CLI11_PARSE(app, argc, argv);

  Log log;
  log.quiet = o.quiet;
  try {
    log.open(o.log_path);
    if (*sim) return cmd_simulate(o, log);
    if (*ot) return cmd_order(o, log, true);
    if (*os) return cmd_order(o, log, false);
    if (*ss) return cmd_sigma_sweep(o, log);
    if (*pb) return cmd_precond_bench(o, log);
    if (*ex) return cmd_export_operator(o, log);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

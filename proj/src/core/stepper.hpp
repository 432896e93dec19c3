#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/frac_operator.hpp"
#include "core/krylov.hpp"
#include "core/model.hpp"

namespace frachc {

struct SchemeState {
  std::vector<double> phi_prev;  // phi^{j-1}
  std::vector<double> phi_curr;  // phi^j
  std::vector<double> mu_prev;   // mu^{j-1}
  std::vector<double> mu_curr;   // mu^j
  int step_index = 0;            // j
  double time = 0.0;             // t_j
};

struct NewtonConfig {
  int max_iters = 200;
  double rel_tol = 1e-12;
  double norm_floor = 1e-300;  // guards ||psi^(0)|| = 0
};

void validate(const NewtonConfig& cfg);

// A time step whose Newton iteration failed. Carries the step index and the
// last update/residual norms.
class StepFailure : public std::runtime_error {
public:
  StepFailure(int step, const std::string& what, double last_update, double last_residual)
      : std::runtime_error("step " + std::to_string(step) + ": " + what),
        step_(step),
        last_update_(last_update),
        last_residual_(last_residual) {}
  int step() const noexcept { return step_; }
  double last_update() const noexcept { return last_update_; }
  double last_residual() const noexcept { return last_residual_; }

private:
  int step_;
  double last_update_;
  double last_residual_;
};

struct SolverOptions {
  NewtonConfig newton;
  KrylovConfig krylov;
  PrecondVariant variant = PrecondVariant::Skew;
  int dense_cap = kDefaultDenseCap;
  bool track_energy = false;
};

// Everything a step needs that does not change over a run.
struct StepContext {
  ModelParams params;
  Discretization disc;
  FracOperator op;
  StructuredOperators ops;
  Problem problem;

  static StepContext make(const Problem& problem, const ModelParams& params,
                          const Discretization& disc);
};

struct FirstStep {
  std::vector<double> phi1;
  std::vector<double> mu0;
};

// mu^0 = (phi^0)^3 - phi^0 - eps2 G phi^0 + psi(., 0);
// phi^1 = phi^0 + tau (G mu^0 + f(., 0)).
FirstStep first_step(const std::vector<double>& phi0, const StepContext& ctx);

// F(psi) for psi = [phi^{j+1}; mu^{j+1}].
std::vector<double> residual(const std::vector<double>& psi_next, const SchemeState& state,
                             const StepContext& ctx);

struct NewtonResult {
  std::vector<double> psi;  // [phi^{j+1}; mu^{j+1}]
  int iters = 0;
  std::vector<int> krylov_iters;
  std::vector<double> update_history;  // ||dpsi|| / ||psi^(0)||
  std::vector<double> residual_history;  // ||F(psi^(l))||_2 before each update
  // Spectrum of the Schur surrogate at each Newton iterate (only when requested).
  std::vector<cvec> schur_spectra;
};

// Initial guess [phi^j; mu^j] for j = 1, linear extrapolation for j >= 2.
std::vector<double> newton_initial_guess(const SchemeState& state);

NewtonResult newton_solve(const SchemeState& state, const StepContext& ctx,
                          const SolverOptions& opts, bool keep_spectra = false);

struct StepInfo {
  int step = 0;  // k, time level just computed
  double time = 0.0;
  const std::vector<double>* phi = nullptr;
  const std::vector<double>* mu = nullptr;
  int newton_iters = 0;
  const std::vector<int>* krylov_iters = nullptr;
  const NewtonResult* newton = nullptr;  // null for k <= 1
};

using StepObserver = std::function<void(const StepInfo&)>;

// Runs M steps; `observer` (optional) is invoked for k = 0..M.
RunRecord run(const Problem& problem, const ModelParams& params, const Discretization& disc,
              const SolverOptions& opts, const StepObserver& observer = {});

}  // namespace frachc

#pragma once

#include <limits>
#include <vector>

#include "core/model.hpp"
#include "core/structured.hpp"

namespace frachc {

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

// ||u||_p^p = h sum |u_k|^p for p in {2, 4}; p = kInfNorm gives the max.
double norm_p(const std::vector<double>& u, double p, double h);

// sqrt(h u^T (-G)^{-1} u), solved by unpreconditioned CG.
double norm_neg1(const std::vector<double>& u, const SymmetricToeplitz& G, double h);

// 1/4 ||phi||_4^4 - 1/2 ||phi||_2^2 + |Omega|/4 + (eps2/2) h phi^T (-G) phi
double discrete_energy(const std::vector<double>& phi, const SymmetricToeplitz& G,
                       const ModelParams& params, const Discretization& disc);

// E_h(phi_next) + ||phi_next - phi_curr||_{-1}^2 / (4 tau) + ||phi_next - phi_curr||_2^2 / 2
double modified_energy(const std::vector<double>& phi_next, const std::vector<double>& phi_curr,
                       const SymmetricToeplitz& G, const ModelParams& params,
                       const Discretization& disc);

// Per-step record; index k = 0..M refers to time level t_k. Index 0 is the
// initial state, index 1 the explicit first step.
struct RunRecord {
  std::vector<double> time;
  std::vector<double> energy;           // E_h(phi^k); empty unless tracked
  std::vector<double> modified_energy;  // E_h(phi^k, phi^{k-1}), [0] = E_h(phi^0)
  std::vector<double> phi_inf;
  std::vector<int> newton_iters;                  // Iter1 per level, 0 for k <= 1
  std::vector<std::vector<int>> krylov_iters;     // Krylov count per Newton iteration
  std::vector<double> phi;  // final phi^M
  std::vector<double> mu;   // final mu^M
  double solve_seconds = 0.0;

  int steps() const { return time.empty() ? 0 : static_cast<int>(time.size()) - 1; }
};

struct ErrorReport {
  double err_inf = 0.0;
  double err_2 = 0.0;
};

ErrorReport error_metrics(const std::vector<double>& phi, const Problem& problem,
                          const ModelParams& params, const Discretization& disc, double t);

// log(err_coarse / err_fine) / log(step_coarse / step_fine)
double convergence_order(double err_coarse, double step_coarse, double err_fine, double step_fine);

struct IterationStats {
  double iter1 = 0.0;
  double iter2 = 0.0;
};

// Iter1 = (1/M) sum_j Iter1(j); Iter2 = (1/M) sum_j sum_l Iter2(l) / Iter1(j),
// over j = 0..M-1 with the explicit step contributing zero.
IterationStats iteration_stats(const RunRecord& record);

}  // namespace frachc

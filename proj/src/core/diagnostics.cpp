#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace frachc {

double norm_p(const std::vector<double>& u, double p, double h) {
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(h * s);
  }
  if (p == 4.0) {
    double s = 0.0;
    for (double v : u) s += (v * v) * (v * v);
    return std::pow(h * s, 0.25);
  }
  throw std::invalid_argument("norm_p: unsupported p = " + std::to_string(p));
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Solves (-G) x = b.
std::vector<double> cg_neg(const SymmetricToeplitz& G, const std::vector<double>& b) {
  const std::size_t n = b.size();
  std::vector<double> x(n, 0.0), r(b), p(b);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return x;
  double rr = dot(r, r);
  const int max_iters = 10 * static_cast<int>(n);
  for (int it = 0; it < max_iters; ++it) {
    auto Ap = G.matvec(p);
    for (double& v : Ap) v = -v;
    const double alpha = rr / dot(p, Ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    const double rr_new = dot(r, r);
    if (std::sqrt(rr_new) <= 1e-12 * bnorm) return x;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  throw std::runtime_error("norm_neg1: conjugate gradients did not converge in " +
                           std::to_string(max_iters) + " iterations");
}

}  // namespace

double norm_neg1(const std::vector<double>& u, const SymmetricToeplitz& G, double h) {
  if (static_cast<int>(u.size()) != G.size())
    throw std::invalid_argument("norm_neg1: length mismatch");
  const auto w = cg_neg(G, u);
  return std::sqrt(std::max(0.0, h * dot(u, w)));
}

double discrete_energy(const std::vector<double>& phi, const SymmetricToeplitz& G,
                       const ModelParams& params, const Discretization& disc) {
  const double h = disc.h;
  double s2 = 0.0, s4 = 0.0;
  for (double v : phi) {
    s2 += v * v;
    s4 += (v * v) * (v * v);
  }
  const auto Gphi = G.matvec(phi);
  const double quad = -h * dot(phi, Gphi);
  return 0.25 * h * s4 - 0.5 * h * s2 + 0.25 * (2.0 * params.L) + 0.5 * params.epsilon2 * quad;
}

double modified_energy(const std::vector<double>& phi_next, const std::vector<double>& phi_curr,
                       const SymmetricToeplitz& G, const ModelParams& params,
                       const Discretization& disc) {
  std::vector<double> d(phi_next.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = phi_next[i] - phi_curr[i];
  const double e = discrete_energy(phi_next, G, params, disc);
  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) return e;
  const double n1 = norm_neg1(d, G, disc.h);
  const double n2 = norm_p(d, 2.0, disc.h);
  return e + n1 * n1 / (4.0 * disc.tau) + 0.5 * n2 * n2;
}

ErrorReport error_metrics(const std::vector<double>& phi, const Problem& problem,
                          const ModelParams& params, const Discretization& disc, double t) {
  if (!problem.has_exact())
    throw std::invalid_argument(std::string("error_metrics: problem ") + to_string(problem.kind) +
                                " has no exact solution");
  const auto exact = sample_interior(problem.exact_phi, params, disc, t);
  if (exact.size() != phi.size()) throw std::invalid_argument("error_metrics: length mismatch");
  ErrorReport r;
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double e = std::abs(phi[i] - exact[i]);
    r.err_inf = std::max(r.err_inf, e);
    s += e * e;
  }
  r.err_2 = std::sqrt(disc.h * s);
  return r;
}

double convergence_order(double err_coarse, double step_coarse, double err_fine,
                         double step_fine) {
  if (!(err_coarse > 0.0 && err_fine > 0.0))
    throw std::invalid_argument("convergence_order: errors must be positive");
  if (!(step_coarse > 0.0 && step_fine > 0.0) || step_coarse == step_fine)
    throw std::invalid_argument("convergence_order: step sizes must be positive and distinct");
  return std::log(err_coarse / err_fine) / std::log(step_coarse / step_fine);
}

IterationStats iteration_stats(const RunRecord& record) {
  IterationStats s;
  const int M = record.steps();
  if (M == 0) return s;
  double sum1 = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < record.newton_iters.size(); ++k) {
    const int it1 = record.newton_iters[k];
    sum1 += it1;
    if (it1 == 0) continue;
    double inner = 0.0;
    for (int c : record.krylov_iters[k]) inner += c;
    sum2 += inner / it1;
  }
  s.iter1 = sum1 / M;
  s.iter2 = sum2 / M;
  return s;
}

}  // namespace frachc

#include "core/frac_operator.hpp"

#include <cmath>
#include <numbers>

namespace frachc {

namespace {

// (l+1)^nu - (l-1)^nu without the cancellation of the direct form at large l.
double power_difference(double l, double nu) {
  if (l <= 1.0) return std::pow(l + 1.0, nu) - std::pow(l - 1.0, nu);
  const double inv = 1.0 / l;
  return std::pow(l, nu) *
         (std::expm1(nu * std::log1p(inv)) - std::expm1(nu * std::log1p(-inv)));
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

FracWeights frac_weights(double alpha, int N) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("frac_weights: alpha must lie in (1, 2)");
  if (N < 4) throw DomainError("frac_weights: N must be at least 4");

  const double gamma = 1.0 + alpha / 2.0;
  const double nu = 1.0 - alpha / 2.0;

  FracWeights w;
  w.alpha = alpha;
  w.N = N;
  w.g.resize(N - 1);

  // Smallest terms first: far-field tail, boundary cell, then l = N-1 .. 1.
  const double n = N;
  KahanSum g0;
  g0.add(2.0 * nu / (alpha * std::pow(n, alpha)));
  g0.add(std::pow(n, nu) * -std::expm1(nu * std::log1p(-1.0 / n)) / std::pow(n, gamma));
  for (int l = N - 1; l >= 1; --l) {
    const double ld = l;
    g0.add(power_difference(ld, nu) / std::pow(ld, gamma));
  }
  w.g[0] = g0.sum;

  for (int k = 1; k <= N - 2; ++k) {
    const double kd = k;
    w.g[k] = -power_difference(kd, nu) / (2.0 * std::pow(kd, gamma));
  }
  return w;
}

double c1_alpha(double alpha) {
  return std::pow(2.0, alpha - 1.0) * alpha * gamma_fn((alpha + 1.0) / 2.0) /
         (std::sqrt(std::numbers::pi) * gamma_fn(1.0 - alpha / 2.0));
}

double scale_constant(double alpha, double h) {
  if (!(h > 0.0)) throw DomainError("scale_constant: h must be positive");
  const double nu = 1.0 - alpha / 2.0;
  return c1_alpha(alpha) / (nu * std::pow(h, alpha));
}

FracOperator build_operator(const ModelParams& params, const Discretization& disc) {
  FracOperator op;
  op.weights = frac_weights(params.alpha, disc.N);
  op.scale = scale_constant(params.alpha, disc.h);
  op.first_column.resize(op.weights.g.size());
  for (std::size_t k = 0; k < op.weights.g.size(); ++k)
    op.first_column[k] = -op.scale * op.weights.g[k];
  return op;
}

GershgorinReport gershgorin_check(const FracOperator& op) {
  KahanSum off;
  const auto& g = op.weights.g;
  for (std::size_t k = g.size() - 1; k >= 1; --k) off.add(std::abs(g[k]));
  GershgorinReport r;
  r.center = op.scale * g[0];
  // Each row has off-diagonal entries on both sides of the diagonal.
  r.max_radius = 2.0 * op.scale * off.sum;
  r.is_definite = r.max_radius < r.center;
  return r;
}

std::vector<double> dense(const FracOperator& op) {
  const int n = op.size();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = op.entry(i, j);
  return a;
}

}  // namespace frachc

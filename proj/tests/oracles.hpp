#pragma once

// Reference computations for the tests, written independently of the library
// code paths they check.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Terminating 2F1(a, -p; 1/2; z).
inline long double hyp2f1_terminating(long double a, int p, long double z) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 0; k < p; ++k) {
    term *= (a + k) * (-p + k) / ((0.5L + k) * (k + 1)) * z;
    sum += term;
  }
  return sum;
}

// (-Laplacian)^{alpha/2} of (1 - x^2)_+^{p + alpha/2} on the real line, |x| < 1.
inline long double frac_laplacian_bump(long double alpha, int p, long double x) {
  const long double pre = std::pow(2.0L, alpha) * std::tgamma((alpha + 1.0L) / 2.0L) *
                          std::tgamma(p + 1.0L + alpha / 2.0L) /
                          (std::sqrt(std::numbers::pi_v<long double>) * std::tgamma(p + 1.0L));
  return pre * hyp2f1_terminating((1.0L + alpha) / 2.0L, p, x * x);
}

// Weights by the displayed formulas, evaluated in long double in natural order.
inline std::vector<long double> weights(long double alpha, int N) {
  const long double gamma = 1.0L + alpha / 2.0L, nu = 1.0L - alpha / 2.0L;
  std::vector<long double> g(N - 1);
  long double g0 = 0.0L;
  for (int l = 1; l <= N - 1; ++l)
    g0 += (std::pow(l + 1.0L, nu) - std::pow(l - 1.0L, nu)) / std::pow((long double)l, gamma);
  g0 += (std::pow((long double)N, nu) - std::pow(N - 1.0L, nu)) / std::pow((long double)N, gamma);
  g0 += 2.0L * nu / (alpha * std::pow((long double)N, alpha));
  g[0] = g0;
  for (int k = 1; k <= N - 2; ++k)
    g[k] = -(std::pow(k + 1.0L, nu) - std::pow(k - 1.0L, nu)) / (2.0L * std::pow((long double)k, gamma));
  return g;
}

inline long double c1_alpha(long double alpha) {
  return std::pow(2.0L, alpha - 1.0L) * alpha * std::tgamma((alpha + 1.0L) / 2.0L) /
         (std::sqrt(std::numbers::pi_v<long double>) * std::tgamma(1.0L - alpha / 2.0L));
}

// Dense G for domain (-L, L) with N cells.
inline Mat dense_G(double alpha, int N, double L) {
  const auto g = weights(alpha, N);
  const long double h = 2.0L * L / N;
  const long double ch = c1_alpha(alpha) / ((1.0L - alpha / 2.0L) * std::pow(h, (long double)alpha));
  const int n = N - 1;
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = static_cast<double>(-ch * g[std::abs(i - j)]);
  return G;
}

inline Mat dense_circulant(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = c[((i - j) % n + n) % n];
  return A;
}

inline Mat dense_skew_circulant(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = i >= j ? c[i - j] : -c[n + i - j];
  return A;
}

inline Vec to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline double rel_err(const Vec& a, const Vec& b) {
  const double s = std::max(b.norm(), 1e-300);
  return (a - b).norm() / s;
}

}  // namespace oracle

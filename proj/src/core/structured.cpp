#include "core/structured.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace frachc {

namespace {

constexpr double kImagResidueTol = 1e-12;
constexpr double kSingularTol = 1e-14;

void check_length(std::size_t got, int want, const char* where) {
  if (static_cast<int>(got) != want)
    throw std::invalid_argument(std::string(where) + ": length mismatch (got " +
                                std::to_string(got) + ", expected " + std::to_string(want) + ")");
}

cvec to_complex(const std::vector<double>& v) { return cvec(v.begin(), v.end()); }

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Real part of z; throws if the imaginary residue is not roundoff relative to `scale`.
std::vector<double> real_part_checked(const cvec& z, double scale, const char* where) {
  std::vector<double> out(z.size());
  double imag = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    out[k] = z[k].real();
    imag = std::max(imag, std::abs(z[k].imag()));
  }
  if (imag > kImagResidueTol * std::max(scale, inf_norm(out))) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: imaginary residue %.3e exceeds roundoff (scale %.3e)",
                  where, imag, std::max(scale, inf_norm(out)));
    throw std::runtime_error(buf);
  }
  return out;
}

std::vector<double> real_part(const cvec& z, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = z[k].real();
  return out;
}

cvec apply_map(const cvec& eig, const SpectrumMap& map, const char* where) {
  cvec mapped(eig.size());
  for (std::size_t k = 0; k < eig.size(); ++k) {
    mapped[k] = map(eig[k]);
    if (std::abs(mapped[k]) < kSingularTol)
      throw std::runtime_error(std::string(where) + ": mapped eigenvalue " + std::to_string(k) +
                               " is singular");
  }
  return mapped;
}

// The spectrum of a real matrix is closed under conjugation: lambda[pair(k)] ==
// conj(lambda[k]). Roundoff in the transform breaks this slightly, which leaks
// into the imaginary part of solves; restore it exactly. A symmetric matrix has
// a real spectrum, so its imaginary parts are dropped too.
template <class Pair>
void restore_conjugate_pairs(cvec& eig, bool symmetric, Pair pair) {
  const std::size_t n = eig.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = pair(k);
    if (q < k) continue;
    const std::complex<double> avg = 0.5 * (eig[k] + std::conj(eig[q]));
    eig[k] = symmetric ? std::complex<double>(avg.real(), 0.0) : avg;
    eig[q] = std::conj(eig[k]);
  }
}

bool has_wrap_symmetry(const std::vector<double>& c, double sign) {
  const std::size_t n = c.size();
  for (std::size_t k = 1; k < n; ++k)
    if (c[n - k] != sign * c[k]) return false;
  return true;
}

}  // namespace

SymmetricToeplitz::SymmetricToeplitz(std::vector<double> first_column)
    : col_(std::move(first_column)) {
  const std::size_t n = col_.size();
  if (n == 0) throw std::invalid_argument("SymmetricToeplitz: empty column");
  cvec c(2 * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) c[k] = col_[k];
  for (std::size_t k = 1; k < n; ++k) c[2 * n - k] = col_[k];
  fft_forward(c, symbol_);
}

std::vector<double> SymmetricToeplitz::matvec(const std::vector<double>& v) const {
  const std::size_t n = col_.size();
  check_length(v.size(), size(), "toeplitz_matvec");
  cvec x(2 * n, 0.0), X;
  for (std::size_t k = 0; k < n; ++k) x[k] = v[k];
  fft_forward(x, X);
  for (std::size_t k = 0; k < 2 * n; ++k) X[k] *= symbol_[k];
  fft_inverse(X, x);
  return real_part(x, n);
}

Circulant::Circulant(std::vector<double> first_column) : col_(std::move(first_column)) {
  if (col_.empty()) throw std::invalid_argument("Circulant: empty column");
  fft_forward(to_complex(col_), eig_);
  const std::size_t n = col_.size();
  restore_conjugate_pairs(eig_, has_wrap_symmetry(col_, 1.0),
                          [n](std::size_t k) { return (n - k) % n; });
}

cvec Circulant::map_spectrum(const SpectrumMap& map) const {
  return apply_map(eig_, map, "circulant_solve");
}

std::vector<double> Circulant::matvec(const std::vector<double>& v) const {
  check_length(v.size(), size(), "circulant_matvec");
  cvec X, y;
  fft_forward(to_complex(v), X);
  for (std::size_t k = 0; k < X.size(); ++k) X[k] *= eig_[k];
  fft_inverse(X, y);
  return real_part(y, v.size());
}

std::vector<double> Circulant::solve_mapped(const cvec& mapped, const std::vector<double>& r) const {
  check_length(r.size(), size(), "circulant_solve");
  check_length(mapped.size(), size(), "circulant_solve");
  cvec X, y;
  fft_forward(to_complex(r), X);
  for (std::size_t k = 0; k < X.size(); ++k) X[k] /= mapped[k];
  fft_inverse(X, y);
  return real_part_checked(y, inf_norm(r), "circulant_solve");
}

std::vector<double> Circulant::solve(const SpectrumMap& map, const std::vector<double>& r) const {
  return solve_mapped(map_spectrum(map), r);
}

SkewCirculant::SkewCirculant(std::vector<double> first_column) : col_(std::move(first_column)) {
  const std::size_t n = col_.size();
  if (n == 0) throw std::invalid_argument("SkewCirculant: empty column");
  twiddle_.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    twiddle_[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k) / n);
  cvec c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = twiddle_[k] * col_[k];
  fft_forward(c, eig_);
  restore_conjugate_pairs(eig_, has_wrap_symmetry(col_, -1.0),
                          [n](std::size_t k) { return n - 1 - k; });
}

cvec SkewCirculant::map_spectrum(const SpectrumMap& map) const {
  return apply_map(eig_, map, "skew_solve");
}

double SkewCirculant::entry(int i, int j) const {
  const int n = size();
  return i >= j ? col_[i - j] : -col_[n + i - j];
}

std::vector<double> SkewCirculant::matvec(const std::vector<double>& v) const {
  check_length(v.size(), size(), "skew_matvec");
  const std::size_t n = col_.size();
  cvec x(n), X, y;
  for (std::size_t k = 0; k < n; ++k) x[k] = twiddle_[k] * v[k];
  fft_forward(x, X);
  for (std::size_t k = 0; k < n; ++k) X[k] *= eig_[k];
  fft_inverse(X, y);
  for (std::size_t k = 0; k < n; ++k) y[k] *= std::conj(twiddle_[k]);
  return real_part(y, n);
}

std::vector<double> SkewCirculant::solve_mapped(const cvec& mapped,
                                                const std::vector<double>& r) const {
  check_length(r.size(), size(), "skew_solve");
  check_length(mapped.size(), size(), "skew_solve");
  const std::size_t n = col_.size();
  cvec x(n), X, y;
  for (std::size_t k = 0; k < n; ++k) x[k] = twiddle_[k] * r[k];
  fft_forward(x, X);
  for (std::size_t k = 0; k < n; ++k) X[k] /= mapped[k];
  fft_inverse(X, y);
  for (std::size_t k = 0; k < n; ++k) y[k] *= std::conj(twiddle_[k]);
  return real_part_checked(y, inf_norm(r), "skew_solve");
}

std::vector<double> SkewCirculant::solve(const SpectrumMap& map,
                                         const std::vector<double>& r) const {
  return solve_mapped(map_spectrum(map), r);
}

namespace {

// Central coefficients of G wrapped around; `wrap_sign` is +1 for s(G), -1 for sk(G).
std::vector<double> strang_column(const FracOperator& op, double wrap_sign) {
  const auto& t = op.first_column;
  const int n = static_cast<int>(t.size());
  const int N = n + 1;
  const int m = (N - 1) / 2;
  std::vector<double> c(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (N % 2 == 0) {
      c[k] = k <= m ? t[k] : wrap_sign * t[n - k];
    } else {
      if (k < m) c[k] = t[k];
      else if (k == m) c[k] = 0.0;
      else c[k] = wrap_sign * t[n - k];
    }
  }
  return c;
}

}  // namespace

std::vector<double> strang_circulant_column(const FracOperator& op) {
  return strang_column(op, 1.0);
}

std::vector<double> strang_skew_circulant_column(const FracOperator& op) {
  return strang_column(op, -1.0);
}

std::vector<double> dense(const Circulant& c) {
  const int n = c.size();
  const auto& col = c.first_column();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = col[((i - j) % n + n) % n];
  return a;
}

std::vector<double> dense(const SkewCirculant& s) {
  const int n = s.size();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = s.entry(i, j);
  return a;
}

double distance_constant(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("distance_constant: alpha must lie in (1, 2)");
  const double nu = 1.0 - alpha / 2.0;
  const double gamma = 1.0 + alpha / 2.0;
  double sum = 0.0, carry = 0.0;
  double l = 1.0;
  for (;; l += 1.0) {
    double term;
    if (l == 1.0) {
      term = std::pow(2.0, nu);
    } else {
      const double inv = 1.0 / l;
      term = std::pow(l, nu) *
             (std::expm1(nu * std::log1p(inv)) - std::expm1(nu * std::log1p(-inv))) /
             std::pow(l, gamma);
    }
    const double y = term - carry;
    const double s = sum + y;
    carry = (s - sum) - y;
    sum = s;
    if (term < 1e-14) break;
  }
  // Remaining terms behave like 2 nu l^{-(alpha+1)}; Euler-Maclaurin for l > L.
  const double s = alpha + 1.0;
  const double tail = 2.0 * nu *
                      (std::pow(l, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(l, -s) +
                       s * std::pow(l, -s - 1.0) / 12.0);
  return sum + tail;
}

DistanceBound toeplitz_distance_bound(const FracOperator& op) {
  const int n = op.size();
  const SkewCirculant sk = strang_skew_circulant(op);
  double diff_norm = 0.0, g_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double diff_row = 0.0, g_row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double g = op.entry(i, j);
      diff_row += std::abs(sk.entry(i, j) - g);
      g_row += std::abs(g);
    }
    diff_norm = std::max(diff_norm, diff_row);
    g_norm = std::max(g_norm, g_row);
  }
  const double alpha = op.weights.alpha;
  const double nu = 1.0 - alpha / 2.0;
  const double N = op.weights.N;
  DistanceBound r;
  r.ratio = diff_norm / g_norm;
  r.bound = 1.0 / (1.5 + 2.0 * nu / (alpha * distance_constant(alpha) * std::pow(N, alpha)));
  r.holds = r.ratio < r.bound;
  return r;
}

}  // namespace frachc

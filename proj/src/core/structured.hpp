#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "core/fft.hpp"
#include "core/frac_operator.hpp"

namespace frachc {

using SpectrumMap = std::function<std::complex<double>(std::complex<double>)>;

// Symmetric Toeplitz matrix given by its first column. Products go through the
// length-2n circulant [t_0..t_{n-1}, 0, t_{n-1}..t_1].
class SymmetricToeplitz {
public:
  explicit SymmetricToeplitz(std::vector<double> first_column);
  explicit SymmetricToeplitz(const FracOperator& op) : SymmetricToeplitz(op.first_column) {}

  int size() const { return static_cast<int>(col_.size()); }
  const std::vector<double>& first_column() const { return col_; }

  std::vector<double> matvec(const std::vector<double>& v) const;

private:
  std::vector<double> col_;
  cvec symbol_;
};

// Eigenvalues are the DFT of the first column, in FFT frequency order, with
// conjugate pairs made exact (and imaginary parts zeroed for symmetric columns).
class Circulant {
public:
  explicit Circulant(std::vector<double> first_column);

  int size() const { return static_cast<int>(col_.size()); }
  const std::vector<double>& first_column() const { return col_; }
  const cvec& eigenvalues() const { return eig_; }

  std::vector<double> matvec(const std::vector<double>& v) const;
  // p(C)^{-1} r.
  std::vector<double> solve(const SpectrumMap& map, const std::vector<double>& r) const;
  // Same, with p already applied to eigenvalues().
  std::vector<double> solve_mapped(const cvec& mapped, const std::vector<double>& r) const;
  cvec map_spectrum(const SpectrumMap& map) const;

private:
  std::vector<double> col_;
  cvec eig_;
};

// Skew-circulant S = Omega^* Circ(Omega c) Omega with Omega = diag(e^{-i pi k/n}).
// Eigenvalues are DFT(Omega c), in FFT frequency order; lambda_{n-1-k} is the
// conjugate of lambda_k. A Strang-type column gives a symmetric matrix, whose
// eigenvalues are stored as exactly real.
class SkewCirculant {
public:
  explicit SkewCirculant(std::vector<double> first_column);

  int size() const { return static_cast<int>(col_.size()); }
  const std::vector<double>& first_column() const { return col_; }
  const cvec& eigenvalues() const { return eig_; }

  std::vector<double> matvec(const std::vector<double>& v) const;
  std::vector<double> solve(const SpectrumMap& map, const std::vector<double>& r) const;
  std::vector<double> solve_mapped(const cvec& mapped, const std::vector<double>& r) const;
  cvec map_spectrum(const SpectrumMap& map) const;

  // S[i][j]
  double entry(int i, int j) const;

private:
  std::vector<double> col_;
  cvec twiddle_;
  cvec eig_;
};

std::vector<double> strang_circulant_column(const FracOperator& op);
std::vector<double> strang_skew_circulant_column(const FracOperator& op);

inline Circulant strang_circulant(const FracOperator& op) {
  return Circulant(strang_circulant_column(op));
}
inline SkewCirculant strang_skew_circulant(const FracOperator& op) {
  return SkewCirculant(strang_skew_circulant_column(op));
}

// Row-major dense expansions.
std::vector<double> dense(const Circulant& c);
std::vector<double> dense(const SkewCirculant& s);

// Series constant sum_{l>=1} ((l+1)^nu - (l-1)^nu) / l^gamma.
double distance_constant(double alpha);

struct DistanceBound {
  double ratio = 0.0;  // ||sk(G) - G||_inf / ||G||_inf
  double bound = 0.0;
  bool holds = false;
};

DistanceBound toeplitz_distance_bound(const FracOperator& op);

}  // namespace frachc

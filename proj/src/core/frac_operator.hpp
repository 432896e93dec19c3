#pragma once

#include <vector>

#include "core/model.hpp"

namespace frachc {

// Weighted-trapezoidal weights g_0 .. g_{N-2} for gamma = 1 + alpha/2.
// g_{-k} = g_k is implied.
struct FracWeights {
  std::vector<double> g;
  double alpha = 0.0;
  int N = 0;
};

FracWeights frac_weights(double alpha, int N);

// c_{1,alpha} of the singular-integral definition of the fractional Laplacian.
double c1_alpha(double alpha);

// c_h = c_{1,alpha} / (nu h^alpha).
double scale_constant(double alpha, double h);

// The (N-1)x(N-1) symmetric Toeplitz matrix G approximating -(-Delta)^{alpha/2}.
// first_column[k] = -scale * g[k].
struct FracOperator {
  double scale = 0.0;
  FracWeights weights;
  std::vector<double> first_column;

  int size() const { return static_cast<int>(first_column.size()); }
  // G[i][j]
  double entry(int i, int j) const { return first_column[i > j ? i - j : j - i]; }
};

FracOperator build_operator(const ModelParams& params, const Discretization& disc);

struct GershgorinReport {
  double center = 0.0;      // diagonal of -G
  double max_radius = 0.0;  // 2 c_h sum_{k>=1} |g_k|, bounds every row's off-diagonal sum
  bool is_definite = false;
};

GershgorinReport gershgorin_check(const FracOperator& op);

// Row-major dense copy of G; intended for n up to a few thousand.
std::vector<double> dense(const FracOperator& op);

}  // namespace frachc

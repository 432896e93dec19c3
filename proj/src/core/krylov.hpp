#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/structured.hpp"

namespace frachc {

using LinearOperator = std::function<std::vector<double>(const std::vector<double>&)>;

struct KrylovConfig {
  double rel_tol = 1e-12;
  int max_iters = 1000;
};

void validate(const KrylovConfig& cfg);

struct KrylovResult {
  std::vector<double> x;
  int iters = 0;
  double rel_res = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // relative residual after each iteration
};

// Raised on NaN/Inf in the Krylov basis.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Right-preconditioned flexible GMRES without restart, zero initial guess.
// An empty `precond` means no preconditioning.
KrylovResult fgmres(const LinearOperator& A, const std::vector<double>& b,
                    const LinearOperator& precond, const KrylovConfig& cfg);

// [[3I, -2 tau G], [(eps2 + sigma tau) G - 3 diag(phi_sq), I]]
struct BlockJacobian {
  std::shared_ptr<const SymmetricToeplitz> G;
  double tau = 0.0;
  double epsilon2 = 0.0;
  double sigma = 0.0;
  std::vector<double> phi_sq;

  int n() const { return G->size(); }
  std::vector<double> apply(const std::vector<double>& v) const;
  // Row-major dense 2n x 2n matrix.
  std::vector<double> dense() const;
};

enum class PrecondVariant { None, Skew, Circ, Dense };

const char* to_string(PrecondVariant v);
PrecondVariant precond_variant_from_string(const std::string& name);

// Structured approximations of G shared by every preconditioner of a run.
struct StructuredOperators {
  std::shared_ptr<const SymmetricToeplitz> G;
  std::shared_ptr<const SkewCirculant> skew;  // sk(G)
  std::shared_ptr<const Circulant> circ;      // s(G)

  static StructuredOperators build(const FracOperator& op);
};

// Exact solve with the block lower-triangular matrix
// [[3I, 0], [(eps2 + sigma tau) G - 3 diag(phi_sq), S_hat]], where S_hat is
// 1 + (2/3) tau (eps2 + sigma tau) C^2 - 2 tau phi_bar C for C = sk(G) or s(G).
class BlockPreconditioner {
public:
  BlockPreconditioner(PrecondVariant variant, const StructuredOperators& ops,
                      const BlockJacobian& J);

  std::vector<double> apply(const std::vector<double>& r) const;

  double phi_bar() const { return phi_bar_; }
  // S_hat eigenvalues, in the transform's frequency order.
  const cvec& schur_spectrum() const { return spectrum_; }
  // Row-major dense 2n x 2n preconditioner matrix, for tests and export.
  std::vector<double> dense() const;

private:
  PrecondVariant variant_;
  StructuredOperators ops_;
  BlockJacobian J_;
  double phi_bar_ = 0.0;
  cvec spectrum_;
};

SpectrumMap schur_map(double tau, double epsilon2, double sigma, double phi_bar);

inline constexpr int kDefaultDenseCap = 2048;

// LU with partial pivoting on the assembled Jacobian.
std::vector<double> dense_block_solve(const BlockJacobian& J, const std::vector<double>& b,
                                      int dense_cap = kDefaultDenseCap);

}  // namespace frachc

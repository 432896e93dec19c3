#include "core/krylov.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace frachc {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

void validate(const KrylovConfig& cfg) {
  if (!(cfg.rel_tol > 0.0)) throw ConfigError("krylov.rel_tol", "must be positive");
  if (cfg.max_iters < 1) throw ConfigError("krylov.max_iters", "must be at least 1");
}

KrylovResult fgmres(const LinearOperator& A, const std::vector<double>& b,
                    const LinearOperator& precond, const KrylovConfig& cfg) {
  validate(cfg);
  const std::size_t n = b.size();
  KrylovResult res;
  res.x.assign(n, 0.0);

  const double beta = norm2(b);
  if (!std::isfinite(beta)) throw NumericalFailure("fgmres: right-hand side is not finite");
  if (beta == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<std::vector<double>> V, Z, H;
  std::vector<double> cs, sn, g{beta};
  V.push_back(b);
  for (double& v : V[0]) v /= beta;

  int k = 0;
  for (int j = 0; j < cfg.max_iters; ++j) {
    Z.push_back(precond ? precond(V[j]) : V[j]);
    std::vector<double> w = A(Z[j]);
    if (w.size() != n) throw std::invalid_argument("fgmres: operator changed vector length");

    std::vector<double> h(j + 2, 0.0);
    const double before = norm2(w);
    for (int i = 0; i <= j; ++i) {
      h[i] = dot(w, V[i]);
      axpy(-h[i], V[i], w);
    }
    double after = norm2(w);
    if (after < 1e-3 * before) {
      for (int i = 0; i <= j; ++i) {
        const double c = dot(w, V[i]);
        h[i] += c;
        axpy(-c, V[i], w);
      }
      after = norm2(w);
    }
    if (!std::isfinite(after)) throw NumericalFailure("fgmres: non-finite Krylov basis vector");
    h[j + 1] = after;

    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    const double r = std::hypot(h[j], h[j + 1]);
    const double c = r == 0.0 ? 1.0 : h[j] / r;
    const double s = r == 0.0 ? 0.0 : h[j + 1] / r;
    cs.push_back(c);
    sn.push_back(s);
    h[j] = r;
    h[j + 1] = 0.0;
    g.push_back(-s * g[j]);
    g[j] *= c;
    H.push_back(std::move(h));

    k = j + 1;
    res.rel_res = std::abs(g[j + 1]) / beta;
    res.residual_history.push_back(res.rel_res);
    if (res.rel_res <= cfg.rel_tol || after == 0.0) {
      res.converged = true;
      break;
    }
    V.push_back(std::move(w));
    for (double& v : V.back()) v /= after;
  }
  res.iters = k;

  std::vector<double> y(k);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int l = i + 1; l < k; ++l) s -= H[l][i] * y[l];
    if (H[i][i] == 0.0) throw NumericalFailure("fgmres: singular Hessenberg factor");
    y[i] = s / H[i][i];
  }
  for (int i = 0; i < k; ++i) axpy(y[i], Z[i], res.x);
  return res;
}

std::vector<double> BlockJacobian::apply(const std::vector<double>& v) const {
  const int m = n();
  if (static_cast<int>(v.size()) != 2 * m)
    throw std::invalid_argument("jacobian_apply: length mismatch");
  const std::vector<double> v1(v.begin(), v.begin() + m), v2(v.begin() + m, v.end());
  const auto Gv1 = G->matvec(v1);
  const auto Gv2 = G->matvec(v2);
  const double a = epsilon2 + sigma * tau;
  std::vector<double> out(2 * m);
  for (int i = 0; i < m; ++i) {
    out[i] = 3.0 * v1[i] - 2.0 * tau * Gv2[i];
    out[m + i] = a * Gv1[i] - 3.0 * phi_sq[i] * v1[i] + v2[i];
  }
  return out;
}

std::vector<double> BlockJacobian::dense() const {
  const int m = n();
  const int w = 2 * m;
  const auto& t = G->first_column();
  const double a = epsilon2 + sigma * tau;
  std::vector<double> J(static_cast<std::size_t>(w) * w, 0.0);
  auto at = [&](int i, int j) -> double& { return J[static_cast<std::size_t>(i) * w + j]; };
  for (int i = 0; i < m; ++i) {
    at(i, i) = 3.0;
    at(m + i, m + i) = 1.0;
    for (int j = 0; j < m; ++j) {
      const double g = t[std::abs(i - j)];
      at(i, m + j) = -2.0 * tau * g;
      at(m + i, j) = a * g;
    }
    at(m + i, i) -= 3.0 * phi_sq[i];
  }
  return J;
}

const char* to_string(PrecondVariant v) {
  switch (v) {
    case PrecondVariant::None: return "none";
    case PrecondVariant::Skew: return "skew";
    case PrecondVariant::Circ: return "circ";
    case PrecondVariant::Dense: return "dense";
  }
  return "unknown";
}

PrecondVariant precond_variant_from_string(const std::string& name) {
  if (name == "none") return PrecondVariant::None;
  if (name == "skew" || name == "P") return PrecondVariant::Skew;
  if (name == "circ" || name == "Ps") return PrecondVariant::Circ;
  if (name == "dense" || name == "BS") return PrecondVariant::Dense;
  throw ConfigError("precond", "unknown variant '" + name + "' (expected none, skew, circ, dense)");
}

StructuredOperators StructuredOperators::build(const FracOperator& op) {
  StructuredOperators s;
  s.G = std::make_shared<const SymmetricToeplitz>(op);
  s.skew = std::make_shared<const SkewCirculant>(strang_skew_circulant_column(op));
  s.circ = std::make_shared<const Circulant>(strang_circulant_column(op));
  return s;
}

SpectrumMap schur_map(double tau, double epsilon2, double sigma, double phi_bar) {
  const double a = (2.0 / 3.0) * tau * (epsilon2 + sigma * tau);
  const double b = 2.0 * tau * phi_bar;
  return [a, b](std::complex<double> lam) { return 1.0 + a * lam * lam - b * lam; };
}

BlockPreconditioner::BlockPreconditioner(PrecondVariant variant, const StructuredOperators& ops,
                                         const BlockJacobian& J)
    : variant_(variant), ops_(ops), J_(J) {
  if (variant_ != PrecondVariant::Skew && variant_ != PrecondVariant::Circ)
    throw std::invalid_argument("BlockPreconditioner: variant must be skew or circ");
  double s = 0.0;
  for (double v : J_.phi_sq) s += v;
  phi_bar_ = J_.phi_sq.empty() ? 0.0 : s / static_cast<double>(J_.phi_sq.size());
  const auto map = schur_map(J_.tau, J_.epsilon2, J_.sigma, phi_bar_);
  spectrum_ = variant_ == PrecondVariant::Skew ? ops_.skew->map_spectrum(map)
                                               : ops_.circ->map_spectrum(map);
}

std::vector<double> BlockPreconditioner::apply(const std::vector<double>& r) const {
  const int m = J_.n();
  if (static_cast<int>(r.size()) != 2 * m)
    throw std::invalid_argument("precond_apply: length mismatch");
  std::vector<double> y1(m), t(m);
  for (int i = 0; i < m; ++i) y1[i] = r[i] / 3.0;
  const auto Gy1 = J_.G->matvec(y1);
  const double a = J_.epsilon2 + J_.sigma * J_.tau;
  for (int i = 0; i < m; ++i) t[i] = r[m + i] - (a * Gy1[i] - 3.0 * J_.phi_sq[i] * y1[i]);
  const auto y2 = variant_ == PrecondVariant::Skew ? ops_.skew->solve_mapped(spectrum_, t)
                                                   : ops_.circ->solve_mapped(spectrum_, t);
  std::vector<double> out(2 * m);
  std::copy(y1.begin(), y1.end(), out.begin());
  std::copy(y2.begin(), y2.end(), out.begin() + m);
  return out;
}

std::vector<double> BlockPreconditioner::dense() const {
  const int m = J_.n();
  const int w = 2 * m;
  const std::vector<double> C =
      variant_ == PrecondVariant::Skew ? frachc::dense(*ops_.skew) : frachc::dense(*ops_.circ);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Cm(
      C.data(), m, m);
  const double a = (2.0 / 3.0) * J_.tau * (J_.epsilon2 + J_.sigma * J_.tau);
  const Eigen::MatrixXd S = Eigen::MatrixXd::Identity(m, m) + a * Cm * Cm - 2.0 * J_.tau * phi_bar_ * Cm;

  const auto J = J_.dense();
  std::vector<double> P(static_cast<std::size_t>(w) * w, 0.0);
  for (int i = 0; i < m; ++i) {
    P[static_cast<std::size_t>(i) * w + i] = 3.0;
    for (int j = 0; j < m; ++j) {
      P[static_cast<std::size_t>(m + i) * w + j] = J[static_cast<std::size_t>(m + i) * w + j];
      P[static_cast<std::size_t>(m + i) * w + m + j] = S(i, j);
    }
  }
  return P;
}

std::vector<double> dense_block_solve(const BlockJacobian& J, const std::vector<double>& b,
                                      int dense_cap) {
  const int m = J.n();
  if (m > dense_cap)
    throw ConfigError("precond", "dense solve refused: n = " + std::to_string(m) +
                                     " exceeds the dense cap " + std::to_string(dense_cap));
  if (static_cast<int>(b.size()) != 2 * m)
    throw std::invalid_argument("dense_block_solve: length mismatch");
  const auto A = J.dense();
  const int w = 2 * m;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Am(
      A.data(), w, w);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Am);
  const auto& U = lu.matrixLU();
  for (int i = 0; i < w; ++i)
    if (U(i, i) == 0.0 || !std::isfinite(U(i, i)))
      throw NumericalFailure("dense_block_solve: singular Jacobian");
  const Eigen::VectorXd x = lu.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), w));
  return std::vector<double>(x.data(), x.data() + w);
}

}  // namespace frachc

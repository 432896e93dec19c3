#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "core/structured.hpp"
#include "oracles.hpp"

using namespace frachc;
using oracle::Mat;
using oracle::Vec;

namespace {

FracOperator make_op(double alpha, int N, double L = 1.0) {
  ModelParams p;
  p.alpha = alpha;
  p.L = L;
  return build_operator(p, Discretization::make(p, N, 4));
}

Mat as_mat(const std::vector<double>& rowmajor, int n) {
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rowmajor[static_cast<std::size_t>(i) * n + j];
  return A;
}

Mat toeplitz(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = c[std::abs(i - j)];
  return A;
}

}  // namespace

TEST_CASE("Toeplitz product on a tridiagonal example") {
  SymmetricToeplitz T({2.0, -1.0, 0.0});
  const auto y = T.matvec({1.0, 1.0, 1.0});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(std::abs(y[1]) < 1e-15);
  CHECK(y[2] == doctest::Approx(1.0));
  for (double v : T.matvec({0.0, 0.0, 0.0})) CHECK(v == 0.0);
  CHECK_THROWS_AS(T.matvec({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("Toeplitz product matches the dense product") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2, 3, 4, 5, 8, 17, 64, 255}) {
    const auto c = oracle::random_vector(rng, n);
    SymmetricToeplitz T(c);
    const Mat A = toeplitz(c);
    for (int trial = 0; trial < 20; ++trial) {
      const auto v = oracle::random_vector(rng, n);
      const Vec ref = A * oracle::to_eigen(v);
      CHECK(oracle::rel_err(oracle::to_eigen(T.matvec(v)), ref) <= 1e-13);
    }
  }
}

TEST_CASE("Strang columns fold the Toeplitz column") {
  // Even n = 5 (N = 6) and odd n = 4 (N = 5).
  const auto even = make_op(1.5, 6);
  const auto& t = even.first_column;
  const auto sc = strang_circulant_column(even);
  const auto kc = strang_skew_circulant_column(even);
  CHECK(sc == std::vector<double>{t[0], t[1], t[2], t[2], t[1]});
  CHECK(kc == std::vector<double>{t[0], t[1], t[2], -t[2], -t[1]});

  const auto odd = make_op(1.5, 5);
  const auto& u = odd.first_column;
  CHECK(strang_circulant_column(odd) == std::vector<double>{u[0], u[1], 0.0, u[1]});
  CHECK(strang_skew_circulant_column(odd) == std::vector<double>{u[0], u[1], 0.0, -u[1]});
}

TEST_CASE("Strang matrices are symmetric and keep G's central band") {
  for (int N : {6, 7, 16, 33}) {
    const auto op = make_op(1.4, N);
    const int n = op.size();
    const Mat S = as_mat(dense(strang_skew_circulant(op)), n);
    const Mat C = as_mat(dense(strang_circulant(op)), n);
    CHECK((S - S.transpose()).norm() == 0.0);
    CHECK((C - C.transpose()).norm() == 0.0);
    const int m = (n - 1) / 2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(i - j) <= m && !(n % 2 == 0 && std::abs(i - j) == m + 1)) {
          CHECK(S(i, j) == op.entry(i, j));
          CHECK(C(i, j) == op.entry(i, j));
        }
  }
}

TEST_CASE("circulant and skew-circulant products match dense matrices") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 3, 7, 16, 31}) {
    const auto c = oracle::random_vector(rng, n);
    Circulant C(c);
    SkewCirculant S(c);
    const Mat Cd = oracle::dense_circulant(c);
    const Mat Sd = oracle::dense_skew_circulant(c);
    CHECK((as_mat(dense(C), n) - Cd).norm() == 0.0);
    CHECK((as_mat(dense(S), n) - Sd).norm() == 0.0);
    for (int trial = 0; trial < 10; ++trial) {
      const auto v = oracle::random_vector(rng, n);
      CHECK(oracle::rel_err(oracle::to_eigen(C.matvec(v)), Cd * oracle::to_eigen(v)) <= 1e-13);
      CHECK(oracle::rel_err(oracle::to_eigen(S.matvec(v)), Sd * oracle::to_eigen(v)) <= 1e-13);
    }
  }
}

TEST_CASE("skew-circulant eigenvalues match the dense spectrum") {
  for (int N : {5, 6, 17, 64, 129}) {
    const auto op = make_op(1.7, N);
    const auto S = strang_skew_circulant(op);
    const int n = S.size();
    Eigen::SelfAdjointEigenSolver<Mat> es(as_mat(dense(S), n));
    std::vector<double> ref(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::vector<double> got;
    for (const auto& l : S.eigenvalues()) {
      CHECK(l.imag() == 0.0);
      got.push_back(l.real());
    }
    std::sort(got.begin(), got.end());
    const double scale = std::abs(ref.front());
    for (int k = 0; k < n; ++k) CHECK(std::abs(got[k] - ref[k]) <= 1e-12 * scale);
    // Negative definite like G.
    CHECK(got.back() < 0.0);
  }
}

TEST_CASE("circulant eigenvalues of a symmetric column are real") {
  const auto C = strang_circulant(make_op(1.2, 40));
  for (const auto& l : C.eigenvalues()) CHECK(l.imag() == 0.0);
}

TEST_CASE("mapped solves invert the mapped matrix") {
  const double tau = 0.05, eps2 = 0.1, sigma = 1.0 / 16, phi_bar = 0.4;
  const double a = 2.0 / 3.0 * tau * (eps2 + sigma * tau), b = 2.0 * tau * phi_bar;
  auto map = [&](std::complex<double> l) { return 1.0 + a * l * l - b * l; };
  std::mt19937_64 rng(9);
  for (int N : {5, 6, 16, 65}) {
    const auto op = make_op(1.5, N);
    const int n = op.size();
    const auto S = strang_skew_circulant(op);
    const auto C = strang_circulant(op);
    for (bool skew : {true, false}) {
      const Mat D = skew ? as_mat(dense(S), n) : as_mat(dense(C), n);
      const Mat P = Mat::Identity(n, n) + a * D * D - b * D;
      const auto r = oracle::random_vector(rng, n);
      const auto x = skew ? S.solve(map, r) : C.solve(map, r);
      CHECK(oracle::rel_err(P * oracle::to_eigen(x), oracle::to_eigen(r)) <= 1e-12);
    }
  }
}

TEST_CASE("identity map solve is the identity") {
  std::mt19937_64 rng(1);
  const auto S = strang_skew_circulant(make_op(1.5, 32));
  const auto r = oracle::random_vector(rng, S.size());
  const auto x = S.solve([](std::complex<double>) { return std::complex<double>(1.0); }, r);
  CHECK(oracle::rel_err(oracle::to_eigen(x), oracle::to_eigen(r)) <= 1e-14);
}

TEST_CASE("a singular map is refused") {
  const auto S = strang_skew_circulant(make_op(1.5, 16));
  const auto r = std::vector<double>(S.size(), 1.0);
  CHECK_THROWS(S.solve([](std::complex<double>) { return std::complex<double>(0.0); }, r));
}

TEST_CASE("skew-circulant entry accessor") {
  SkewCirculant S({1.0, 2.0, 3.0});
  CHECK(S.entry(0, 0) == 1.0);
  CHECK(S.entry(2, 0) == 3.0);
  CHECK(S.entry(0, 1) == -3.0);
  CHECK(S.entry(1, 2) == -3.0);
  CHECK(S.entry(0, 2) == -2.0);
}

namespace {

// sum_{l>=1} ((l+1)^nu - (l-1)^nu) / l^gamma by direct long double summation
// to a large cutoff plus an asymptotic tail with two expansion terms.
long double distance_constant_ref(long double alpha) {
  const long double nu = 1.0L - alpha / 2.0L, gamma = 1.0L + alpha / 2.0L, s = alpha + 1.0L;
  const int cutoff = 200000;
  long double sum = 0.0L;
  for (int l = cutoff; l >= 1; --l)
    sum += (std::pow(l + 1.0L, nu) - std::pow(l - 1.0L, nu)) / std::pow((long double)l, gamma);
  auto tail = [&](long double c, long double q) {
    const long double L = cutoff;
    return c * (std::pow(L, 1.0L - q) / (q - 1.0L) - std::pow(L, -q) / 2.0L +
                q * std::pow(L, -q - 1.0L) / 12.0L);
  };
  const long double c3 = nu * (nu - 1.0L) * (nu - 2.0L) / 6.0L;
  return sum + tail(2.0L * nu, s) + tail(2.0L * c3, s + 2.0L);
}

}  // namespace

TEST_CASE("distance constant against direct summation") {
  for (double alpha : {1.2, 1.5, 1.9}) {
    const double ref = (double)distance_constant_ref(alpha);
    CHECK(distance_constant(alpha) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("sk(G) stays within the distance bound") {
  for (double alpha : {1.2, 1.5, 1.9}) {
    for (int N : {64, 256, 1024}) {
      const auto op = make_op(alpha, N);
      const auto db = toeplitz_distance_bound(op);
      CHECK(db.bound < 2.0 / 3.0);
      CHECK(db.holds);
      CHECK(db.ratio <= db.bound);
      if (N == 64) {
        const int n = op.size();
        const Mat G = oracle::dense_G(alpha, N, 1.0);
        const Mat S = as_mat(dense(strang_skew_circulant(op)), n);
        const double ref = (S - G).cwiseAbs().rowwise().sum().maxCoeff() /
                           G.cwiseAbs().rowwise().sum().maxCoeff();
        CHECK(db.ratio == doctest::Approx(ref).epsilon(1e-12));
      }
    }
  }
}

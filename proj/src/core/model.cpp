#include "core/model.hpp"

#include <cmath>
#include <numbers>

namespace frachc {

void validate(const ModelParams& p, bool allow_small_sigma) {
  if (!(p.alpha > 1.0 && p.alpha < 2.0))
    throw ConfigError("alpha", "must satisfy 1 < alpha < 2");
  if (!(p.epsilon2 > 0.0)) throw ConfigError("epsilon2", "must be positive");
  if (!(p.L > 0.0)) throw ConfigError("L", "must be positive");
  if (!(p.T > 0.0)) throw ConfigError("T", "must be positive");
  if (!std::isfinite(p.sigma) || p.sigma < 0.0)
    throw ConfigError("sigma", "must be finite and non-negative");
  if (p.sigma < kMinStableSigma && !allow_small_sigma)
    throw ConfigError("sigma",
                      "must be >= 1/16 for energy stability (pass the small-sigma override "
                      "to run anyway)");
}

Discretization Discretization::make(const ModelParams& params, int N, int M) {
  if (N < 4) throw ConfigError("N", "must be at least 4");
  if (M < 2) throw ConfigError("M", "must be at least 2");
  if (!(params.alpha > 1.0 && params.alpha < 2.0))
    throw ConfigError("alpha", "must satisfy 1 < alpha < 2");
  Discretization d;
  d.N = N;
  d.M = M;
  d.h = 2.0 * params.L / N;
  d.tau = params.T / M;
  d.gamma = 1.0 + params.alpha / 2.0;
  d.nu = 1.0 - params.alpha / 2.0;
  return d;
}

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Example1: return "example1";
    case ProblemKind::Example2: return "example2";
    case ProblemKind::ExampleA: return "exampleA";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "example1" || name == "1") return ProblemKind::Example1;
  if (name == "example2" || name == "2") return ProblemKind::Example2;
  if (name == "exampleA" || name == "examplea" || name == "A") return ProblemKind::ExampleA;
  throw ConfigError("problem", "unknown problem '" + name + "'");
}

ModelParams default_params(ProblemKind kind) {
  ModelParams p;
  switch (kind) {
    case ProblemKind::Example1:
      p.L = 1.0;
      p.T = 1.0;
      p.epsilon2 = 0.1;
      break;
    case ProblemKind::ExampleA:
      p.L = 1.0;
      p.T = 1.0;
      p.epsilon2 = 0.1;
      p.sigma = 1.0;
      break;
    case ProblemKind::Example2:
      p.L = std::numbers::pi;
      p.T = 46.0;
      p.epsilon2 = 0.05;
      break;
  }
  return p;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

namespace {

// 1 - x^2 with rounding residue below zero clamped; zero outside (-1, 1).
double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::max(0.0, 1.0 - x * x);
}

// 2^a Gamma((a+1)/2) Gamma(p+1+a/2) / (sqrt(pi) Gamma(p+1)), the prefactor of
// the fractional Laplacian of (1-x^2)_+^{p+a/2}.
double frac_prefactor(double alpha, int p) {
  return std::pow(2.0, alpha) * gamma_fn((alpha + 1.0) / 2.0) *
         gamma_fn(p + 1.0 + alpha / 2.0) /
         (std::sqrt(std::numbers::pi) * gamma_fn(p + 1.0));
}

}  // namespace

PhiMu example1_exact(double x, double t, double alpha) {
  const double b = bump(x);
  if (b == 0.0) return {0.0, 0.0};
  const double et = std::exp(t);
  return {et * std::pow(b, 3.0 + alpha / 2.0), et * std::pow(b, 2.0 + alpha / 2.0)};
}

Sources example1_sources(double x, double t, double alpha, double epsilon2) {
  const double b = bump(x);
  const double et = std::exp(t);
  const double x2 = x * x;
  const double a1 = alpha + 1.0;
  const double a3 = alpha + 3.0;
  const double a5 = alpha + 5.0;

  const double f = et * (std::pow(b, 3.0 + alpha / 2.0) +
                         frac_prefactor(alpha, 2) *
                             (1.0 - 2.0 * a1 * x2 + a1 * a3 / 3.0 * x2 * x2));

  const double poly6 =
      1.0 - 3.0 * a1 * x2 + a1 * a3 * x2 * x2 - a1 * a3 * a5 / 15.0 * x2 * x2 * x2;
  const double psi = et * (std::pow(b, 2.0 + alpha / 2.0) -
                           frac_prefactor(alpha, 3) * epsilon2 * poly6) -
                     std::exp(3.0 * t) * std::pow(b, 9.0 + 1.5 * alpha) +
                     et * std::pow(b, 3.0 + alpha / 2.0);
  return {f, psi};
}

PhiMu exampleA_exact(double x, double t, double alpha) {
  const double b = bump(x);
  if (b == 0.0) return {0.0, 0.0};
  const double v = std::exp(t) * std::pow(b, 1.0 + alpha / 2.0);
  return {v, v};
}

Sources exampleA_sources(double x, double t, double alpha, double epsilon2) {
  const double b = bump(x);
  const double et = std::exp(t);
  const double poly2 = 1.0 - (alpha + 1.0) * x * x;
  const double c = frac_prefactor(alpha, 1);
  const double base = std::pow(b, 1.0 + alpha / 2.0);
  const double f = et * (base + c * poly2);
  const double psi = et * (base - c * epsilon2 * poly2) -
                     std::exp(3.0 * t) * std::pow(b, 3.0 + 1.5 * alpha) + et * base;
  return {f, psi};
}

double example2_initial(double x) { return 0.1 * std::sin(x); }

Problem make_problem(ProblemKind kind, const ModelParams& params) {
  Problem pr;
  pr.kind = kind;
  const double alpha = params.alpha;
  const double eps2 = params.epsilon2;
  switch (kind) {
    case ProblemKind::Example1:
      pr.exact_phi = [alpha](double x, double t) { return example1_exact(x, t, alpha).phi; };
      pr.exact_mu = [alpha](double x, double t) { return example1_exact(x, t, alpha).mu; };
      pr.source_f = [alpha, eps2](double x, double t) {
        return example1_sources(x, t, alpha, eps2).f;
      };
      pr.source_psi = [alpha, eps2](double x, double t) {
        return example1_sources(x, t, alpha, eps2).psi;
      };
      break;
    case ProblemKind::ExampleA:
      pr.exact_phi = [alpha](double x, double t) { return exampleA_exact(x, t, alpha).phi; };
      pr.exact_mu = [alpha](double x, double t) { return exampleA_exact(x, t, alpha).mu; };
      pr.source_f = [alpha, eps2](double x, double t) {
        return exampleA_sources(x, t, alpha, eps2).f;
      };
      pr.source_psi = [alpha, eps2](double x, double t) {
        return exampleA_sources(x, t, alpha, eps2).psi;
      };
      break;
    case ProblemKind::Example2:
      pr.initial_condition = example2_initial;
      return pr;
  }
  auto phi = pr.exact_phi;
  pr.initial_condition = [phi](double x) { return phi(x, 0.0); };
  return pr;
}

std::vector<double> sample_interior(const SpaceTimeFn& fn, const ModelParams& params,
                                    const Discretization& disc, double t) {
  std::vector<double> out(disc.interior());
  for (int i = 1; i < disc.N; ++i) out[i - 1] = fn(disc.node(params, i), t);
  return out;
}

std::vector<double> sample_interior(const SpaceFn& fn, const ModelParams& params,
                                    const Discretization& disc) {
  std::vector<double> out(disc.interior());
  for (int i = 1; i < disc.N; ++i) out[i - 1] = fn(disc.node(params, i));
  return out;
}

}  // namespace frachc

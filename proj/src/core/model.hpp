#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace frachc {

// Raised when a parameter falls outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A configuration value that violates a model invariant. `field` names the
// offending parameter so front ends can report it directly.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

inline constexpr double kMinStableSigma = 1.0 / 16.0;

struct ModelParams {
  double alpha = 1.5;     // fractional order, 1 < alpha < 2
  double epsilon2 = 0.1;  // interface parameter
  double sigma = kMinStableSigma;
  double L = 1.0;         // domain is (-L, L)
  double T = 1.0;
};

// Throws ConfigError. sigma below 1/16 loses the energy-stability guarantee
// and is only accepted with `allow_small_sigma`.
void validate(const ModelParams& params, bool allow_small_sigma = false);

struct Discretization {
  int N = 0;  // spatial cells; N - 1 interior unknowns
  int M = 0;  // time steps
  double h = 0.0;
  double tau = 0.0;
  double gamma = 0.0;  // splitting parameter 1 + alpha/2
  double nu = 0.0;     // gamma - alpha

  static Discretization make(const ModelParams& params, int N, int M);

  int interior() const { return N - 1; }
  double node(const ModelParams& params, int i) const { return -params.L + i * h; }
  double time(int j) const { return j * tau; }
};

enum class ProblemKind { Example1, Example2, ExampleA };

const char* to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

using SpaceFn = std::function<double(double)>;
using SpaceTimeFn = std::function<double(double, double)>;

struct Problem {
  ProblemKind kind = ProblemKind::Example2;
  SpaceFn initial_condition;
  SpaceTimeFn exact_phi;
  SpaceTimeFn exact_mu;
  SpaceTimeFn source_f;
  SpaceTimeFn source_psi;

  bool has_exact() const { return static_cast<bool>(exact_phi); }
  bool has_sources() const { return static_cast<bool>(source_f); }
};

// Parameter set used by each example: L, T and epsilon2 from the problem
// definition, alpha = 1.5, sigma = 1/16 (sigma = 1 for Example A).
ModelParams default_params(ProblemKind kind);

Problem make_problem(ProblemKind kind, const ModelParams& params);

double gamma_fn(double x);

struct PhiMu {
  double phi;
  double mu;
};

struct Sources {
  double f;
  double psi;
};

// Manufactured solutions on (-1, 1); both vanish for |x| >= 1.
PhiMu example1_exact(double x, double t, double alpha);
Sources example1_sources(double x, double t, double alpha, double epsilon2);
PhiMu exampleA_exact(double x, double t, double alpha);
Sources exampleA_sources(double x, double t, double alpha, double epsilon2);

double example2_initial(double x);

// Values of `fn(x_i, t)` at the interior nodes i = 1..N-1.
std::vector<double> sample_interior(const SpaceTimeFn& fn, const ModelParams& params,
                                    const Discretization& disc, double t);
std::vector<double> sample_interior(const SpaceFn& fn, const ModelParams& params,
                                    const Discretization& disc);

}  // namespace frachc

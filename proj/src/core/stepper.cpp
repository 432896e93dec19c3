#include "core/stepper.hpp"

#include <chrono>
#include <cmath>
#include <optional>

namespace frachc {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> sources_at(const SpaceTimeFn& fn, const StepContext& ctx, double t) {
  if (!fn) return std::vector<double>(ctx.disc.interior(), 0.0);
  return sample_interior(fn, ctx.params, ctx.disc, t);
}

}  // namespace

void validate(const NewtonConfig& cfg) {
  if (cfg.max_iters < 1) throw ConfigError("newton.max_iters", "must be at least 1");
  if (!(cfg.rel_tol > 0.0)) throw ConfigError("newton.rel_tol", "must be positive");
}

StepContext StepContext::make(const Problem& problem, const ModelParams& params,
                              const Discretization& disc) {
  StepContext ctx;
  ctx.params = params;
  ctx.disc = disc;
  ctx.op = build_operator(params, disc);
  ctx.ops = StructuredOperators::build(ctx.op);
  ctx.problem = problem;
  return ctx;
}

FirstStep first_step(const std::vector<double>& phi0, const StepContext& ctx) {
  const int n = ctx.disc.interior();
  if (static_cast<int>(phi0.size()) != n) throw std::invalid_argument("first_step: length mismatch");
  const auto psi0 = sources_at(ctx.problem.source_psi, ctx, 0.0);
  const auto f0 = sources_at(ctx.problem.source_f, ctx, 0.0);
  const auto Gphi = ctx.ops.G->matvec(phi0);
  FirstStep fs;
  fs.mu0.resize(n);
  for (int i = 0; i < n; ++i)
    fs.mu0[i] = phi0[i] * phi0[i] * phi0[i] - phi0[i] - ctx.params.epsilon2 * Gphi[i] + psi0[i];
  const auto Gmu = ctx.ops.G->matvec(fs.mu0);
  fs.phi1.resize(n);
  for (int i = 0; i < n; ++i) fs.phi1[i] = phi0[i] + ctx.disc.tau * (Gmu[i] + f0[i]);
  return fs;
}

std::vector<double> residual(const std::vector<double>& psi_next, const SchemeState& state,
                             const StepContext& ctx) {
  const int n = ctx.disc.interior();
  if (static_cast<int>(psi_next.size()) != 2 * n ||
      static_cast<int>(state.phi_curr.size()) != n || static_cast<int>(state.phi_prev.size()) != n)
    throw std::invalid_argument("residual: length mismatch");
  const double tau = ctx.disc.tau;
  const double eps2 = ctx.params.epsilon2;
  const double sigma = ctx.params.sigma;
  const double t_next = ctx.disc.time(state.step_index + 1);

  const std::vector<double> phi(psi_next.begin(), psi_next.begin() + n);
  const std::vector<double> mu(psi_next.begin() + n, psi_next.end());
  const auto Gphi = ctx.ops.G->matvec(phi);
  const auto Gmu = ctx.ops.G->matvec(mu);
  const auto Gphi_curr = ctx.ops.G->matvec(state.phi_curr);
  const auto f = sources_at(ctx.problem.source_f, ctx, t_next);
  const auto psi = sources_at(ctx.problem.source_psi, ctx, t_next);

  std::vector<double> F(2 * n);
  for (int i = 0; i < n; ++i) {
    const double pc = state.phi_curr[i], pp = state.phi_prev[i];
    F[i] = 3.0 * phi[i] - 2.0 * tau * Gmu[i] - (4.0 * pc - pp) - 2.0 * tau * f[i];
    F[n + i] = (eps2 + sigma * tau) * Gphi[i] + mu[i] -
               (-2.0 * pc + pp + sigma * tau * Gphi_curr[i] + phi[i] * phi[i] * phi[i]) - psi[i];
  }
  return F;
}

std::vector<double> newton_initial_guess(const SchemeState& state) {
  const std::size_t n = state.phi_curr.size();
  std::vector<double> psi(2 * n);
  if (state.step_index <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      psi[i] = state.phi_curr[i];
      psi[n + i] = state.mu_curr[i];
    }
    return psi;
  }
  for (std::size_t i = 0; i < n; ++i) {
    psi[i] = 2.0 * state.phi_curr[i] - state.phi_prev[i];
    psi[n + i] = 2.0 * state.mu_curr[i] - state.mu_prev[i];
  }
  return psi;
}

NewtonResult newton_solve(const SchemeState& state, const StepContext& ctx,
                          const SolverOptions& opts, bool keep_spectra) {
  validate(opts.newton);
  const int n = ctx.disc.interior();
  NewtonResult res;
  res.psi = newton_initial_guess(state);
  const double denom = std::max(norm2(res.psi), opts.newton.norm_floor);

  BlockJacobian J;
  J.G = ctx.ops.G;
  J.tau = ctx.disc.tau;
  J.epsilon2 = ctx.params.epsilon2;
  J.sigma = ctx.params.sigma;
  J.phi_sq.resize(n);

  double last_update = NAN;
  for (int l = 0; l < opts.newton.max_iters; ++l) {
    const auto F = residual(res.psi, state, ctx);
    const double fnorm = norm2(F);
    res.residual_history.push_back(fnorm);
    if (!std::isfinite(fnorm))
      throw StepFailure(state.step_index + 1, "non-finite Newton residual", last_update, fnorm);
    for (int i = 0; i < n; ++i) J.phi_sq[i] = res.psi[i] * res.psi[i];

    std::vector<double> delta;
    int kiters = 0;
    if (opts.variant == PrecondVariant::Dense) {
      delta = dense_block_solve(J, F, opts.dense_cap);
    } else {
      const LinearOperator A = [&J](const std::vector<double>& v) { return J.apply(v); };
      LinearOperator M;
      std::optional<BlockPreconditioner> P;
      if (opts.variant != PrecondVariant::None) {
        P.emplace(opts.variant, ctx.ops, J);
        if (keep_spectra) res.schur_spectra.push_back(P->schur_spectrum());
        M = [&P](const std::vector<double>& r) { return P->apply(r); };
      }
      auto kr = fgmres(A, F, M, opts.krylov);
      delta = std::move(kr.x);
      kiters = kr.iters;
    }
    for (std::size_t i = 0; i < delta.size(); ++i) res.psi[i] -= delta[i];
    res.iters = l + 1;
    res.krylov_iters.push_back(kiters);
    last_update = norm2(delta) / denom;
    res.update_history.push_back(last_update);
    if (!std::isfinite(last_update))
      throw StepFailure(state.step_index + 1, "non-finite Newton update", last_update, fnorm);
    if (last_update <= opts.newton.rel_tol) return res;
  }
  throw StepFailure(state.step_index + 1,
                    "Newton did not converge in " + std::to_string(opts.newton.max_iters) +
                        " iterations",
                    last_update, res.residual_history.back());
}

RunRecord run(const Problem& problem, const ModelParams& params, const Discretization& disc,
              const SolverOptions& opts, const StepObserver& observer) {
  validate(opts.newton);
  validate(opts.krylov);
  const StepContext ctx = StepContext::make(problem, params, disc);
  const int M = disc.M;

  RunRecord rec;
  rec.time.reserve(M + 1);
  auto record_level = [&](int k, const std::vector<double>& phi, const std::vector<double>* phi_old,
                          int it1, std::vector<int> kit) {
    rec.time.push_back(disc.time(k));
    rec.phi_inf.push_back(norm_p(phi, kInfNorm, disc.h));
    if (opts.track_energy) {
      rec.energy.push_back(discrete_energy(phi, *ctx.ops.G, params, disc));
      rec.modified_energy.push_back(phi_old ? modified_energy(phi, *phi_old, *ctx.ops.G, params, disc)
                                            : rec.energy.back());
    }
    rec.newton_iters.push_back(it1);
    rec.krylov_iters.push_back(std::move(kit));
  };
  auto notify = [&](int k, const std::vector<double>& phi, const std::vector<double>& mu,
                    const NewtonResult* nr) {
    if (!observer) return;
    StepInfo info;
    info.step = k;
    info.time = disc.time(k);
    info.phi = &phi;
    info.mu = &mu;
    info.newton_iters = rec.newton_iters.back();
    info.krylov_iters = &rec.krylov_iters.back();
    info.newton = nr;
    observer(info);
  };

  SchemeState st;
  const auto phi0 = sample_interior(problem.initial_condition, params, disc);
  const auto fs = first_step(phi0, ctx);
  record_level(0, phi0, nullptr, 0, {});
  notify(0, phi0, fs.mu0, nullptr);

  st.phi_prev = phi0;
  st.phi_curr = fs.phi1;
  st.mu_prev = fs.mu0;
  st.mu_curr = fs.mu0;
  st.step_index = 1;
  st.time = disc.time(1);
  record_level(1, st.phi_curr, &st.phi_prev, 0, {});
  notify(1, st.phi_curr, st.mu_curr, nullptr);

  const int n = disc.interior();
  using clock = std::chrono::steady_clock;
  for (int j = 1; j < M; ++j) {
    const auto t0 = clock::now();
    NewtonResult nr = newton_solve(st, ctx, opts);
    rec.solve_seconds += std::chrono::duration<double>(clock::now() - t0).count();

    std::vector<double> phi(nr.psi.begin(), nr.psi.begin() + n);
    std::vector<double> mu(nr.psi.begin() + n, nr.psi.end());
    st.phi_prev = std::move(st.phi_curr);
    st.mu_prev = std::move(st.mu_curr);
    st.phi_curr = std::move(phi);
    st.mu_curr = std::move(mu);
    st.step_index = j + 1;
    st.time = disc.time(j + 1);
    record_level(j + 1, st.phi_curr, &st.phi_prev, nr.iters, nr.krylov_iters);
    notify(j + 1, st.phi_curr, st.mu_curr, &nr);
  }
  rec.phi = st.phi_curr;
  rec.mu = st.mu_curr;
  return rec;
}

}  // namespace frachc

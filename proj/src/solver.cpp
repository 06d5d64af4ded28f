#include "acv/solver.hpp"

#include <chrono>
#include <string>

namespace acv {

SolverState initial_state(const SaddleProblem& p, const Vec& x0, const Vec& y0) {
  SolverState s;
  s.x = x0.size() == 0 ? Vec::Zero(p.primal_dim()) : x0;
  s.y = y0.size() == 0 ? Vec::Zero(p.dual_dim()) : y0;
  if (s.x.size() != p.primal_dim()) throw DimensionError("initial_state: x0 has the wrong length");
  if (s.y.size() != p.dual_dim()) throw DimensionError("initial_state: y0 has the wrong length");
  s.x_prev = s.x;
  s.v = s.x;
  s.w = s.y;
  return s;
}

SolverState acv_step(const SaddleProblem& p, const SolverState& s, const StepParams& params) {
  const auto [gamma, tau, alpha, theta] = params;
  require(gamma > 0.0 && tau > 0.0, "acv_step: step sizes must be positive");
  require(alpha > 0.0 && alpha <= 1.0, "acv_step: alpha must lie in (0, 1]");

  const Vec u = alpha * s.x + (1.0 - alpha) * s.v;
  const Vec x_bar = s.x + theta * (s.x - s.x_prev);

  SolverState next;
  next.y = p.f_conj.prox(s.y + gamma * p.A.apply(x_bar), gamma);
  next.x = p.g.prox(s.x - tau * p.h.gradient(u) - tau * p.A.apply_adjoint(next.y), tau);
  next.v = alpha * next.x + (1.0 - alpha) * s.v;
  next.w = alpha * next.y + (1.0 - alpha) * s.w;
  next.x_prev = s.x;
  next.k = s.k + 1;

  if (!all_finite(next.x) || !all_finite(next.y) || !all_finite(next.v) || !all_finite(next.w))
    throw DivergenceError("iterate became non-finite at iteration " + std::to_string(next.k), s);
  return next;
}

SolverState run(const SaddleProblem& p, const ParamSchedule& schedule, SolverState init, Index T_max,
                const StepObserver& observe) {
  require(T_max >= 0, "run: T_max must be non-negative");
  using clock = std::chrono::steady_clock;
  SolverState s = std::move(init);
  for (Index t = 0; t < T_max; ++t) {
    if (schedule.restarts_at(s.k)) s.x_prev = s.x;
    const StepParams params = schedule.at(s.k);
    const auto start = clock::now();
    s = acv_step(p, s, params);
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();
    if (observe) observe(s, seconds);
  }
  return s;
}

}  // namespace acv

#pragma once

#include "acv/problem.hpp"
#include "acv/schedule.hpp"
#include "acv/types.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace acv {

struct SolverState {
  Vec x;
  Vec x_prev;
  Vec y;
  Vec v;  // primal average
  Vec w;  // dual average
  Index k = 0;
};

/// x_prev = v = x0 and w = y0. Empty vectors mean zero.
SolverState initial_state(const SaddleProblem& p, const Vec& x0 = Vec(), const Vec& y0 = Vec());

/// Thrown when an iterate stops being finite. Carries the last finite state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, SolverState last_finite)
      : std::runtime_error(what), last_finite_(std::move(last_finite)) {}
  [[nodiscard]] const SolverState& last_finite() const { return last_finite_; }

 private:
  SolverState last_finite_;
};

/// One accelerated Condat-Vu iteration:
///   u  = alpha x + (1 - alpha) v
///   y+ = prox_{gamma f*}(y + gamma A(x + theta (x - x_prev)))
///   x+ = prox_{tau g}(x - tau grad h(u) - tau A^T y+)
///   v+ = alpha x+ + (1 - alpha) v
///   w+ = alpha y+ + (1 - alpha) w
SolverState acv_step(const SaddleProblem& p, const SolverState& s, const StepParams& params);

/// Called after every step with the new state and the time spent inside the step.
using StepObserver = std::function<void(const SolverState& s, double step_seconds)>;

/// Runs T_max steps, taking parameters from schedule.at(state.k). At the end
/// of a warm-up phase the extrapolation restarts (x_prev := x).
SolverState run(const SaddleProblem& p, const ParamSchedule& schedule, SolverState init, Index T_max,
                const StepObserver& observe = {});

}  // namespace acv

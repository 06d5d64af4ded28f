#pragma once

#include "acv/problem.hpp"
#include "acv/solver.hpp"
#include "acv/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace acv {

/// <Ax, y> - f*(y) + g(x) + h(x). Returns -inf when y is outside dom f* and
/// +inf when x is outside dom g (the dual infeasibility wins if both).
double lagrangian(const SaddleProblem& p, const Vec& x, const Vec& y);

/// f(Ax) + g(x) + h(x), with f evaluated as the conjugate of f_conj.
double primal_objective(const SaddleProblem& p, const Vec& x);

/// Product of two l2 balls, B1 on the primal side and B2 on the dual side.
struct GapBox {
  Vec primal_center;
  double primal_radius = 1.0;
  Vec dual_center;
  double dual_radius = 1.0;
};

/// Balls centred at the reference pair with radii max(1, 2|x0 - x*|) and
/// max(1, 2|y0 - y*|).
GapBox default_box(const Vec& x_ref, const Vec& y_ref, const Vec& x0, const Vec& y0);

/// max_{y' in B2} L(x, y') - min_{x' in B1} L(x', y).
///
/// The dual maximisation is exact when f_conj carries a BoxQuadratic tag and
/// falls back to n_probe random boundary points otherwise. The primal
/// minimisation runs FISTA with the exact prox of g + indicator(B1), warm
/// started at x, to tolerance 1e-8. Both inner problems also consider (x, y)
/// themselves, so the result is non-negative whenever x is in B1 and y in B2.
double pd_gap_box(const SaddleProblem& p, const Vec& x, const Vec& y, const GapBox& box,
                  int n_probe = 8, std::uint64_t seed = 0);

/// max(value - reference, 0). clamped is set when value undercuts the
/// reference by more than 1e-12 (relative), i.e. the reference is not accurate.
double gap_vs_reference(double value, double reference, bool* clamped = nullptr);

struct ConvergenceRow {
  Index k = 0;
  double wall_time_s = 0.0;
  double objective = 0.0;
  std::optional<double> gap_ref;
  std::optional<double> pd_gap;
  double iterate_norm = 0.0;
};

struct ConvergenceRecord {
  std::vector<ConvergenceRow> rows;

  /// Rejects rows whose k does not exceed the previous one.
  void append(const ConvergenceRow& row);
  [[nodiscard]] bool empty() const { return rows.empty(); }
};

/// Running minimum.
std::vector<double> best_so_far(const std::vector<double>& values);

/// Least-squares slope of log(gap) against log(k) over k in [k_lo, k_hi],
/// computed on the best-so-far envelope of the gaps. Throws UsageError if the
/// window holds fewer than two points or a non-positive gap.
double fit_rate_slope(const std::vector<Index>& k, const std::vector<double>& gap, Index k_lo, Index k_hi);
double fit_rate_slope(const ConvergenceRecord& record, Index k_lo, Index k_hi);

/// exp of the least-squares slope of log(gap) against k, i.e. the average
/// per-iteration contraction factor of the envelope on the window.
double fit_linear_rate(const std::vector<Index>& k, const std::vector<double>& gap, Index k_lo, Index k_hi);
double fit_linear_rate(const ConvergenceRecord& record, Index k_lo, Index k_hi);

struct RecordOptions {
  Index log_every = 1;
  std::optional<double> reference_objective;
  std::optional<GapBox> gap_box;
  int n_probe = 8;
  std::uint64_t seed = 0;
};

/// Builds a ConvergenceRecord from solver callbacks. The objective and gap are
/// taken at the averaged pair (v_k, w_k); wall time accumulates step time only.
class Recorder {
 public:
  Recorder(const SaddleProblem& p, RecordOptions options);

  [[nodiscard]] StepObserver observer();
  void observe(const SolverState& s, double step_seconds);

  [[nodiscard]] const ConvergenceRecord& record() const { return record_; }
  [[nodiscard]] ConvergenceRecord take() { return std::move(record_); }
  /// Number of rows where the objective undercut the reference.
  [[nodiscard]] Index clamped_count() const { return clamped_; }

 private:
  const SaddleProblem* problem_;
  RecordOptions options_;
  ConvergenceRecord record_;
  double elapsed_ = 0.0;
  Index clamped_ = 0;
};

}  // namespace acv

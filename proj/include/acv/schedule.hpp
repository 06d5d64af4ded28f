#pragma once

#include "acv/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace acv {

enum class Regime {
  General,
  StronglyConvexPrimal,
  StronglyConvexDual,
  StronglyConvexSmooth,
  CondatVuBaseline,
  Custom,
};

std::string_view regime_name(Regime r);

struct StepParams {
  double gamma = 0.0;  // dual step
  double tau = 0.0;    // primal step
  double alpha = 1.0;  // momentum weight
  double theta = 1.0;  // extrapolation
};

/// Per-iteration step parameters. Two-phase schedules carry the warm-up
/// length; the driver restarts the extrapolation (x_prev := x) at that index.
class ParamSchedule {
 public:
  using Rule = std::function<StepParams(Index k)>;

  ParamSchedule(Regime regime, Rule rule, std::optional<Index> warmup_T0 = std::nullopt);
  static ParamSchedule constant(Regime regime, StepParams p);

  [[nodiscard]] Regime regime() const { return regime_; }
  [[nodiscard]] std::optional<Index> warmup_T0() const { return warmup_T0_; }
  [[nodiscard]] StepParams at(Index k) const;
  [[nodiscard]] bool restarts_at(Index k) const { return warmup_T0_ && *warmup_T0_ > 0 && k == *warmup_T0_; }

 private:
  Regime regime_;
  Rule rule_;
  std::optional<Index> warmup_T0_;
};

// Builders --------------------------------------------------------------------

/// alpha_k = 1/(k/2+1), gamma_k = tau_k = (k+1)/(sqrt(2)|A|(k+1) + 4L),
/// theta_k = gamma_{k-1}/gamma_k with theta_0 = 1.
ParamSchedule schedule_general(double L, double opnorm_A);

struct WarmupLength {
  Index T0 = 0;
  bool norm_floored = false;  // |A| = 0 was replaced by kNormFloor
};
inline constexpr double kNormFloor = 1e-12;

/// floor(sqrt(L/mu) + max(log(5L/(2|A|^2)), 0) / log(1 + sqrt(mu/(4L)))).
WarmupLength compute_T0(double L, double mu_g, double opnorm_A);

/// Constant warm-up for k < T0, then growing steps re-indexed by j = k - T0:
///   gamma_j = mu (j + 4 sqrt(L/mu)) / (8|A|^2), alpha_j = mu/(4|A|^2 gamma_j),
///   tau_j = 1/(2|A|^2 gamma_j).
/// paper_literal uses 4 sqrt(mu/L) in gamma_j instead; that variant exists so
/// the validator can demonstrate that it is infeasible. T0 is at least 1.
ParamSchedule schedule_sc_primal(double L, double mu_g, double opnorm_A, bool paper_literal = false);

/// schedule_sc_primal(L, mu_fstar, |A|) with the roles of gamma and tau swapped.
ParamSchedule schedule_sc_dual(double L, double mu_fstar, double opnorm_A, bool paper_literal = false);

/// Constant parameters for strongly convex g and f*, with
/// Lbar = |A|^2/mu_fstar + L: gamma = sqrt(mu_g/(mu_fstar^2 Lbar)),
/// tau = 1/sqrt(Lbar mu_g), alpha = sqrt(mu_g/Lbar), theta = 1/(1 + alpha).
ParamSchedule schedule_sc_smooth(double L, double mu_g, double mu_fstar, double opnorm_A);

/// Classical Condat-Vu: alpha = theta = 1, tau = 1/(L + 2|A|),
/// gamma = (1 - L tau)/(tau |A|^2); gamma = 1, tau = 1/L when |A| = 0.
ParamSchedule condat_vu_book_params(double L, double opnorm_A);

/// Classical Condat-Vu with caller-chosen constant steps.
ParamSchedule condat_vu_params(double gamma, double tau);

/// Chambolle-Pock / PDHG for L = 0: gamma = tau = 1/|A|.
ParamSchedule pdhg_params(double opnorm_A);

// Validation ------------------------------------------------------------------

inline constexpr double kValidationSlack = 1e-12;

struct ConstraintResult {
  ConstraintResult(std::string constraint_name = {}) : name(std::move(constraint_name)) {}

  std::string name;
  Index checked = 0;
  std::optional<Index> first_violation;
  double worst_excess = 0.0;  // max of lhs - rhs over violations
  [[nodiscard]] bool passed() const { return !first_violation.has_value(); }
};

struct ValidationReport {
  std::vector<ConstraintResult> constraints;
  std::vector<std::string> notes;  // advisory, never affect passed()

  [[nodiscard]] bool passed() const;
  [[nodiscard]] const ConstraintResult* first_failure() const;
  [[nodiscard]] std::string to_string() const;
};

ValidationReport validate_general(const ParamSchedule& s, double L, double opnorm_A, Index k_max);
ValidationReport validate_sc(const ParamSchedule& s, double L, double mu_g, double opnorm_A, Index k_max);
ValidationReport validate_sc_dual(const ParamSchedule& s, double L, double mu_fstar, double opnorm_A,
                                  Index k_max);
ValidationReport validate_sc_smooth(const StepParams& p, double L, double mu_g, double mu_fstar,
                                    double opnorm_A);

struct ProblemConstants {
  double L = 0.0;
  double opnorm_A = 0.0;
  double mu_g = 0.0;
  double mu_fstar = 0.0;
};

/// Runs the validator matching the schedule's regime. Baseline and custom
/// schedules are checked against the general constraint set.
ValidationReport validate_schedule(const ParamSchedule& s, const ProblemConstants& c, Index k_max);

}  // namespace acv

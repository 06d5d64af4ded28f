#pragma once

#include "acv/io.hpp"
#include "acv/metrics.hpp"
#include "acv/problem.hpp"
#include "acv/schedule.hpp"
#include "acv/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acv {

enum ExitCode : int {
  kExitOk = 0,
  kExitDivergence = 1,
  kExitValidation = 2,
  kExitUsage = 3,
};

/// A schedule cannot be built or fails its constraint sweep.
class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSetup {
  SaddleProblem problem;  // the saddle form every primal-dual method runs on
  /// The A = 0 form used by accelerated proximal gradient, when the family has one.
  std::optional<SaddleProblem> gradient_form;
  Vec x0;
  Vec y0;
  /// Identifies the problem data (config fields and input file contents).
  std::uint64_t hash = 0;
};

ProblemSetup build_problem(const RunConfig& c);

/// The problem an algorithm runs on: gradient_form for apgd, else problem.
/// Throws UsageError when the algorithm does not apply.
const SaddleProblem& problem_for(const ProblemSetup& setup, Algorithm a);

/// Schedule for every algorithm except cv-tuned (which needs a search).
/// Missing constants or inapplicable regimes raise ValidationFailure; hand-set
/// step_* overrides produce a constant Custom schedule.
ParamSchedule build_schedule(const RunConfig& c, Algorithm a, const SaddleProblem& p, bool paper_literal = false);

struct Reference {
  double objective = 0.0;
  Vec x;  // averaged iterates at the end of the reference run
  Vec y;
  std::string algorithm;
  Index iterations = 0;
};

/// Runs the strongest applicable ACV schedule for
/// reference_iters_multiplier * max_iters iterations and keeps the lowest
/// objective seen. Cached on disk when reference_cache_dir is set.
Reference compute_reference(const RunConfig& c, const ProblemSetup& setup);

struct GridSpec {
  enum class Mode { Primal, Dual } mode = Mode::Primal;
  int j_lo = 0;
  int j_hi = 3;
  int i_lo = 1;  // primal only
  int i_hi = 10;
};

/// "primal[:jlo..jhi[:ilo..ihi]]" or "dual[:jlo..jhi]". Defaults: primal
/// j = 0..3, i = 1..10; dual j = -5..5.
GridSpec parse_grid(const std::string& spec);

struct TunePoint {
  double multiplier = 0.0;
  StepParams params;
  std::optional<double> final_gap;  // empty when the run diverged
};

struct TuneResult {
  GridSpec grid;
  std::vector<TunePoint> points;
  TunePoint best;
};

/// Classical Condat-Vu over the grid for max_iters iterations each. Primal
/// mode: tau = m tau_acc with the book gamma, tau_acc the ACV general tau at
/// k = max_iters, m = i 10^-j. Dual mode: gamma = 10^j gamma_book with the book
/// tau. Picks the smallest final best-so-far gap, ties to the larger step.
/// Throws ValidationFailure when every point diverges.
TuneResult tune_cv(const RunConfig& c, const SaddleProblem& p, const GridSpec& grid, double reference_objective);

struct RunOutcome {
  std::string label;
  Algorithm algorithm = Algorithm::AcvGeneral;
  int status = kExitOk;
  std::string message;
  ConvergenceRecord record;  // objective and optional pd_gap; gap_ref added later
  double step_seconds = 0.0;
  Index iterations = 0;
};

/// Builds the schedule, validates it up to max_iters and runs it, recording
/// every log_every iterations. Never throws; failures land in status/message.
RunOutcome run_algorithm(const RunConfig& c, const ProblemSetup& setup, Algorithm a, const Reference& ref);

struct BenchRow {
  std::string label;
  int status = kExitOk;
  std::string message;
  std::optional<double> final_gap;
  std::optional<Index> iterations_to_threshold;
  std::optional<double> rate_slope;   // log-log slope over the shared window
  std::optional<double> contraction;  // per-iteration factor over the tail window
  double wall_time_s = 0.0;
};

struct BenchSummary {
  double threshold = 0.0;
  Index slope_lo = 0, slope_hi = 0;
  Index tail_lo = 0, tail_hi = 0;
  double reference_objective = 0.0;
  std::vector<BenchRow> rows;

  [[nodiscard]] std::string to_string() const;
};

/// Fills gap_ref on every record from the common reference and summarises.
BenchSummary summarize(std::vector<RunOutcome>& runs, double reference_objective, double threshold,
                       Index max_iters);

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& c, const std::vector<std::string>& algorithms, std::ostream& out,
                std::ostream& err);
int cmd_tune_cv(const RunConfig& c, const std::string& grid, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& c, std::optional<Index> horizon, bool paper_literal, std::ostream& out,
                 std::ostream& err);

}  // namespace acv

#pragma once

#include "acv/metrics.hpp"
#include "acv/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace acv {

/// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t line = 0) : UsageError(what), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Opening, reading or writing a file failed. The message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Datasets ---------------------------------------------------------------------

struct Dataset {
  Mat features;  // n x d
  Vec labels;    // n
  std::vector<std::string> feature_names;  // empty or d entries
  std::string source;
};

/// Reads "<label> <i>:<v> ..." lines with 1-based indices into a dense matrix.
/// Blank lines are skipped, missing entries are 0 and the column count is the
/// largest index seen (or min_features if larger).
Dataset read_libsvm(const std::filesystem::path& path, Index min_features = 0);

/// Writes non-zero entries at 17 significant digits, so reading back is exact.
void write_libsvm(const Dataset& data, const std::filesystem::path& path);

/// Divides each column by its largest absolute value; zero columns are kept.
Dataset rescale_columns(Dataset data);

/// Whitespace-separated numbers, e.g. an image stored row by row.
Vec read_vector(const std::filesystem::path& path);
void write_vector(const Vec& v, const std::filesystem::path& path);

// Convergence logs ---------------------------------------------------------------

inline constexpr const char* kCsvHeader = "k,wall_time_s,objective,gap_ref,pd_gap,iterate_norm";

/// Header plus one row per record entry; missing optional values are empty
/// fields. Parent directories are created.
void write_convergence_csv(const ConvergenceRecord& record, const std::filesystem::path& path);
ConvergenceRecord read_convergence_csv(const std::filesystem::path& path);

// Run configuration -----------------------------------------------------------------

enum class ProblemFamily { FusedElasticNet, Lasso, Imaging };

enum class Algorithm { AcvGeneral, AcvSc, AcvScDual, AcvScSmooth, CvBook, CvTuned, Apgd, Pdhg };

std::string algorithm_name(Algorithm a);
/// Throws UsageError naming the accepted spellings.
Algorithm parse_algorithm(const std::string& name);
std::string family_name(ProblemFamily f);

struct RunConfig {
  ProblemFamily problem = ProblemFamily::FusedElasticNet;

  // Regression data: a LibSVM file, or synthetic Gaussian data when empty.
  std::string data_path;
  bool rescale = true;  // applies to data_path only
  Index n_samples = 50;
  Index n_features = 100;
  double sparsity = 0.1;
  double noise = 0.1;
  /// When > 0, W and b are scaled by a common factor so that |W|^2 equals it.
  double target_lipschitz = 0.0;

  // Fused elastic net and LASSO (lambda1 is the LASSO weight).
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  double lambda3 = 1e3;
  double beta = 0.5;
  bool smoothed = false;
  double pair_fraction = 0.1;

  // Imaging. Without observed_path a phantom is observed with noise.
  Index height = 32;
  Index width = 32;
  std::string forward = "mask";  // mask | blur | tomography
  std::string observed_path;
  double keep_fraction = 0.25;
  Index blur_half_width = 1;
  double ct_rows_factor = 2.0;
  double ct_scale = 1.0;
  double mu_g = 0.0;
  std::optional<double> rho1;  // default 100 for blur, 1 otherwise

  // Run.
  Algorithm algorithm = Algorithm::AcvGeneral;
  Index max_iters = 1000;
  std::uint64_t seed = 0;
  std::string output_path = "out";
  std::optional<Index> log_every;  // default 1 up to 1e4 iterations, else 10
  Index reference_iters_multiplier = 10;
  bool record_timing = false;
  bool pd_gap = false;
  /// When false, schedules run without the constraint sweep (exploring steps
  /// outside the theory; divergence is then reported as such).
  bool check_schedule = true;
  double gap_threshold = 1e-6;
  std::string tune_grid = "primal";
  std::string reference_cache_dir;
  std::string x0_path;
  std::string y0_path;

  // Hand-set constant step parameters. Any of them turns the schedule into a
  // constant one built from the algorithm's k = 0 parameters.
  std::optional<double> step_gamma;
  std::optional<double> step_tau;
  std::optional<double> step_alpha;
  std::optional<double> step_theta;

  [[nodiscard]] Index effective_log_every() const;
  [[nodiscard]] double effective_rho1() const;
};

/// Flat "key = value" lines, '#' starts a comment. All unknown keys are
/// reported together in one ParseError.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig read_config(const std::filesystem::path& path);

/// The config in the same grammar, one key per line. Parsing it back gives an
/// equal config.
std::string format_config(const RunConfig& c);

}  // namespace acv

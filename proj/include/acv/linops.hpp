#pragma once

#include "acv/types.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace acv {

/// Adjoint-capable linear map A: R^in_dim -> R^out_dim.
///
/// Operators are immutable once built; the forward and adjoint kernels
/// capture their data through shared_ptr<const> so copies are cheap and
/// concurrent apply() calls are safe.
class LinearOperator {
 public:
  /// Kernel writes A*in (or A^T*in) into a pre-sized output vector.
  using Kernel = std::function<void(const Vec& in, Vec& out)>;

  LinearOperator(Index in_dim, Index out_dim, Kernel forward, Kernel adjoint,
                 std::optional<double> norm_hint = std::nullopt);

  [[nodiscard]] Index in_dim() const { return in_dim_; }
  [[nodiscard]] Index out_dim() const { return out_dim_; }

  /// Cached upper bound on the operator norm, when known analytically.
  [[nodiscard]] std::optional<double> norm_hint() const { return norm_hint_; }
  [[nodiscard]] LinearOperator with_norm_hint(double hint) const;

  /// Throws DimensionError when x.size() != in_dim().
  [[nodiscard]] Vec apply(const Vec& x) const;
  /// Throws DimensionError when y.size() != out_dim().
  [[nodiscard]] Vec apply_adjoint(const Vec& y) const;

  /// Dense copy of the operator, column by column. Meant for tests and
  /// small instances.
  [[nodiscard]] Mat materialize() const;

 private:
  Index in_dim_;
  Index out_dim_;
  Kernel forward_;
  Kernel adjoint_;
  std::optional<double> norm_hint_;
};

// Builders ------------------------------------------------------------------

LinearOperator identity_operator(Index dim);
LinearOperator zero_operator(Index in_dim, Index out_dim);
LinearOperator dense_operator(Mat matrix);
LinearOperator diagonal_operator(Vec diagonal);

/// One row per pair (i, j): (Fx)_r = x_i - x_j. Indices are 0-based.
LinearOperator pair_difference_operator(
    const std::vector<std::pair<Index, Index>>& pairs, Index dim);

/// 1-D forward differences on n points, (n-1) x n.
LinearOperator forward_difference_1d(Index n);

/// 2-D forward differences on a row-major height x width image. The output
/// stacks the horizontal differences (height x (width-1)) followed by the
/// vertical ones ((height-1) x width).
LinearOperator forward_difference_2d(Index height, Index width);

/// Square 0/1 diagonal selector.
LinearOperator mask_operator(const std::vector<bool>& keep);

/// c * op, with the norm hint scaled by |c|.
LinearOperator scaled_operator(const LinearOperator& op, double c);

/// Sparse matrix given as (row, col, value) triplets.
LinearOperator sparse_operator(Index rows, Index cols,
                               const std::vector<Eigen::Triplet<double>>& entries);

// Operator norm -------------------------------------------------------------

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline constexpr double kNormSafetyFactor = 1.0 + 1e-3;

/// Power iteration on A^T A from a seeded random start. Stops once the
/// relative change of the Rayleigh quotient is below tol and the Aitken
/// estimate of the remaining error (from the ratio of successive changes)
/// is below tol as well. On hitting max_iters the best estimate is
/// returned with converged = false.
NormEstimate estimate_op_norm(const LinearOperator& op, double tol = 1e-6,
                              int max_iters = 1000, std::uint64_t seed = 0);

/// Upper bound usable by step-size rules: the norm hint when present,
/// otherwise the power-iteration estimate times kNormSafetyFactor.
double operator_norm_bound(const LinearOperator& op, std::uint64_t seed = 0);

}  // namespace acv

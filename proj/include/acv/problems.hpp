#pragma once

#include "acv/problem.hpp"
#include "acv/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace acv {

// Fused elastic net ------------------------------------------------------------
//
//   1/2 |Wx - b|^2 + lambda1 beta |x|_1 + lambda1 (1-beta)/2 |x|^2 + lambda2 J(Fx)
//
// with F the pair-difference operator over the most correlated feature pairs
// and J either |.|_1 (smoothed = false) or its Huber envelope with parameter
// lambda3.

struct FusedElasticNetSpec {
  Mat W;
  Vec b;
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  double lambda3 = 1e3;
  double beta = 0.5;
  bool smoothed = false;
  double pair_fraction = 0.1;
};

/// Pairs (i, j), i < j, of columns of W ranked by |Pearson correlation|,
/// descending, ties broken lexicographically. Constant columns never pair.
/// Returns min(ceil(fraction * d(d-1)/2), eligible pairs) entries.
std::vector<std::pair<Index, Index>> build_pair_index(const Mat& W, double fraction);

/// Saddle form with A = F and f* = lambda2 J*. When lambda2 = 0 the coupling
/// vanishes and A is the zero map into R^1 with f* the indicator of {0}.
SaddleProblem build_fused_elastic_net(const FusedElasticNetSpec& spec);

/// Smoothed variant with the Huber term folded into h (A = 0), the form used by
/// accelerated proximal gradient. Requires spec.smoothed.
SaddleProblem build_fused_elastic_net_apgd(const FusedElasticNetSpec& spec);

// LASSO ------------------------------------------------------------------------

enum class LassoForm {
  Split,  // A = I, f* = indicator of the lambda l_inf ball, g = 0
  Prox,   // A = 0, g = lambda |.|_1
};

SaddleProblem build_lasso(const Mat& W, const Vec& b, double lambda, LassoForm form);

// Imaging ----------------------------------------------------------------------
//
//   1/2 |Mx - b|^2 + lambda1 |Dx|_1 + indicator(x >= 0) + mu_g/2 |x|^2
//
// D is the 2-D forward difference, passed to the solver as D/rho1 together with
// f* = indicator of the lambda1*rho1 l_inf ball; the primal problem does not
// depend on rho1.

enum class ForwardModel { Mask, Blur, Tomography };

struct ImagingSpec {
  Index height = 0;
  Index width = 0;
  Vec observed;
  ForwardModel forward = ForwardModel::Mask;
  /// Mask: explicit pixel mask; when empty a random one keeping keep_fraction
  /// of the pixels is drawn from seed.
  std::vector<bool> mask;
  double keep_fraction = 0.25;
  /// Blur: box half-width at the image centre. It grows linearly with the
  /// distance from the centre to twice this value in the corners.
  Index blur_half_width = 1;
  /// Tomography surrogate: dense Gaussian rows = ct_rows_factor * pixels,
  /// scaled by ct_scale / sqrt(rows).
  double ct_rows_factor = 2.0;
  double ct_scale = 1.0;
  double lambda1 = 0.01;
  double mu_g = 0.0;
  double rho1 = 1.0;
  std::uint64_t seed = 0;
};

/// Exactly round(keep_fraction * n) pixels kept, chosen uniformly.
std::vector<bool> random_mask(Index n, double keep_fraction, std::uint64_t seed);

/// The forward operator M of a spec (mask, blur stencil or dense surrogate).
LinearOperator imaging_forward_operator(const ImagingSpec& spec);

SaddleProblem build_imaging(const ImagingSpec& spec);

// Synthetic data -----------------------------------------------------------------

struct SyntheticRegression {
  Mat W;
  Vec b;
  Vec x_true;
};

/// Gaussian W (n x d), x_true with ceil(sparsity * d) standard normal entries,
/// b = W x_true + noise * N(0, 1).
SyntheticRegression make_synthetic_regression(Index n, Index d, double sparsity, double noise,
                                              std::uint64_t seed);

/// Piecewise-constant test image in [0, 1] (rectangle and disc on a background).
Vec make_phantom(Index height, Index width);

/// M x + noise * N(0, 1).
Vec synthetic_observation(const LinearOperator& forward, const Vec& image, double noise, std::uint64_t seed);

}  // namespace acv

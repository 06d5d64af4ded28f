#include "acv/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace acv {

std::vector<std::pair<Index, Index>> build_pair_index(const Mat& W, double fraction) {
  const Index d = W.cols();
  require(d >= 2, "build_pair_index: need at least two columns");
  require(fraction > 0.0 && fraction <= 1.0, "build_pair_index: fraction must lie in (0, 1]");

  Mat centred = W.rowwise() - W.colwise().mean();
  Vec norms = centred.colwise().norm();
  std::vector<bool> constant(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) {
    const double scale = std::max(1.0, W.col(j).cwiseAbs().maxCoeff());
    constant[static_cast<std::size_t>(j)] = !(norms[j] > 1e-14 * scale * std::sqrt(static_cast<double>(W.rows())));
    if (!constant[static_cast<std::size_t>(j)]) centred.col(j) /= norms[j];
  }
  const Mat corr = centred.transpose() * centred;

  struct Cand {
    Index i, j;
    double score;
  };
  std::vector<Cand> cands;
  for (Index i = 0; i < d; ++i) {
    if (constant[static_cast<std::size_t>(i)]) continue;
    for (Index j = i + 1; j < d; ++j) {
      if (constant[static_cast<std::size_t>(j)]) continue;
      cands.push_back({i, j, std::abs(corr(i, j))});
    }
  }
  // cands is generated in lexicographic order, so a stable sort keeps that as the tie-break.
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.score > b.score; });

  const double total = static_cast<double>(d) * static_cast<double>(d - 1) / 2.0;
  const auto want = static_cast<std::size_t>(std::ceil(fraction * total - 1e-9));
  const std::size_t count = std::min(want, cands.size());
  std::vector<std::pair<Index, Index>> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) out.emplace_back(cands[r].i, cands[r].j);
  return out;
}

namespace {

void check_fen(const FusedElasticNetSpec& s) {
  require(s.W.rows() >= 1 && s.W.cols() >= 2, "fused elastic net: W must have rows and at least two columns");
  if (s.b.size() != s.W.rows()) throw DimensionError("fused elastic net: b must have one entry per row of W");
  require(s.lambda1 >= 0.0 && s.lambda2 >= 0.0, "fused elastic net: lambda1 and lambda2 must be non-negative");
  require(s.beta >= 0.0 && s.beta <= 1.0, "fused elastic net: beta must lie in [0, 1]");
  require(!s.smoothed || (s.lambda3 > 0.0 && std::isfinite(s.lambda3)),
          "fused elastic net: smoothing needs a finite lambda3 > 0");
}

}  // namespace

SaddleProblem build_fused_elastic_net(const FusedElasticNetSpec& spec) {
  check_fen(spec);
  const Index d = spec.W.cols();
  SmoothFunction h = least_squares(dense_operator(spec.W), spec.b);
  ProxFunction g = elastic_net(d, spec.lambda1, spec.beta);
  if (spec.lambda2 == 0.0)
    return make_problem(zero_indicator(1), std::move(g), std::move(h), zero_operator(d, 1));

  const auto pairs = build_pair_index(spec.W, spec.pair_fraction);
  require(!pairs.empty(), "fused elastic net: no eligible feature pairs");
  LinearOperator F = pair_difference_operator(pairs, d);
  const Index P = F.out_dim();
  ProxFunction f_conj = spec.smoothed ? huber_conjugate(P, spec.lambda2, spec.lambda3) : linf_ball(P, spec.lambda2);
  return make_problem(std::move(f_conj), std::move(g), std::move(h), std::move(F));
}

SaddleProblem build_fused_elastic_net_apgd(const FusedElasticNetSpec& spec) {
  check_fen(spec);
  require(spec.smoothed, "fused elastic net: the gradient form needs the smoothed variant");
  const Index d = spec.W.cols();
  SmoothFunction h = least_squares(dense_operator(spec.W), spec.b);
  if (spec.lambda2 > 0.0) {
    const auto pairs = build_pair_index(spec.W, spec.pair_fraction);
    require(!pairs.empty(), "fused elastic net: no eligible feature pairs");
    h = sum(h, huber_composite(pair_difference_operator(pairs, d), spec.lambda2, spec.lambda3));
  }
  return make_problem(zero_indicator(1), elastic_net(d, spec.lambda1, spec.beta), std::move(h),
                      zero_operator(d, 1));
}

SaddleProblem build_lasso(const Mat& W, const Vec& b, double lambda, LassoForm form) {
  if (b.size() != W.rows()) throw DimensionError("build_lasso: b must have one entry per row of W");
  require(lambda >= 0.0, "build_lasso: lambda must be non-negative");
  const Index d = W.cols();
  SmoothFunction h = least_squares(dense_operator(W), b);
  if (form == LassoForm::Split)
    return make_problem(linf_ball(d, lambda), zero_function(d), std::move(h), identity_operator(d));
  return make_problem(zero_indicator(1), l1_norm(d, lambda), std::move(h), zero_operator(d, 1));
}

std::vector<bool> random_mask(Index n, double keep_fraction, std::uint64_t seed) {
  require(n >= 1, "random_mask: need at least one pixel");
  require(keep_fraction > 0.0 && keep_fraction <= 1.0, "random_mask: keep fraction must lie in (0, 1]");
  const auto keep = static_cast<std::size_t>(std::llround(keep_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with our own index draw; std::shuffle's output is implementation defined.
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  for (std::size_t i = 0; i < keep; ++i) mask[order[i]] = true;
  return mask;
}

namespace {

Index reflect(Index i, Index n) {
  const Index period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

LinearOperator blur_operator(Index height, Index width, Index base) {
  require(base >= 0, "blur: half-width must be non-negative");
  const double ci = 0.5 * static_cast<double>(height - 1);
  const double cj = 0.5 * static_cast<double>(width - 1);
  const double rmax = std::max(std::hypot(ci, cj), 1e-300);
  std::vector<Eigen::Triplet<double>> entries;
  for (Index i = 0; i < height; ++i) {
    for (Index j = 0; j < width; ++j) {
      const double frac = std::hypot(static_cast<double>(i) - ci, static_cast<double>(j) - cj) / rmax;
      const Index r = base + static_cast<Index>(std::lround(static_cast<double>(base) * frac));
      const double weight = 1.0 / static_cast<double>((2 * r + 1) * (2 * r + 1));
      const Index row = i * width + j;
      for (Index di = -r; di <= r; ++di)
        for (Index dj = -r; dj <= r; ++dj)
          entries.emplace_back(row, reflect(i + di, height) * width + reflect(j + dj, width), weight);
    }
  }
  return sparse_operator(height * width, height * width, entries);
}

}  // namespace

LinearOperator imaging_forward_operator(const ImagingSpec& spec) {
  require(spec.height >= 1 && spec.width >= 1 && spec.height * spec.width >= 2,
          "imaging: image must have at least two pixels");
  const Index n = spec.height * spec.width;
  switch (spec.forward) {
    case ForwardModel::Mask: {
      if (!spec.mask.empty()) {
        if (static_cast<Index>(spec.mask.size()) != n) throw DimensionError("imaging: mask size differs from image size");
        return mask_operator(spec.mask);
      }
      return mask_operator(random_mask(n, spec.keep_fraction, spec.seed));
    }
    case ForwardModel::Blur: return blur_operator(spec.height, spec.width, spec.blur_half_width);
    case ForwardModel::Tomography: {
      require(spec.ct_rows_factor > 0.0 && spec.ct_scale > 0.0, "imaging: tomography surrogate needs positive sizes");
      const auto rows = std::max<Index>(1, static_cast<Index>(std::llround(spec.ct_rows_factor * static_cast<double>(n))));
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal;
      Mat m(rows, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
      m *= spec.ct_scale / std::sqrt(static_cast<double>(rows));
      return dense_operator(std::move(m));
    }
  }
  throw UsageError("imaging: unknown forward model");
}

SaddleProblem build_imaging(const ImagingSpec& spec) {
  require(spec.lambda1 >= 0.0, "imaging: lambda1 must be non-negative");
  require(spec.mu_g >= 0.0, "imaging: mu_g must be non-negative");
  require(spec.rho1 > 0.0, "imaging: rho1 must be positive");
  LinearOperator M = imaging_forward_operator(spec);
  if (spec.observed.size() != M.out_dim()) throw DimensionError("imaging: observed vector has the wrong length");
  const Index n = spec.height * spec.width;
  LinearOperator D = scaled_operator(forward_difference_2d(spec.height, spec.width), 1.0 / spec.rho1);
  const Index P = D.out_dim();
  return make_problem(linf_ball(P, spec.lambda1 * spec.rho1), nonneg_plus_l2(n, spec.mu_g),
                      least_squares(M, spec.observed), std::move(D));
}

SyntheticRegression make_synthetic_regression(Index n, Index d, double sparsity, double noise,
                                              std::uint64_t seed) {
  require(n >= 1 && d >= 1, "synthetic regression: sizes must be positive");
  require(sparsity >= 0.0 && sparsity <= 1.0, "synthetic regression: sparsity must lie in [0, 1]");
  require(noise >= 0.0, "synthetic regression: noise must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SyntheticRegression out;
  out.W.resize(n, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < n; ++i) out.W(i, j) = normal(rng);
  out.x_true = Vec::Zero(d);
  const auto nnz = static_cast<Index>(std::ceil(sparsity * static_cast<double>(d)));
  for (Index j = 0; j < nnz; ++j) out.x_true[(j * d) / std::max<Index>(nnz, 1)] = normal(rng);
  out.b = out.W * out.x_true;
  for (Index i = 0; i < n; ++i) out.b[i] += noise * normal(rng);
  return out;
}

Vec make_phantom(Index height, Index width) {
  require(height >= 1 && width >= 1, "phantom: sizes must be positive");
  Vec img(height * width);
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  for (Index i = 0; i < height; ++i) {
    for (Index j = 0; j < width; ++j) {
      const double y = (static_cast<double>(i) + 0.5) / h;
      const double x = (static_cast<double>(j) + 0.5) / w;
      double v = 0.2;
      if (x > 0.15 && x < 0.55 && y > 0.2 && y < 0.7) v = 0.8;
      if (std::hypot(x - 0.68, y - 0.62) < 0.2) v = 0.5;
      img[i * width + j] = v;
    }
  }
  return img;
}

Vec synthetic_observation(const LinearOperator& forward, const Vec& image, double noise, std::uint64_t seed) {
  require(noise >= 0.0, "synthetic observation: noise must be non-negative");
  Vec b = forward.apply(image);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (Index i = 0; i < b.size(); ++i) b[i] += noise * normal(rng);
  return b;
}

}  // namespace acv

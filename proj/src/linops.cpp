#include "acv/linops.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace acv {

namespace {

void check_dim(Index got, Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

// Largest eigenvalue of the path-graph Laplacian on n nodes.
double path_laplacian_max(Index n) {
  if (n < 2) return 0.0;
  return 2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

LinearOperator::LinearOperator(Index in_dim, Index out_dim, Kernel forward, Kernel adjoint,
                               std::optional<double> norm_hint)
    : in_dim_(in_dim),
      out_dim_(out_dim),
      forward_(std::move(forward)),
      adjoint_(std::move(adjoint)),
      norm_hint_(norm_hint) {
  require(in_dim > 0 && out_dim > 0, "LinearOperator: dimensions must be positive");
  require(static_cast<bool>(forward_) && static_cast<bool>(adjoint_),
          "LinearOperator: forward and adjoint kernels are required");
  require(!norm_hint || *norm_hint >= 0.0, "LinearOperator: norm hint must be non-negative");
}

LinearOperator LinearOperator::with_norm_hint(double hint) const {
  return {in_dim_, out_dim_, forward_, adjoint_, hint};
}

Vec LinearOperator::apply(const Vec& x) const {
  check_dim(x.size(), in_dim_, "apply");
  Vec out = Vec::Zero(out_dim_);
  forward_(x, out);
  return out;
}

Vec LinearOperator::apply_adjoint(const Vec& y) const {
  check_dim(y.size(), out_dim_, "apply_adjoint");
  Vec out = Vec::Zero(in_dim_);
  adjoint_(y, out);
  return out;
}

Mat LinearOperator::materialize() const {
  Mat m(out_dim_, in_dim_);
  Vec e = Vec::Zero(in_dim_);
  for (Index j = 0; j < in_dim_; ++j) {
    e[j] = 1.0;
    m.col(j) = apply(e);
    e[j] = 0.0;
  }
  return m;
}

LinearOperator identity_operator(Index dim) {
  auto copy = [](const Vec& in, Vec& out) { out = in; };
  return {dim, dim, copy, copy, 1.0};
}

LinearOperator zero_operator(Index in_dim, Index out_dim) {
  auto zero = [](const Vec&, Vec& out) { out.setZero(); };
  return {in_dim, out_dim, zero, zero, 0.0};
}

LinearOperator dense_operator(Mat matrix) {
  auto m = std::make_shared<const Mat>(std::move(matrix));
  return {m->cols(), m->rows(),
          [m](const Vec& in, Vec& out) { out.noalias() = (*m) * in; },
          [m](const Vec& in, Vec& out) { out.noalias() = m->transpose() * in; }};
}

LinearOperator diagonal_operator(Vec diagonal) {
  auto d = std::make_shared<const Vec>(std::move(diagonal));
  const double hint = d->size() > 0 ? d->cwiseAbs().maxCoeff() : 0.0;
  auto mul = [d](const Vec& in, Vec& out) { out = d->cwiseProduct(in); };
  return {d->size(), d->size(), mul, mul, hint};
}

LinearOperator pair_difference_operator(const std::vector<std::pair<Index, Index>>& pairs,
                                        Index dim) {
  require(!pairs.empty(), "pair_difference_operator: at least one pair is required");
  for (const auto& [i, j] : pairs) {
    if (i == j || i < 0 || j < 0 || i >= dim || j >= dim) {
      throw UsageError("pair_difference_operator: malformed pair (" + std::to_string(i) + ", " +
                       std::to_string(j) + ") for dimension " + std::to_string(dim));
    }
  }
  auto p = std::make_shared<const std::vector<std::pair<Index, Index>>>(pairs);
  return {dim, static_cast<Index>(pairs.size()),
          [p](const Vec& in, Vec& out) {
            for (std::size_t r = 0; r < p->size(); ++r) {
              const auto& [i, j] = (*p)[r];
              out[static_cast<Index>(r)] = in[i] - in[j];
            }
          },
          [p](const Vec& in, Vec& out) {
            out.setZero();
            for (std::size_t r = 0; r < p->size(); ++r) {
              const auto& [i, j] = (*p)[r];
              out[i] += in[static_cast<Index>(r)];
              out[j] -= in[static_cast<Index>(r)];
            }
          }};
}

LinearOperator forward_difference_1d(Index n) {
  require(n >= 2, "forward_difference_1d: need at least two points");
  const double hint = std::sqrt(path_laplacian_max(n)) * (1.0 + 1e-12);
  return {n, n - 1,
          [n](const Vec& in, Vec& out) {
            for (Index i = 0; i + 1 < n; ++i) out[i] = in[i + 1] - in[i];
          },
          [n](const Vec& in, Vec& out) {
            out.setZero();
            for (Index i = 0; i + 1 < n; ++i) {
              out[i + 1] += in[i];
              out[i] -= in[i];
            }
          },
          hint};
}

LinearOperator forward_difference_2d(Index height, Index width) {
  require(height >= 1 && width >= 1 && height * width >= 2,
          "forward_difference_2d: image must have at least two pixels");
  const Index nh = height * (width - 1);
  const Index nv = (height - 1) * width;
  // The grid Laplacian is the Kronecker sum of two path Laplacians.
  const double hint =
      std::sqrt(path_laplacian_max(height) + path_laplacian_max(width)) * (1.0 + 1e-12);
  return {height * width, nh + nv,
          [=](const Vec& in, Vec& out) {
            Index r = 0;
            for (Index i = 0; i < height; ++i)
              for (Index j = 0; j + 1 < width; ++j, ++r)
                out[r] = in[i * width + j + 1] - in[i * width + j];
            for (Index i = 0; i + 1 < height; ++i)
              for (Index j = 0; j < width; ++j, ++r)
                out[r] = in[(i + 1) * width + j] - in[i * width + j];
          },
          [=](const Vec& in, Vec& out) {
            out.setZero();
            Index r = 0;
            for (Index i = 0; i < height; ++i)
              for (Index j = 0; j + 1 < width; ++j, ++r) {
                out[i * width + j + 1] += in[r];
                out[i * width + j] -= in[r];
              }
            for (Index i = 0; i + 1 < height; ++i)
              for (Index j = 0; j < width; ++j, ++r) {
                out[(i + 1) * width + j] += in[r];
                out[i * width + j] -= in[r];
              }
          },
          hint};
}

LinearOperator mask_operator(const std::vector<bool>& keep) {
  require(!keep.empty(), "mask_operator: empty mask");
  Vec d(static_cast<Index>(keep.size()));
  bool any = false;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    d[static_cast<Index>(i)] = keep[i] ? 1.0 : 0.0;
    any = any || keep[i];
  }
  return diagonal_operator(std::move(d)).with_norm_hint(any ? 1.0 : 0.0);
}

LinearOperator scaled_operator(const LinearOperator& op, double c) {
  std::optional<double> hint;
  if (op.norm_hint()) hint = std::abs(c) * *op.norm_hint();
  auto inner = std::make_shared<const LinearOperator>(op);
  return {op.in_dim(), op.out_dim(),
          [inner, c](const Vec& in, Vec& out) { out = c * inner->apply(in); },
          [inner, c](const Vec& in, Vec& out) { out = c * inner->apply_adjoint(in); },
          hint};
}

LinearOperator sparse_operator(Index rows, Index cols,
                               const std::vector<Eigen::Triplet<double>>& entries) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  auto sm = std::make_shared<const Eigen::SparseMatrix<double>>(std::move(m));
  return {cols, rows,
          [sm](const Vec& in, Vec& out) { out = (*sm) * in; },
          [sm](const Vec& in, Vec& out) { out = sm->transpose() * in; }};
}

NormEstimate estimate_op_norm(const LinearOperator& op, double tol, int max_iters,
                              std::uint64_t seed) {
  require(tol > 0.0, "estimate_op_norm: tol must be positive");
  require(max_iters > 0, "estimate_op_norm: max_iters must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vec v(op.in_dim());
  for (Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  v.normalize();

  NormEstimate est;
  double prev = -1.0;
  double prev_change = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iters; ++it) {
    const Vec av = op.apply(v);
    const double rayleigh = av.squaredNorm();  // v^T A^T A v with |v| = 1
    Vec w = op.apply_adjoint(av);
    est.iterations = it;
    est.value = std::max(est.value, std::sqrt(rayleigh));
    const double wn = w.norm();
    if (wn == 0.0) {
      // v lies in the null space; for a random start this means A = 0.
      est.converged = true;
      return est;
    }
    if (prev > 0.0) {
      const double change = std::abs(rayleigh - prev) / rayleigh;
      const double ratio = prev_change > 0.0 ? change / prev_change : 0.0;
      const double remaining = ratio < 1.0 ? change * ratio / (1.0 - ratio)
                                           : std::numeric_limits<double>::infinity();
      if (change < tol && remaining < tol) {
        est.converged = true;
        return est;
      }
      prev_change = change;
    }
    prev = rayleigh;
    v = w / wn;
  }
  return est;
}

double operator_norm_bound(const LinearOperator& op, std::uint64_t seed) {
  if (op.norm_hint()) return *op.norm_hint();
  return estimate_op_norm(op, 1e-6, 1000, seed).value * kNormSafetyFactor;
}

}  // namespace acv

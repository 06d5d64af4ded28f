#include "acv/problem.hpp"

#include <utility>

namespace acv {

SaddleProblem make_problem(ProxFunction f_conj, ProxFunction g, SmoothFunction h, LinearOperator A) {
  if (g.dim() != A.in_dim() || h.dim() != A.in_dim())
    throw DimensionError("make_problem: g, h and A disagree on the primal dimension");
  if (f_conj.dim() != A.out_dim())
    throw DimensionError("make_problem: f* and A disagree on the dual dimension");
  const double L = h.lipschitz();
  const double norm = operator_norm_bound(A);
  const double mu_g = g.strong_convexity();
  const double mu_fstar = f_conj.strong_convexity();
  return {std::move(f_conj), std::move(g), std::move(h), std::move(A), L, norm, mu_g, mu_fstar};
}

}  // namespace acv

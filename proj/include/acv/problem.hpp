#pragma once

#include "acv/functions.hpp"
#include "acv/linops.hpp"
#include "acv/types.hpp"

namespace acv {

/// min_x f(Ax) + g(x) + h(x), stored through its saddle form
///   max_y <Ax, y> - f*(y) + g(x) + h(x).
struct SaddleProblem {
  ProxFunction f_conj;  // on Y
  ProxFunction g;       // on X
  SmoothFunction h;     // on X
  LinearOperator A;     // X -> Y
  double L = 0.0;
  double opnorm_A = 0.0;
  double mu_g = 0.0;
  double mu_fstar = 0.0;

  [[nodiscard]] Index primal_dim() const { return A.in_dim(); }
  [[nodiscard]] Index dual_dim() const { return A.out_dim(); }
};

/// Assembles a problem and reads the constants off its parts; opnorm_A comes
/// from operator_norm_bound(A). Throws DimensionError on inconsistent sizes.
SaddleProblem make_problem(ProxFunction f_conj, ProxFunction g, SmoothFunction h, LinearOperator A);

}  // namespace acv

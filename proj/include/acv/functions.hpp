#pragma once

#include "acv/linops.hpp"
#include "acv/types.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace acv {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Indicator tolerance used by value(): points within this distance of the
/// set (relative to max(1, |bound|)) count as feasible.
inline constexpr double kFeasibilityTol = 1e-12;

/// Structure tag for functions of the form
///   iota_{[lower, upper]^n}(z) + (quadratic / 2) * |z|^2.
/// Lets diagnostics maximise/minimise such terms exactly.
struct BoxQuadratic {
  double lower = -kInf;
  double upper = kInf;
  double quadratic = 0.0;
};

/// Convex function accessed through its scaled proximal map
/// prox(z, eta) = argmin_x 1/2 |x - z|^2 + eta * f(x).
class ProxFunction {
 public:
  using ProxFn = std::function<Vec(const Vec& z, double eta)>;
  using ValueFn = std::function<double(const Vec& z)>;

  ProxFunction(std::string name, Index dim, ProxFn prox, ValueFn value,
               double strong_convexity, ValueFn conjugate_value = {},
               std::optional<BoxQuadratic> structure = std::nullopt);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] Index dim() const { return dim_; }
  [[nodiscard]] double strong_convexity() const { return strong_convexity_; }

  [[nodiscard]] Vec prox(const Vec& z, double eta) const;
  /// Extended-real value; +inf outside the domain of an indicator.
  [[nodiscard]] double value(const Vec& z) const;

  /// Value of the convex conjugate of this function, when known in closed
  /// form. Used to evaluate f(Ax) from a problem that only stores f*.
  [[nodiscard]] bool has_conjugate_value() const { return static_cast<bool>(conjugate_value_); }
  [[nodiscard]] double conjugate_value(const Vec& z) const;

  [[nodiscard]] const std::optional<BoxQuadratic>& box_quadratic() const { return structure_; }

 private:
  std::string name_;
  Index dim_;
  ProxFn prox_;
  ValueFn value_;
  double strong_convexity_;
  ValueFn conjugate_value_;
  std::optional<BoxQuadratic> structure_;
};

/// Convex function with an L-Lipschitz gradient.
class SmoothFunction {
 public:
  using ValueFn = std::function<double(const Vec& x)>;
  using GradFn = std::function<Vec(const Vec& x)>;

  SmoothFunction(std::string name, Index dim, ValueFn value, GradFn gradient, double lipschitz,
                 double strong_convexity = 0.0);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] Index dim() const { return dim_; }
  [[nodiscard]] double lipschitz() const { return lipschitz_; }
  [[nodiscard]] double strong_convexity() const { return strong_convexity_; }

  [[nodiscard]] double value(const Vec& x) const;
  [[nodiscard]] Vec gradient(const Vec& x) const;

 private:
  std::string name_;
  Index dim_;
  ValueFn value_;
  GradFn gradient_;
  double lipschitz_;
  double strong_convexity_;
};

// Elementwise proximal maps --------------------------------------------------

/// sgn(z_i) * max(|z_i| - lambda, 0).
Vec soft_threshold(const Vec& z, double lambda);

/// Prox of eta * (lambda1*beta*|x|_1 + lambda1*(1-beta)/2*|x|^2).
Vec prox_elastic_net_g(const Vec& z, double eta, double lambda1, double beta);

/// Prox of eta * (iota_{|.|_inf <= lambda2} + |.|^2 / (2*lambda2*lambda3)):
/// scale by 1/(1 + eta/(lambda2*lambda3)), then clip to [-lambda2, lambda2].
Vec prox_huber_conjugate(const Vec& z, double eta, double lambda2, double lambda3);

/// Projection onto the l_inf ball of radius lambda (independent of eta).
Vec prox_linf_ball(const Vec& z, double eta, double lambda);

Vec prox_nonneg(const Vec& z, double eta);

/// max(z, 0) / (1 + eta*mu).
Vec prox_nonneg_plus_l2(const Vec& z, double eta, double mu);

/// Sum over coordinates of min_u |t - u| + lambda3/2 u^2 (the Huber function).
/// lambda3 = +inf gives |t|_1.
double huber_value(const Vec& t, double lambda3);

// Catalog ---------------------------------------------------------------------

ProxFunction zero_function(Index dim);
/// Indicator of {0}; conjugate of the zero function.
ProxFunction zero_indicator(Index dim);
ProxFunction l1_norm(Index dim, double lambda);
ProxFunction linf_ball(Index dim, double radius);
ProxFunction elastic_net(Index dim, double lambda1, double beta);
/// lambda2 * J with J the Huber envelope of |.|_1 with parameter lambda3.
ProxFunction huber(Index dim, double lambda2, double lambda3);
/// Conjugate of huber(dim, lambda2, lambda3).
ProxFunction huber_conjugate(Index dim, double lambda2, double lambda3);
ProxFunction nonneg_indicator(Index dim);
ProxFunction nonneg_plus_l2(Index dim, double mu);

SmoothFunction zero_smooth(Index dim);

/// 1/2 |W x - b|^2 with L = operator_norm_bound(W)^2.
SmoothFunction least_squares(const LinearOperator& w, const Vec& b);

/// lambda2 * J(F x); gradient F^T (lambda2 * clip(lambda3 * F x, -1, 1)).
SmoothFunction huber_composite(const LinearOperator& f, double lambda2, double lambda3);

SmoothFunction sum(const SmoothFunction& a, const SmoothFunction& b);

/// |prox_{eta f}(z) + eta * prox_{f*/eta}(z/eta) - z|, zero for a true
/// conjugate pair.
double moreau_check(const ProxFunction& p, const ProxFunction& p_conj, const Vec& z, double eta);

}  // namespace acv

#include "acv/functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace acv {

namespace {

bool outside(double t, double lower, double upper) {
  return t < lower - kFeasibilityTol * std::max(1.0, std::abs(lower)) ||
         t > upper + kFeasibilityTol * std::max(1.0, std::abs(upper));
}

double box_quadratic_value(const Vec& z, const BoxQuadratic& s) {
  for (Index i = 0; i < z.size(); ++i)
    if (outside(z[i], s.lower, s.upper)) return kInf;
  return s.quadratic == 0.0 ? 0.0 : 0.5 * s.quadratic * z.squaredNorm();
}

void check_eta(double eta) {
  if (!(eta > 0.0)) throw UsageError("prox: step eta must be positive");
}

}  // namespace

ProxFunction::ProxFunction(std::string name, Index dim, ProxFn prox, ValueFn value,
                           double strong_convexity, ValueFn conjugate_value,
                           std::optional<BoxQuadratic> structure)
    : name_(std::move(name)),
      dim_(dim),
      prox_(std::move(prox)),
      value_(std::move(value)),
      strong_convexity_(strong_convexity),
      conjugate_value_(std::move(conjugate_value)),
      structure_(structure) {
  require(dim > 0, "ProxFunction: dimension must be positive");
  require(strong_convexity >= 0.0, "ProxFunction: strong convexity must be non-negative");
}

Vec ProxFunction::prox(const Vec& z, double eta) const {
  if (z.size() != dim_)
    throw DimensionError(name_ + ".prox: expected length " + std::to_string(dim_) + ", got " +
                         std::to_string(z.size()));
  check_eta(eta);
  return prox_(z, eta);
}

double ProxFunction::value(const Vec& z) const {
  if (z.size() != dim_)
    throw DimensionError(name_ + ".value: expected length " + std::to_string(dim_));
  return value_(z);
}

double ProxFunction::conjugate_value(const Vec& z) const {
  if (!conjugate_value_) throw UsageError(name_ + ": conjugate value is not available");
  if (z.size() != dim_)
    throw DimensionError(name_ + ".conjugate_value: expected length " + std::to_string(dim_));
  return conjugate_value_(z);
}

SmoothFunction::SmoothFunction(std::string name, Index dim, ValueFn value, GradFn gradient,
                               double lipschitz, double strong_convexity)
    : name_(std::move(name)),
      dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      lipschitz_(lipschitz),
      strong_convexity_(strong_convexity) {
  require(dim > 0, "SmoothFunction: dimension must be positive");
  require(lipschitz >= 0.0, "SmoothFunction: Lipschitz constant must be non-negative");
}

double SmoothFunction::value(const Vec& x) const {
  if (x.size() != dim_) throw DimensionError(name_ + ".value: dimension mismatch");
  return value_(x);
}

Vec SmoothFunction::gradient(const Vec& x) const {
  if (x.size() != dim_) throw DimensionError(name_ + ".gradient: dimension mismatch");
  return gradient_(x);
}

// ---------------------------------------------------------------------------

Vec soft_threshold(const Vec& z, double lambda) {
  require(lambda >= 0.0, "soft_threshold: lambda must be non-negative");
  return z.unaryExpr([lambda](double t) {
    const double m = std::abs(t) - lambda;
    return m > 0.0 ? std::copysign(m, t) : 0.0;
  });
}

Vec prox_elastic_net_g(const Vec& z, double eta, double lambda1, double beta) {
  check_eta(eta);
  require(lambda1 >= 0.0 && beta >= 0.0 && beta <= 1.0,
          "prox_elastic_net_g: need lambda1 >= 0 and beta in [0, 1]");
  const double shrink = 1.0 + eta * lambda1 * (1.0 - beta);
  return soft_threshold(z / shrink, eta * lambda1 * beta / shrink);
}

Vec prox_huber_conjugate(const Vec& z, double eta, double lambda2, double lambda3) {
  check_eta(eta);
  require(lambda2 > 0.0 && lambda3 > 0.0, "prox_huber_conjugate: lambda2, lambda3 must be positive");
  const double scale = 1.0 + eta / (lambda2 * lambda3);
  return z.unaryExpr([=](double t) { return t == 0.0 ? 0.0 : std::clamp(t / scale, -lambda2, lambda2); });
}

Vec prox_linf_ball(const Vec& z, double /*eta*/, double lambda) {
  require(lambda >= 0.0, "prox_linf_ball: radius must be non-negative");
  return z.cwiseMax(-lambda).cwiseMin(lambda);
}

Vec prox_nonneg(const Vec& z, double /*eta*/) { return z.cwiseMax(0.0); }

Vec prox_nonneg_plus_l2(const Vec& z, double eta, double mu) {
  check_eta(eta);
  require(mu >= 0.0, "prox_nonneg_plus_l2: mu must be non-negative");
  return z.cwiseMax(0.0) / (1.0 + eta * mu);
}

double huber_value(const Vec& t, double lambda3) {
  if (std::isinf(lambda3)) return t.lpNorm<1>();
  require(lambda3 > 0.0, "huber_value: lambda3 must be positive");
  const double knee = 1.0 / lambda3;
  double total = 0.0;
  for (Index i = 0; i < t.size(); ++i) {
    const double a = std::abs(t[i]);
    total += a <= knee ? 0.5 * lambda3 * a * a : a - 0.5 * knee;
  }
  return total;
}

// ---------------------------------------------------------------------------

ProxFunction zero_function(Index dim) {
  return {"zero",
          dim,
          [](const Vec& z, double) { return z; },
          [](const Vec&) { return 0.0; },
          0.0,
          [](const Vec& z) { return box_quadratic_value(z, {0.0, 0.0, 0.0}); },
          BoxQuadratic{}};
}

ProxFunction zero_indicator(Index dim) {
  const BoxQuadratic box{0.0, 0.0, 0.0};
  return {"zero_indicator",
          dim,
          [](const Vec& z, double) { return Vec::Zero(z.size()).eval(); },
          [box](const Vec& z) { return box_quadratic_value(z, box); },
          0.0,
          [](const Vec&) { return 0.0; },
          box};
}

ProxFunction l1_norm(Index dim, double lambda) {
  require(lambda >= 0.0, "l1_norm: lambda must be non-negative");
  const BoxQuadratic dual_box{-lambda, lambda, 0.0};
  return {"l1",
          dim,
          [lambda](const Vec& z, double eta) { return soft_threshold(z, eta * lambda); },
          [lambda](const Vec& z) { return lambda * z.lpNorm<1>(); },
          0.0,
          [dual_box](const Vec& z) { return box_quadratic_value(z, dual_box); }};
}

ProxFunction linf_ball(Index dim, double radius) {
  require(radius >= 0.0, "linf_ball: radius must be non-negative");
  const BoxQuadratic box{-radius, radius, 0.0};
  return {"linf_ball",
          dim,
          [radius](const Vec& z, double eta) { return prox_linf_ball(z, eta, radius); },
          [box](const Vec& z) { return box_quadratic_value(z, box); },
          0.0,
          [radius](const Vec& z) { return radius * z.lpNorm<1>(); },
          box};
}

ProxFunction elastic_net(Index dim, double lambda1, double beta) {
  require(lambda1 >= 0.0 && beta >= 0.0 && beta <= 1.0,
          "elastic_net: need lambda1 >= 0 and beta in [0, 1]");
  const double a = lambda1 * beta;
  const double c = lambda1 * (1.0 - beta);
  return {"elastic_net",
          dim,
          [lambda1, beta](const Vec& z, double eta) { return prox_elastic_net_g(z, eta, lambda1, beta); },
          [a, c](const Vec& x) { return a * x.lpNorm<1>() + 0.5 * c * x.squaredNorm(); },
          c,
          [a, c](const Vec& y) {
            if (c == 0.0) return box_quadratic_value(y, {-a, a, 0.0});
            double total = 0.0;
            for (Index i = 0; i < y.size(); ++i) {
              const double m = std::max(std::abs(y[i]) - a, 0.0);
              total += m * m / (2.0 * c);
            }
            return total;
          }};
}

ProxFunction huber(Index dim, double lambda2, double lambda3) {
  require(lambda2 >= 0.0 && lambda3 > 0.0 && std::isfinite(lambda3),
          "huber: need lambda2 >= 0 and finite lambda3 > 0");
  const double kq = lambda2 * lambda3;
  return {"huber",
          dim,
          [lambda2, lambda3, kq](const Vec& z, double eta) {
            const double knee = (1.0 + eta * kq) / lambda3;
            return z.unaryExpr([=](double t) {
                      return std::abs(t) <= knee ? t / (1.0 + eta * kq)
                                                 : t - std::copysign(eta * lambda2, t);
                    })
                .eval();
          },
          [lambda2, lambda3](const Vec& z) { return lambda2 * huber_value(z, lambda3); },
          0.0,
          [lambda2, lambda3](const Vec& y) {
            if (lambda2 == 0.0) return box_quadratic_value(y, {0.0, 0.0, 0.0});
            return box_quadratic_value(y, {-lambda2, lambda2, 1.0 / (lambda2 * lambda3)});
          }};
}

ProxFunction huber_conjugate(Index dim, double lambda2, double lambda3) {
  require(lambda2 > 0.0 && lambda3 > 0.0 && std::isfinite(lambda3),
          "huber_conjugate: need lambda2 > 0 and finite lambda3 > 0");
  const BoxQuadratic box{-lambda2, lambda2, 1.0 / (lambda2 * lambda3)};
  return {"huber_conjugate",
          dim,
          [lambda2, lambda3](const Vec& z, double eta) {
            return prox_huber_conjugate(z, eta, lambda2, lambda3);
          },
          [box](const Vec& y) { return box_quadratic_value(y, box); },
          1.0 / (lambda2 * lambda3),
          [lambda2, lambda3](const Vec& z) { return lambda2 * huber_value(z, lambda3); },
          box};
}

ProxFunction nonneg_indicator(Index dim) {
  const BoxQuadratic box{0.0, kInf, 0.0};
  return {"nonneg",
          dim,
          [](const Vec& z, double eta) { return prox_nonneg(z, eta); },
          [box](const Vec& z) { return box_quadratic_value(z, box); },
          0.0,
          [](const Vec& y) { return box_quadratic_value(y, {-kInf, 0.0, 0.0}); },
          box};
}

ProxFunction nonneg_plus_l2(Index dim, double mu) {
  require(mu >= 0.0, "nonneg_plus_l2: mu must be non-negative");
  if (mu == 0.0) return nonneg_indicator(dim);
  const BoxQuadratic box{0.0, kInf, mu};
  return {"nonneg_plus_l2",
          dim,
          [mu](const Vec& z, double eta) { return prox_nonneg_plus_l2(z, eta, mu); },
          [box](const Vec& z) { return box_quadratic_value(z, box); },
          mu,
          [mu](const Vec& y) { return y.cwiseMax(0.0).squaredNorm() / (2.0 * mu); },
          box};
}

SmoothFunction zero_smooth(Index dim) {
  return {"zero", dim, [](const Vec&) { return 0.0; },
          [](const Vec& x) { return Vec::Zero(x.size()).eval(); }, 0.0};
}

SmoothFunction least_squares(const LinearOperator& w, const Vec& b) {
  if (b.size() != w.out_dim())
    throw DimensionError("least_squares: label length does not match operator rows");
  const double norm = operator_norm_bound(w);
  auto op = std::make_shared<const LinearOperator>(w);
  auto rhs = std::make_shared<const Vec>(b);
  return {"least_squares", w.in_dim(),
          [op, rhs](const Vec& x) { return 0.5 * (op->apply(x) - *rhs).squaredNorm(); },
          [op, rhs](const Vec& x) { return op->apply_adjoint(op->apply(x) - *rhs); },
          norm * norm};
}

SmoothFunction huber_composite(const LinearOperator& f, double lambda2, double lambda3) {
  require(lambda2 >= 0.0 && lambda3 > 0.0 && std::isfinite(lambda3),
          "huber_composite: need lambda2 >= 0 and finite lambda3 > 0");
  const double norm = operator_norm_bound(f);
  auto op = std::make_shared<const LinearOperator>(f);
  return {"huber_composite", f.in_dim(),
          [op, lambda2, lambda3](const Vec& x) { return lambda2 * huber_value(op->apply(x), lambda3); },
          [op, lambda2, lambda3](const Vec& x) {
            const Vec t = op->apply(x);
            const Vec slope = (lambda3 * t).cwiseMax(-1.0).cwiseMin(1.0);
            return (lambda2 * op->apply_adjoint(slope)).eval();
          },
          lambda2 * lambda3 * norm * norm};
}

SmoothFunction sum(const SmoothFunction& a, const SmoothFunction& b) {
  if (a.dim() != b.dim()) throw DimensionError("sum: smooth functions differ in dimension");
  return {a.name() + "+" + b.name(), a.dim(),
          [a, b](const Vec& x) { return a.value(x) + b.value(x); },
          [a, b](const Vec& x) { return (a.gradient(x) + b.gradient(x)).eval(); },
          a.lipschitz() + b.lipschitz(), a.strong_convexity() + b.strong_convexity()};
}

double moreau_check(const ProxFunction& p, const ProxFunction& p_conj, const Vec& z, double eta) {
  return (p.prox(z, eta) + eta * p_conj.prox(z / eta, 1.0 / eta) - z).norm();
}

}  // namespace acv

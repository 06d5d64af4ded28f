#include "acv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace acv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Point of the family t -> point_at(t) (t >= 0, distance to c non-increasing
// in t) that solves the ball-constrained problem: t = 0 if that is already
// inside the ball, else the smallest t found by bisection that lands inside.
template <class PointAt>
Vec ball_multiplier_search(const PointAt& point_at, const Vec& c, double r) {
  Vec p = point_at(0.0);
  if (all_finite(p) && (p - c).norm() <= r) return p;
  double lo = 0.0;
  double hi = 1.0;
  Vec ph = point_at(hi);
  for (int i = 0; i < 1100 && !(all_finite(ph) && (ph - c).norm() <= r); ++i) {
    lo = hi;
    hi *= 2.0;
    ph = point_at(hi);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    Vec pm = point_at(mid);
    if (all_finite(pm) && (pm - c).norm() <= r) {
      hi = mid;
      ph = std::move(pm);
    } else {
      lo = mid;
    }
  }
  const double d = (ph - c).norm();
  if (d > r) ph = c + (r / d) * (ph - c);
  return ph;
}

// max_{|y' - c| <= r} <z, y'> - f*(y') for f* = box indicator + q/2 |.|^2.
double dual_max_box_quadratic(const Vec& z, const BoxQuadratic& s, const Vec& c, double r) {
  auto point_at = [&](double nu) {
    Vec out(z.size());
    for (Index i = 0; i < z.size(); ++i) {
      const double denom = s.quadratic + nu;
      double t;
      if (denom > 0.0) {
        t = (z[i] + nu * c[i]) / denom;
      } else if (z[i] > 0.0) {
        t = s.upper;
      } else if (z[i] < 0.0) {
        t = s.lower;
      } else {
        t = c[i];
      }
      out[i] = std::clamp(t, s.lower, s.upper);
    }
    return out;
  };
  const Vec y = ball_multiplier_search(point_at, c, r);
  return z.dot(y) - 0.5 * s.quadratic * y.squaredNorm();
}

double dual_max_probe(const ProxFunction& f_conj, const Vec& z, const Vec& c, double r, int n_probe,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double best = kNegInf;
  auto consider = [&](const Vec& cand) {
    const double fv = f_conj.value(cand);
    if (std::isfinite(fv)) best = std::max(best, z.dot(cand) - fv);
  };
  consider(c);
  if (z.norm() > 0.0) consider(c + (r / z.norm()) * z);
  for (int i = 0; i < n_probe; ++i) {
    Vec d(z.size());
    for (Index j = 0; j < d.size(); ++j) d[j] = normal(rng);
    consider(c + (r / d.norm()) * d);
  }
  return best;
}

// min_{|x' - c| <= r} <x', s> + g(x') + h(x') by FISTA with function-value
// restarts, starting from the projection of start onto the ball.
double primal_min(const SaddleProblem& p, const Vec& s, const Vec& c, double r, const Vec& start) {
  const double eta = p.L > 0.0 ? 1.0 / p.L : 1e6;
  auto objective = [&](const Vec& x) { return x.dot(s) + p.g.value(x) + p.h.value(x); };
  auto prox_ball = [&](const Vec& z) {
    return ball_multiplier_search(
        [&](double nu) { return p.g.prox((z + nu * c) / (1.0 + nu), eta / (1.0 + nu)); }, c, r);
  };
  Vec x = start;
  const double d0 = (x - c).norm();
  if (d0 > r) x = c + (r / d0) * (x - c);
  x = prox_ball(x - eta * (s + p.h.gradient(x)));
  double fx = objective(x);
  double best = fx;
  Vec yk = x;
  double t = 1.0;
  for (int it = 0; it < 20000; ++it) {
    const Vec x_next = prox_ball(yk - eta * (s + p.h.gradient(yk)));
    const double f_next = objective(x_next);
    best = std::min(best, f_next);
    const double step = (x_next - x).norm();
    if (f_next > fx) {
      t = 1.0;
      yk = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    yk = x_next + ((t - 1.0) / t_next) * (x_next - x);
    t = t_next;
    x = x_next;
    fx = f_next;
    if (step <= 1e-8 * (1.0 + x.norm())) break;
  }
  return best;
}

}  // namespace

double lagrangian(const SaddleProblem& p, const Vec& x, const Vec& y) {
  const double fs = p.f_conj.value(y);
  if (std::isinf(fs)) return kNegInf;
  const double gx = p.g.value(x);
  if (std::isinf(gx)) return kInf;
  return p.A.apply(x).dot(y) - fs + gx + p.h.value(x);
}

double primal_objective(const SaddleProblem& p, const Vec& x) {
  if (!p.f_conj.has_conjugate_value())
    throw UsageError("primal_objective: " + p.f_conj.name() + " has no conjugate value");
  return p.f_conj.conjugate_value(p.A.apply(x)) + p.g.value(x) + p.h.value(x);
}

GapBox default_box(const Vec& x_ref, const Vec& y_ref, const Vec& x0, const Vec& y0) {
  if (x_ref.size() != x0.size() || y_ref.size() != y0.size())
    throw DimensionError("default_box: reference and start differ in size");
  return {x_ref, std::max(1.0, 2.0 * (x0 - x_ref).norm()), y_ref,
          std::max(1.0, 2.0 * (y0 - y_ref).norm())};
}

double pd_gap_box(const SaddleProblem& p, const Vec& x, const Vec& y, const GapBox& box, int n_probe,
                  std::uint64_t seed) {
  require(box.primal_radius > 0.0 && box.dual_radius > 0.0, "pd_gap_box: radii must be positive");
  if (box.primal_center.size() != x.size() || box.dual_center.size() != y.size())
    throw DimensionError("pd_gap_box: box centres do not match the iterate sizes");
  const double gx = p.g.value(x);
  const double fy = p.f_conj.value(y);
  if (std::isinf(gx) || std::isinf(fy)) return kInf;

  const Vec z = p.A.apply(x);
  double dual_max = p.f_conj.box_quadratic()
                        ? dual_max_box_quadratic(z, *p.f_conj.box_quadratic(), box.dual_center, box.dual_radius)
                        : dual_max_probe(p.f_conj, z, box.dual_center, box.dual_radius, n_probe, seed);
  if ((y - box.dual_center).norm() <= box.dual_radius) dual_max = std::max(dual_max, z.dot(y) - fy);

  const Vec s = p.A.apply_adjoint(y);
  double primal = primal_min(p, s, box.primal_center, box.primal_radius, x);
  if ((x - box.primal_center).norm() <= box.primal_radius)
    primal = std::min(primal, x.dot(s) + gx + p.h.value(x));

  return (gx + p.h.value(x) + dual_max) - (primal - fy);
}

double gap_vs_reference(double value, double reference, bool* clamped) {
  const double diff = value - reference;
  if (clamped) *clamped = diff < -1e-12 * std::max(1.0, std::abs(reference));
  return std::max(diff, 0.0);
}

void ConvergenceRecord::append(const ConvergenceRow& row) {
  if (!rows.empty() && row.k <= rows.back().k)
    throw UsageError("ConvergenceRecord: k must be strictly increasing");
  rows.push_back(row);
}

std::vector<double> best_so_far(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    best = std::min(best, values[i]);
    out[i] = best;
  }
  return out;
}

namespace {

struct Window {
  std::vector<double> k;
  std::vector<double> gap;
};

Window envelope_window(const std::vector<Index>& k, const std::vector<double>& gap, Index k_lo, Index k_hi) {
  if (k.size() != gap.size()) throw DimensionError("rate fit: k and gap differ in length");
  require(k_lo < k_hi, "rate fit: need k_lo < k_hi");
  const std::vector<double> env = best_so_far(gap);
  Window w;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < k_lo || k[i] > k_hi) continue;
    if (!(env[i] > 0.0))
      throw UsageError("rate fit: non-positive gap at k=" + std::to_string(k[i]));
    w.k.push_back(static_cast<double>(k[i]));
    w.gap.push_back(env[i]);
  }
  require(w.k.size() >= 2, "rate fit: fewer than two points in the window");
  return w;
}

double ls_slope(const std::vector<double>& t, const std::vector<double>& v) {
  const double n = static_cast<double>(t.size());
  double mt = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    mv += v[i];
  }
  mt /= n;
  mv /= n;
  double stv = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stv += (t[i] - mt) * (v[i] - mv);
    stt += (t[i] - mt) * (t[i] - mt);
  }
  return stv / stt;
}

void gap_column(const ConvergenceRecord& r, std::vector<Index>& k, std::vector<double>& gap) {
  for (const auto& row : r.rows) {
    if (!row.gap_ref) throw UsageError("rate fit: record has rows without a reference gap");
    k.push_back(row.k);
    gap.push_back(*row.gap_ref);
  }
}

}  // namespace

double fit_rate_slope(const std::vector<Index>& k, const std::vector<double>& gap, Index k_lo, Index k_hi) {
  Window w = envelope_window(k, gap, k_lo, k_hi);
  for (auto& t : w.k) t = std::log(t);
  for (auto& g : w.gap) g = std::log(g);
  return ls_slope(w.k, w.gap);
}

double fit_rate_slope(const ConvergenceRecord& record, Index k_lo, Index k_hi) {
  std::vector<Index> k;
  std::vector<double> gap;
  gap_column(record, k, gap);
  return fit_rate_slope(k, gap, k_lo, k_hi);
}

double fit_linear_rate(const std::vector<Index>& k, const std::vector<double>& gap, Index k_lo, Index k_hi) {
  Window w = envelope_window(k, gap, k_lo, k_hi);
  for (auto& g : w.gap) g = std::log(g);
  return std::exp(ls_slope(w.k, w.gap));
}

double fit_linear_rate(const ConvergenceRecord& record, Index k_lo, Index k_hi) {
  std::vector<Index> k;
  std::vector<double> gap;
  gap_column(record, k, gap);
  return fit_linear_rate(k, gap, k_lo, k_hi);
}

Recorder::Recorder(const SaddleProblem& p, RecordOptions options)
    : problem_(&p), options_(std::move(options)) {
  require(options_.log_every >= 1, "Recorder: log_every must be at least 1");
}

StepObserver Recorder::observer() {
  return [this](const SolverState& s, double seconds) { observe(s, seconds); };
}

void Recorder::observe(const SolverState& s, double step_seconds) {
  elapsed_ += step_seconds;
  if (s.k % options_.log_every != 0) return;
  ConvergenceRow row;
  row.k = s.k;
  row.wall_time_s = elapsed_;
  row.objective = primal_objective(*problem_, s.v);
  if (options_.reference_objective) {
    bool clamped = false;
    row.gap_ref = gap_vs_reference(row.objective, *options_.reference_objective, &clamped);
    if (clamped) ++clamped_;
  }
  if (options_.gap_box)
    row.pd_gap = pd_gap_box(*problem_, s.v, s.w, *options_.gap_box, options_.n_probe, options_.seed);
  row.iterate_norm = s.v.norm();
  record_.append(row);
}

}  // namespace acv

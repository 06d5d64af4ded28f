#include "acv/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace acv {

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::General: return "general";
    case Regime::StronglyConvexPrimal: return "strongly-convex-primal";
    case Regime::StronglyConvexDual: return "strongly-convex-dual";
    case Regime::StronglyConvexSmooth: return "strongly-convex-smooth";
    case Regime::CondatVuBaseline: return "condat-vu";
    case Regime::Custom: return "custom";
  }
  return "unknown";
}

ParamSchedule::ParamSchedule(Regime regime, Rule rule, std::optional<Index> warmup_T0)
    : regime_(regime), rule_(std::move(rule)), warmup_T0_(warmup_T0) {
  require(static_cast<bool>(rule_), "ParamSchedule: rule is required");
  require(!warmup_T0_ || *warmup_T0_ >= 0, "ParamSchedule: warm-up length must be non-negative");
}

ParamSchedule ParamSchedule::constant(Regime regime, StepParams p) {
  return {regime, [p](Index) { return p; }};
}

StepParams ParamSchedule::at(Index k) const {
  require(k >= 0, "ParamSchedule: negative iteration index");
  return rule_(k);
}

// Builders --------------------------------------------------------------------

ParamSchedule schedule_general(double L, double opnorm_A) {
  require(L >= 0.0 && opnorm_A >= 0.0, "schedule_general: L and |A| must be non-negative");
  require(L > 0.0 || opnorm_A > 0.0, "schedule_general: L and |A| cannot both be zero");
  const double c = std::sqrt(2.0) * opnorm_A;
  auto gamma = [c, L](Index k) {
    const double k1 = static_cast<double>(k) + 1.0;
    return k1 / (c * k1 + 4.0 * L);
  };
  return {Regime::General, [gamma](Index k) {
            const double g = gamma(k);
            return StepParams{g, g, 1.0 / (static_cast<double>(k) / 2.0 + 1.0),
                              k == 0 ? 1.0 : gamma(k - 1) / g};
          }};
}

WarmupLength compute_T0(double L, double mu_g, double opnorm_A) {
  require(mu_g > 0.0, "compute_T0: mu_g must be positive");
  require(L > 0.0, "compute_T0: L must be positive");
  require(opnorm_A >= 0.0, "compute_T0: |A| must be non-negative");
  WarmupLength out;
  double a = opnorm_A;
  if (a < kNormFloor) {
    a = kNormFloor;
    out.norm_floored = true;
  }
  const double tail = std::max(std::log(5.0 * L / (2.0 * a * a)), 0.0) /
                      std::log1p(std::sqrt(mu_g / (4.0 * L)));
  out.T0 = static_cast<Index>(std::floor(std::sqrt(L / mu_g) + tail));
  return out;
}

ParamSchedule schedule_sc_primal(double L, double mu_g, double opnorm_A, bool paper_literal) {
  require(L > 0.0 && mu_g > 0.0 && opnorm_A > 0.0,
          "schedule_sc_primal: L, mu_g and |A| must be positive");
  require(mu_g <= 4.0 * L, "schedule_sc_primal: need mu_g <= 4L so that alpha stays in (0, 1]");
  const Index T0 = std::max<Index>(1, compute_T0(L, mu_g, opnorm_A).T0);
  const double a2 = opnorm_A * opnorm_A;
  const double alpha0 = std::sqrt(mu_g / (4.0 * L));
  StepParams warm;
  warm.gamma = std::sqrt(mu_g * L) / (2.0 * a2);
  warm.tau = 1.0 / std::sqrt(mu_g * L);
  warm.alpha = alpha0;
  warm.theta = 1.0 / (1.0 + alpha0);
  const double offset = paper_literal ? 4.0 * std::sqrt(mu_g / L) : 4.0 * std::sqrt(L / mu_g);
  auto gamma = [=](Index j) { return mu_g * (static_cast<double>(j) + offset) / (8.0 * a2); };
  return {Regime::StronglyConvexPrimal,
          [=](Index k) {
            if (k < T0) return warm;
            const Index j = k - T0;
            const double g = gamma(j);
            return StepParams{g, 1.0 / (2.0 * a2 * g), mu_g / (4.0 * a2 * g),
                              j == 0 ? 1.0 : gamma(j - 1) / g};
          },
          T0};
}

ParamSchedule schedule_sc_dual(double L, double mu_fstar, double opnorm_A, bool paper_literal) {
  const ParamSchedule primal = schedule_sc_primal(L, mu_fstar, opnorm_A, paper_literal);
  return {Regime::StronglyConvexDual,
          [primal](Index k) {
            StepParams p = primal.at(k);
            std::swap(p.gamma, p.tau);
            return p;
          },
          primal.warmup_T0()};
}

ParamSchedule schedule_sc_smooth(double L, double mu_g, double mu_fstar, double opnorm_A) {
  require(mu_g > 0.0 && mu_fstar > 0.0, "schedule_sc_smooth: mu_g and mu_fstar must be positive");
  require(L >= 0.0 && opnorm_A >= 0.0, "schedule_sc_smooth: L and |A| must be non-negative");
  const double lbar = opnorm_A * opnorm_A / mu_fstar + L;
  require(lbar > 0.0, "schedule_sc_smooth: L and |A| cannot both be zero");
  require(mu_g <= lbar, "schedule_sc_smooth: need mu_g <= |A|^2/mu_fstar + L so that alpha <= 1");
  StepParams p;
  p.gamma = std::sqrt(mu_g / (mu_fstar * mu_fstar * lbar));
  p.tau = 1.0 / std::sqrt(lbar * mu_g);
  p.alpha = std::sqrt(mu_g / lbar);
  p.theta = 1.0 / (1.0 + p.alpha);
  return ParamSchedule::constant(Regime::StronglyConvexSmooth, p);
}

ParamSchedule condat_vu_book_params(double L, double opnorm_A) {
  require(L >= 0.0 && opnorm_A >= 0.0, "condat_vu_book_params: L and |A| must be non-negative");
  require(L > 0.0 || opnorm_A > 0.0, "condat_vu_book_params: L and |A| cannot both be zero");
  StepParams p;
  if (opnorm_A == 0.0) {
    p.tau = 1.0 / L;
    p.gamma = 1.0;
  } else {
    p.tau = 1.0 / (L + 2.0 * opnorm_A);
    p.gamma = (1.0 - L * p.tau) / (p.tau * opnorm_A * opnorm_A);
  }
  return ParamSchedule::constant(Regime::CondatVuBaseline, p);
}

ParamSchedule condat_vu_params(double gamma, double tau) {
  require(gamma > 0.0 && tau > 0.0, "condat_vu_params: steps must be positive");
  return ParamSchedule::constant(Regime::CondatVuBaseline, {gamma, tau, 1.0, 1.0});
}

ParamSchedule pdhg_params(double opnorm_A) {
  require(opnorm_A > 0.0, "pdhg_params: |A| must be positive");
  return ParamSchedule::constant(Regime::CondatVuBaseline,
                                 {1.0 / opnorm_A, 1.0 / opnorm_A, 1.0, 1.0});
}

// Validation ------------------------------------------------------------------

namespace {

double slack(double lhs, double rhs) {
  return kValidationSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void leq(ConstraintResult& c, Index k, double lhs, double rhs) {
  ++c.checked;
  if (lhs <= rhs + slack(lhs, rhs)) return;
  if (!c.first_violation) c.first_violation = k;
  const double excess = std::isnan(lhs - rhs) ? std::numeric_limits<double>::infinity() : lhs - rhs;
  c.worst_excess = std::max(c.worst_excess, excess);
}

void eq(ConstraintResult& c, Index k, double lhs, double rhs) {
  ++c.checked;
  if (std::abs(lhs - rhs) <= slack(lhs, rhs)) return;
  if (!c.first_violation) c.first_violation = k;
  const double excess = std::isnan(lhs - rhs) ? std::numeric_limits<double>::infinity() : std::abs(lhs - rhs);
  c.worst_excess = std::max(c.worst_excess, excess);
}

void in_unit_interval(ConstraintResult& c, Index k, double alpha) {
  ++c.checked;
  if (alpha > 0.0 && alpha <= 1.0 + kValidationSlack) return;
  if (!c.first_violation) c.first_violation = k;
  c.worst_excess = std::max(c.worst_excess, alpha > 1.0 ? alpha - 1.0 : -alpha);
}

void positive(ConstraintResult& c, Index k, const StepParams& p) {
  ++c.checked;
  if (p.gamma > 0.0 && p.tau > 0.0 && p.theta >= 0.0 && std::isfinite(p.gamma) &&
      std::isfinite(p.tau) && std::isfinite(p.theta))
    return;
  if (!c.first_violation) c.first_violation = k;
}

std::vector<StepParams> sample(const ParamSchedule& s, Index k_max) {
  require(k_max >= 0, "validate: horizon must be non-negative");
  std::vector<StepParams> out(static_cast<std::size_t>(k_max) + 2);
  for (Index k = 0; k <= k_max + 1; ++k) out[static_cast<std::size_t>(k)] = s.at(k);
  return out;
}

// Two-phase check shared by the primal and dual strongly convex regimes. For
// the dual regime the roles of gamma and tau are exchanged; "lead" is the step
// that drives the telescoping (gamma for primal, tau for dual).
ValidationReport validate_two_phase(const ParamSchedule& s, double L, double mu, double opnorm_A,
                                    Index k_max, bool dual) {
  const std::string a = dual ? "tau" : "gamma";
  const std::string b = dual ? "gamma" : "tau";
  const std::string mu_name = dual ? "mu_fstar" : "mu_g";
  const double a2 = opnorm_A * opnorm_A;
  const Index T0 = s.warmup_T0().value_or(0);
  const auto ps = sample(s, k_max);
  auto lead = [&](const StepParams& p) { return dual ? p.tau : p.gamma; };
  auto other = [&](const StepParams& p) { return dual ? p.gamma : p.tau; };

  ValidationReport r;
  r.constraints = {
      {"alpha_k in (0,1]"},
      {"gamma_k, tau_k > 0 and theta_k >= 0"},
      {"warm-up: parameters constant"},
      {"warm-up: 1/theta <= (1 - L alpha " + b + ")/(gamma tau theta^2 |A|^2)"},
      {"warm-up: 1/theta <= 1/(1 - alpha)"},
      {"warm-up: 1/theta <= 1 + " + mu_name + " " + b},
      {"steady: " + a + "_{k+1}(1-alpha_{k+1})/alpha_{k+1} <= " + a + "_k/alpha_k"},
      {"steady: " + a + "_{k+1}/" + b + "_{k+1} <= " + a + "_k(1 + " + mu_name + " " + b + "_k)/" + b +
       "_k"},
      {"steady: |A|^2/2 + L alpha_k/(2 " + a + "_k) <= 1/(2 gamma_k tau_k)"},
      {"steady: theta = 1 at restart, else " + a + "_{k-1}/" + a + "_k"},
  };
  auto& c = r.constraints;
  Index coupling_bad = 0;
  std::optional<Index> coupling_first;

  for (Index k = 0; k <= k_max; ++k) {
    const StepParams& p = ps[static_cast<std::size_t>(k)];
    const StepParams& q = ps[static_cast<std::size_t>(k) + 1];
    in_unit_interval(c[0], k, p.alpha);
    positive(c[1], k, p);
    if (k < T0) {
      const StepParams& p0 = ps[0];
      eq(c[2], k, p.gamma, p0.gamma);
      eq(c[2], k, p.tau, p0.tau);
      eq(c[2], k, p.alpha, p0.alpha);
      eq(c[2], k, p.theta, p0.theta);
      // Multiplied through by the positive denominators.
      leq(c[3], k, p.gamma * p.tau * p.theta * a2, 1.0 - L * p.alpha * other(p));
      leq(c[4], k, 1.0 - p.alpha, p.theta);
      leq(c[5], k, 1.0, p.theta * (1.0 + mu * other(p)));
    }
    if (k + 1 >= T0) {
      // Includes the pair (T0 - 1, T0) that straddles the phase boundary.
      leq(c[6], k, lead(q) * (1.0 - q.alpha) / q.alpha, lead(p) / p.alpha);
      leq(c[7], k, lead(q) / other(q), lead(p) * (1.0 + mu * other(p)) / other(p));
    }
    if (k >= T0) {
      leq(c[8], k, a2 / 2.0 + L * p.alpha / (2.0 * lead(p)), 1.0 / (2.0 * p.gamma * p.tau));
      if (k == T0)
        eq(c[9], k, p.theta, 1.0);
      else
        eq(c[9], k, p.theta, lead(ps[static_cast<std::size_t>(k) - 1]) / lead(p));
    }
    if (dual) {
      const double lhs = L * p.alpha * p.tau + p.gamma * p.tau * a2;
      if (lhs > 1.0 + slack(lhs, 1.0)) {
        ++coupling_bad;
        if (!coupling_first) coupling_first = k;
      }
    }
  }
  if (dual && coupling_bad > 0) {
    std::ostringstream os;
    os << "advisory: L alpha_k tau_k + gamma_k tau_k |A|^2 <= 1 fails at " << coupling_bad
       << " indices (first k=" << *coupling_first
       << "); the dual-regime warm-up bound uses L alpha gamma in place of L alpha tau";
    r.notes.push_back(os.str());
  }
  if (T0 > k_max) r.notes.push_back("horizon ends inside the warm-up phase; steady constraints unchecked");
  return r;
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(constraints.begin(), constraints.end(), [](const auto& c) { return c.passed(); });
}

const ConstraintResult* ValidationReport::first_failure() const {
  for (const auto& c : constraints)
    if (!c.passed()) return &c;
  return nullptr;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  os.precision(6);
  for (const auto& c : constraints) {
    os << (c.passed() ? "PASS  " : "FAIL  ") << c.name;
    if (c.passed())
      os << "  (" << c.checked << " checks)";
    else
      os << "  first violation at k=" << *c.first_violation << ", worst excess " << c.worst_excess;
    os << '\n';
  }
  for (const auto& n : notes) os << "note  " << n << '\n';
  return os.str();
}

ValidationReport validate_general(const ParamSchedule& s, double L, double opnorm_A, Index k_max) {
  const double a2 = opnorm_A * opnorm_A;
  const auto ps = sample(s, k_max);
  ValidationReport r;
  r.constraints = {
      {"alpha_k in (0,1]"},
      {"gamma_k, tau_k > 0 and theta_k >= 0"},
      {"gamma_{k+1}(1-alpha_{k+1})/alpha_{k+1} <= gamma_k/alpha_k"},
      {"gamma_{k+1}/tau_{k+1} <= gamma_k/tau_k"},
      {"L alpha_k tau_k + gamma_k tau_k |A|^2 <= 1"},
      {"theta_k = gamma_{k-1}/gamma_k"},
  };
  auto& c = r.constraints;
  for (Index k = 0; k <= k_max; ++k) {
    const StepParams& p = ps[static_cast<std::size_t>(k)];
    const StepParams& q = ps[static_cast<std::size_t>(k) + 1];
    in_unit_interval(c[0], k, p.alpha);
    positive(c[1], k, p);
    leq(c[2], k, q.gamma * (1.0 - q.alpha) / q.alpha, p.gamma / p.alpha);
    leq(c[3], k, q.gamma / q.tau, p.gamma / p.tau);
    leq(c[4], k, L * p.alpha * p.tau + p.gamma * p.tau * a2, 1.0);
    if (k > 0) eq(c[5], k, p.theta, ps[static_cast<std::size_t>(k) - 1].gamma / p.gamma);
  }
  return r;
}

ValidationReport validate_sc(const ParamSchedule& s, double L, double mu_g, double opnorm_A, Index k_max) {
  return validate_two_phase(s, L, mu_g, opnorm_A, k_max, false);
}

ValidationReport validate_sc_dual(const ParamSchedule& s, double L, double mu_fstar, double opnorm_A,
                                  Index k_max) {
  return validate_two_phase(s, L, mu_fstar, opnorm_A, k_max, true);
}

ValidationReport validate_sc_smooth(const StepParams& p, double L, double mu_g, double mu_fstar,
                                    double opnorm_A) {
  ValidationReport r;
  r.constraints = {
      {"alpha in (0,1]"},
      {"gamma, tau > 0 and theta >= 0"},
      {"1/theta <= 1/(1 - alpha)"},
      {"1/theta <= 1 + mu_fstar gamma"},
      {"1/theta <= 1 + mu_g tau"},
      {"1/theta <= (1 - L alpha tau)/(gamma tau theta^2 |A|^2)"},
  };
  auto& c = r.constraints;
  in_unit_interval(c[0], 0, p.alpha);
  positive(c[1], 0, p);
  leq(c[2], 0, 1.0 - p.alpha, p.theta);
  leq(c[3], 0, 1.0, p.theta * (1.0 + mu_fstar * p.gamma));
  leq(c[4], 0, 1.0, p.theta * (1.0 + mu_g * p.tau));
  leq(c[5], 0, p.gamma * p.tau * p.theta * opnorm_A * opnorm_A, 1.0 - L * p.alpha * p.tau);
  return r;
}

ValidationReport validate_schedule(const ParamSchedule& s, const ProblemConstants& c, Index k_max) {
  switch (s.regime()) {
    case Regime::StronglyConvexPrimal: return validate_sc(s, c.L, c.mu_g, c.opnorm_A, k_max);
    case Regime::StronglyConvexDual: return validate_sc_dual(s, c.L, c.mu_fstar, c.opnorm_A, k_max);
    case Regime::StronglyConvexSmooth: {
      ValidationReport r = validate_sc_smooth(s.at(0), c.L, c.mu_g, c.mu_fstar, c.opnorm_A);
      const StepParams p0 = s.at(0);
      ConstraintResult constant{"parameters constant"};
      for (Index k = 1; k <= k_max; ++k) {
        const StepParams p = s.at(k);
        eq(constant, k, p.gamma, p0.gamma);
        eq(constant, k, p.tau, p0.tau);
        eq(constant, k, p.alpha, p0.alpha);
        eq(constant, k, p.theta, p0.theta);
      }
      r.constraints.push_back(constant);
      return r;
    }
    case Regime::General:
    case Regime::CondatVuBaseline:
    case Regime::Custom: return validate_general(s, c.L, c.opnorm_A, k_max);
  }
  return {};
}

}  // namespace acv

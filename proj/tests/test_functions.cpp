#include "acv/functions.hpp"
#include "catalog.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace acv;

using test_catalog::catalog;

TEST_CASE("every prox matches the scalar minimisation oracle") {
  std::mt19937_64 rng(11);
  for (const auto& s : catalog()) {
    CAPTURE(s.fn.name());
    for (int t = 0; t < 50; ++t) {
      const Vec z = oracle::gaussian(4, rng, 2.0);
      const double eta = std::exp(oracle::gaussian(1, rng)[0]);
      const Vec p = s.fn.prox(z, eta);
      for (Index i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(oracle::prox_1d(s.phi, z[i], eta, s.lo, s.hi)).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("values match the scalar definitions and indicators report +inf outside") {
  std::mt19937_64 rng(12);
  for (const auto& s : catalog()) {
    CAPTURE(s.fn.name());
    const Vec z = s.fn.prox(oracle::gaussian(4, rng, 2.0), 1.0);  // a feasible point
    double expect = 0.0;
    for (Index i = 0; i < 4; ++i) expect += s.phi(z[i]);
    CHECK(s.fn.value(z) == doctest::Approx(expect).epsilon(1e-12));
    if (std::isfinite(s.hi)) CHECK(s.fn.value(Vec::Constant(4, s.hi + 1.0)) == kInf);
    if (std::isfinite(s.lo)) CHECK(s.fn.value(Vec::Constant(4, s.lo - 1.0)) == kInf);
  }
}

TEST_CASE("closed-form conjugate values match the Fenchel supremum") {
  std::mt19937_64 rng(13);
  for (const auto& s : catalog()) {
    if (!s.fn.has_conjugate_value()) continue;
    CAPTURE(s.fn.name());
    const bool bounded = std::isfinite(s.lo) && std::isfinite(s.hi);
    if (!bounded && s.fn.strong_convexity() == 0.0) continue;  // supremum may be +inf
    for (int t = 0; t < 20; ++t) {
      const Vec z = oracle::gaussian(4, rng, 2.0);
      double expect = 0.0;
      for (Index i = 0; i < 4; ++i)
        expect += oracle::conjugate_1d(s.phi, z[i], std::max(s.lo, -1e3), std::min(s.hi, 1e3));
      CHECK(s.fn.conjugate_value(z) == doctest::Approx(expect).epsilon(1e-8));
    }
  }
}

TEST_CASE("Moreau identity on 1000 random points per conjugate pair") {
  std::mt19937_64 rng(14);
  struct Pair {
    ProxFunction f, f_conj;
  };
  const std::vector<Pair> pairs = {
      {zero_function(6), zero_indicator(6)},
      {l1_norm(6, 0.8), linf_ball(6, 0.8)},
      {huber(6, 0.1, 1e3), huber_conjugate(6, 0.1, 1e3)},
      {huber(6, 2.0, 0.5), huber_conjugate(6, 2.0, 0.5)},
  };
  for (const auto& p : pairs) {
    CAPTURE(p.f.name());
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Vec z = oracle::gaussian(6, rng, 3.0);
      const double eta = std::exp(2.0 * oracle::gaussian(1, rng)[0]);
      // Written out rather than through moreau_check so the two agree independently.
      const Vec r = p.f.prox(z, eta) + eta * p.f_conj.prox(z / eta, 1.0 / eta) - z;
      worst = std::max(worst, r.norm());
      CHECK(moreau_check(p.f, p.f_conj, z, eta) == doctest::Approx(r.norm()).epsilon(1e-12).scale(1.0));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("proxes are nonexpansive on 1000 random pairs") {
  std::mt19937_64 rng(15);
  for (const auto& s : catalog()) {
    CAPTURE(s.fn.name());
    for (int t = 0; t < 1000; ++t) {
      const Vec a = oracle::gaussian(4, rng, 2.0), b = oracle::gaussian(4, rng, 2.0);
      const double eta = std::exp(oracle::gaussian(1, rng)[0]);
      CHECK((s.fn.prox(a, eta) - s.fn.prox(b, eta)).norm() <= (a - b).norm() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("Huber-conjugate prox: the min-form closed formula disagrees with the oracle") {
  const double eta = 0.5, l2 = 0.1, l3 = 1e3;
  const double c = 1.0 + eta / (l2 * l3);
  auto min_form = [&](double z) { return z / c * std::min(eta * c / (std::abs(z) * l2), 1.0); };
  auto truth = [&](double z) {
    return oracle::prox_1d([&](double t) { return t * t / (2 * l2 * l3); }, z, eta, -l2, l2);
  };
  CHECK(min_form(5.0) == doctest::Approx(4.975).epsilon(1e-3));
  CHECK(truth(5.0) == doctest::Approx(0.1).epsilon(1e-9));
  const Vec z = (Vec(3) << 0.05, 5.0, -5.0).finished();
  const Vec p = prox_huber_conjugate(z, eta, l2, l3);
  for (Index i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(truth(z[i])).epsilon(1e-8).scale(1.0));
  CHECK(prox_huber_conjugate(Vec::Zero(1), eta, l2, l3)[0] == 0.0);
  // Indicator-only limit: projection onto the box.
  CHECK(prox_huber_conjugate(z, eta, l2, 1e300)[1] == doctest::Approx(0.1));
}

TEST_CASE("elastic-net prox special cases") {
  std::mt19937_64 rng(18);
  const Vec z = oracle::gaussian(6, rng);
  CHECK((prox_elastic_net_g(z, 0.3, 0.1, 1.0) - oracle::soft(z, 0.03)).norm() <= 1e-15);
  CHECK((prox_elastic_net_g(z, 0.3, 0.0, 0.5) - z).norm() == 0.0);
}

TEST_CASE("gradients match central finite differences") {
  std::mt19937_64 rng(16);
  const Mat W = oracle::gaussian(7, 5, rng);
  const Vec b = oracle::gaussian(7, rng);
  const LinearOperator F = pair_difference_operator({{0, 1}, {2, 4}, {3, 0}}, 5);
  const std::vector<SmoothFunction> fns = {
      least_squares(dense_operator(W), b),
      huber_composite(F, 0.3, 2.0),
      sum(least_squares(dense_operator(W), b), huber_composite(F, 0.3, 2.0)),
      zero_smooth(5),
  };
  for (const auto& f : fns) {
    CAPTURE(f.name());
    for (int t = 0; t < 20; ++t) {
      const Vec x = oracle::gaussian(5, rng);
      const Vec g = f.gradient(x);
      Vec fd(5);
      for (Index i = 0; i < 5; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(x[i]));
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        fd[i] = (f.value(xp) - f.value(xm)) / (2 * h);
      }
      CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("Lipschitz constants bound the gradient variation") {
  std::mt19937_64 rng(17);
  const Mat W = oracle::gaussian(9, 6, rng);
  const LinearOperator F = pair_difference_operator({{0, 1}, {1, 2}, {4, 5}}, 6);
  const SmoothFunction ls = least_squares(dense_operator(W), oracle::gaussian(9, rng));
  const SmoothFunction hc = huber_composite(F, 0.5, 3.0);
  const double sw = oracle::spectral_norm(W), sf = oracle::spectral_norm(F.materialize());
  CHECK(ls.lipschitz() >= sw * sw * (1 - 1e-12));
  CHECK(ls.lipschitz() <= sw * sw * 1.01);
  CHECK(hc.lipschitz() >= 0.5 * 3.0 * sf * sf * (1 - 1e-12));
  CHECK(sum(ls, hc).lipschitz() == doctest::Approx(ls.lipschitz() + hc.lipschitz()));
}

TEST_CASE("strong convexity constants") {
  CHECK(elastic_net(3, 0.1, 0.5).strong_convexity() == doctest::Approx(0.05));
  CHECK(huber_conjugate(3, 0.1, 1e3).strong_convexity() == doctest::Approx(0.01));
  CHECK(nonneg_plus_l2(3, 0.05).strong_convexity() == doctest::Approx(0.05));
  CHECK(l1_norm(3, 1.0).strong_convexity() == 0.0);
}

TEST_CASE("Huber value approaches the l1 norm monotonically as lambda3 grows") {
  const Vec t = (Vec(4) << 0.3, -2.0, 1e-4, 0.0).finished();
  const double l1 = t.cwiseAbs().sum();
  double prev = -1.0;
  for (double l3 : {1e2, 1e3, 1e4}) {
    const double v = huber_value(t, l3);
    CHECK(v <= l1);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(huber_value(t, kInf) == doctest::Approx(l1));
}

TEST_CASE("prox rejects a non-positive step and a wrong dimension") {
  CHECK_THROWS_AS((void)l1_norm(3, 1.0).prox(Vec::Zero(3), 0.0), UsageError);
  CHECK_THROWS_AS((void)l1_norm(3, 1.0).prox(Vec::Zero(2), 1.0), DimensionError);
}

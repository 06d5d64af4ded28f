#include "acv/metrics.hpp"
#include "acv/problems.hpp"
#include "acv/solver.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <tuple>

using namespace acv;

namespace {

// Brute-force ranking: every pair, Pearson written out, sorted by (-|r|, i, j).
std::vector<std::pair<Index, Index>> brute_pairs(const Mat& W, double fraction) {
  const Index d = W.cols();
  const double n = static_cast<double>(W.rows());
  std::vector<std::tuple<double, Index, Index>> all;
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const double mi = W.col(i).sum() / n, mj = W.col(j).sum() / n;
      double sij = 0, sii = 0, sjj = 0;
      for (Index r = 0; r < W.rows(); ++r) {
        sij += (W(r, i) - mi) * (W(r, j) - mj);
        sii += (W(r, i) - mi) * (W(r, i) - mi);
        sjj += (W(r, j) - mj) * (W(r, j) - mj);
      }
      all.emplace_back(-std::abs(sij / std::sqrt(sii * sjj)), i, j);
    }
  std::sort(all.begin(), all.end());
  const auto want = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(d * (d - 1)) / 2.0));
  std::vector<std::pair<Index, Index>> out;
  for (std::size_t r = 0; r < want; ++r) out.emplace_back(std::get<1>(all[r]), std::get<2>(all[r]));
  return out;
}

}  // namespace

TEST_CASE("pair index matches a brute-force correlation ranking") {
  std::mt19937_64 rng(41);
  for (double f : {0.05, 0.1, 0.5, 1.0}) {
    const Mat W = oracle::gaussian(30, 12, rng);
    CHECK(build_pair_index(W, f) == brute_pairs(W, f));
  }
}

TEST_CASE("pair index edge cases") {
  std::mt19937_64 rng(42);
  Mat W = oracle::gaussian(10, 4, rng);
  W.col(3) = -2.0 * W.col(1);  // |corr| = 1
  CHECK(build_pair_index(W, 0.1).front() == std::pair<Index, Index>{1, 3});
  CHECK(build_pair_index(oracle::gaussian(5, 2, rng), 0.1).size() == 1);
  Mat C = oracle::gaussian(10, 4, rng);
  C.col(2).setConstant(3.0);
  for (const auto& [i, j] : build_pair_index(C, 1.0)) CHECK((i != 2 && j != 2));
  CHECK(build_pair_index(C, 1.0).size() == 3);
  // Correlation is invariant to column rescaling, so rescaled data ranks the same.
  Mat S = W;
  S.col(0) *= 7.0;
  CHECK(build_pair_index(S, 0.5) == build_pair_index(W, 0.5));
}

TEST_CASE("fused elastic net constants") {
  auto data = make_synthetic_regression(40, 30, 0.2, 0.1, 43);
  FusedElasticNetSpec spec;
  spec.W = data.W;
  spec.b = data.b;
  spec.smoothed = true;
  const SaddleProblem s = build_fused_elastic_net(spec);
  CHECK(s.mu_g == doctest::Approx(0.05));
  CHECK(s.mu_fstar == doctest::Approx(0.01));
  spec.smoothed = false;
  const SaddleProblem n = build_fused_elastic_net(spec);
  CHECK(n.mu_fstar == 0.0);
  CHECK(n.dual_dim() == static_cast<Index>(std::ceil(0.1 * 30 * 29 / 2.0)));
  const double w = oracle::spectral_norm(data.W);
  CHECK(n.L >= w * w);
  CHECK(n.L <= w * w * 1.01);
  const double f = oracle::spectral_norm(n.A.materialize());
  CHECK(n.opnorm_A >= f);
  CHECK(n.opnorm_A <= f * 1.01);
}

TEST_CASE("lambda2 = 0 reduces to elastic net solved by accelerated proximal gradient") {
  auto data = make_synthetic_regression(25, 10, 0.3, 0.1, 44);
  FusedElasticNetSpec spec;
  spec.W = data.W;
  spec.b = data.b;
  spec.lambda2 = 0.0;
  const SaddleProblem p = build_fused_elastic_net(spec);
  CHECK(p.opnorm_A == 0.0);
  const double l1 = spec.lambda1, beta = spec.beta, L = p.L;
  Vec x = Vec::Zero(10), v = Vec::Zero(10);
  int k = 0;
  double worst = 0.0;
  run(p, schedule_general(p.L, p.opnorm_A), initial_state(p), 100, [&](const SolverState& s, double) {
    const double a = 2.0 / (k + 2.0), t = (k + 1.0) / (4.0 * L);
    const Vec u = a * x + (1 - a) * v;
    x = oracle::soft(x - t * (data.W.transpose() * (data.W * u - data.b)), t * l1 * beta) / (1.0 + t * l1 * (1 - beta));
    v = a * x + (1 - a) * v;
    ++k;
    worst = std::max(worst, (s.x - x).norm());
  });
  CHECK(worst <= 1e-10);
}

TEST_CASE("tiny fused elastic net agrees with a long subgradient run") {
  auto data = make_synthetic_regression(6, 4, 0.5, 0.1, 45);
  FusedElasticNetSpec spec;
  spec.W = data.W;
  spec.b = data.b;
  spec.pair_fraction = 0.5;
  const SaddleProblem p = build_fused_elastic_net(spec);
  const SolverState end = run(p, schedule_sc_primal(p.L, p.mu_g, p.opnorm_A), initial_state(p), 20000);
  const double acv = primal_objective(p, end.v);

  // Independent oracle: subgradient descent with 1/(mu k) steps on the written-out objective.
  const Mat F = p.A.materialize();
  auto obj = [&](const Vec& x) {
    return 0.5 * (data.W * x - data.b).squaredNorm() + 0.05 * x.lpNorm<1>() + 0.025 * x.squaredNorm() +
           0.1 * (F * x).lpNorm<1>();
  };
  auto sgn = [](const Vec& z) { return z.unaryExpr([](double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }); };
  Vec x = Vec::Zero(4);
  double best = obj(x);
  const double mu = 0.05;  // strong convexity of the objective
  for (int k = 1; k <= 2000000; ++k) {
    const Vec g = data.W.transpose() * (data.W * x - data.b) + 0.05 * sgn(x) + 0.05 * x + 0.1 * F.transpose() * sgn(F * x);
    x -= g / (mu * (k + 1000.0));
    best = std::min(best, obj(x));
  }
  CHECK(acv <= best + 1e-10);
  CHECK(best - acv <= 1e-4);
}

TEST_CASE("imaging mask geometry") {
  ImagingSpec s;
  s.height = 4;
  s.width = 4;
  s.keep_fraction = 0.25;
  s.seed = 9;
  const LinearOperator M = imaging_forward_operator(s);
  const Vec diag = M.materialize().diagonal();
  CHECK(diag.sum() == 4.0);
  s.observed = Vec::Zero(16);
  const SaddleProblem p = build_imaging(s);
  CHECK(p.L == doctest::Approx(1.0));
  CHECK(random_mask(100, 0.3, 1) == random_mask(100, 0.3, 1));
  const auto mask = random_mask(100, 0.3, 1);
  CHECK(std::count(mask.begin(), mask.end(), true) == 30);
}

TEST_CASE("imaging rescaling leaves the primal objective unchanged") {
  ImagingSpec s;
  s.height = 6;
  s.width = 5;
  s.lambda1 = 0.07;
  s.mu_g = 0.05;
  s.seed = 4;
  s.observed = synthetic_observation(imaging_forward_operator(s), make_phantom(6, 5), 0.05, 2);
  std::mt19937_64 rng(46);
  const Vec x = oracle::gaussian(30, rng).cwiseAbs();
  const SaddleProblem a = build_imaging(s);
  s.rho1 = 100.0;
  const SaddleProblem b = build_imaging(s);
  CHECK(primal_objective(a, x) == doctest::Approx(primal_objective(b, x)).epsilon(1e-13));
  CHECK(b.opnorm_A == doctest::Approx(a.opnorm_A / 100.0));
}

TEST_CASE("imaging rescaling leaves the solution unchanged") {
  ImagingSpec s;
  s.height = 8;
  s.width = 8;
  s.lambda1 = 0.05;
  s.mu_g = 0.05;
  s.seed = 5;
  s.observed = synthetic_observation(imaging_forward_operator(s), make_phantom(8, 8), 0.05, 6);
  std::vector<Vec> sols;
  for (double rho : {1.0, 100.0}) {
    s.rho1 = rho;
    const SaddleProblem p = build_imaging(s);
    sols.push_back(run(p, schedule_sc_primal(p.L, p.mu_g, p.opnorm_A), initial_state(p), 20000).v);
  }
  CHECK((sols[0] - sols[1]).norm() <= 1e-5 * (1.0 + sols[0].norm()));
}

TEST_CASE("all-observed mask with lambda1 = 0 is solved by one projected step") {
  ImagingSpec s;
  s.height = 3;
  s.width = 4;
  s.keep_fraction = 1.0;
  s.lambda1 = 0.0;
  std::mt19937_64 rng(47);
  s.observed = oracle::gaussian(12, rng);
  const SaddleProblem p = build_imaging(s);
  const SolverState one = run(p, condat_vu_params(1e-9, 1.0), initial_state(p), 1);
  CHECK((one.x - s.observed.cwiseMax(0.0)).norm() <= 1e-15);
}

TEST_CASE("blur stencil rows are non-negative averages that widen away from the centre") {
  ImagingSpec s;
  s.height = 9;
  s.width = 9;
  s.forward = ForwardModel::Blur;
  s.blur_half_width = 1;
  const Mat B = imaging_forward_operator(s).materialize();
  for (Index r = 0; r < B.rows(); ++r) {
    CHECK(B.row(r).sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(B.row(r).minCoeff() >= 0.0);
  }
  const Index centre = 4 * 9 + 4, corner = 0;
  CHECK(B(centre, centre) == doctest::Approx(1.0 / 9.0));
  // Reflection can stack several taps on one pixel, so compare the smallest tap.
  auto smallest_tap = [&](Index r) {
    double m = 1.0;
    for (Index c = 0; c < B.cols(); ++c)
      if (B(r, c) > 0.0) m = std::min(m, B(r, c));
    return m;
  };
  CHECK(smallest_tap(centre) == doctest::Approx(1.0 / 9.0));
  CHECK(smallest_tap(corner) == doctest::Approx(1.0 / 25.0));
}

TEST_CASE("tomography surrogate has L far above |D|^2 when scaled up") {
  ImagingSpec s;
  s.height = 4;
  s.width = 4;
  s.forward = ForwardModel::Tomography;
  s.ct_scale = 20.0;
  s.seed = 1;
  const LinearOperator M = imaging_forward_operator(s);
  CHECK(M.out_dim() == 32);
  s.observed = Vec::Zero(32);
  const SaddleProblem p = build_imaging(s);
  CHECK(p.L > 10.0 * p.opnorm_A * p.opnorm_A);
}

TEST_CASE("smoothed objective approaches the non-smoothed one as lambda3 grows") {
  auto data = make_synthetic_regression(20, 8, 0.3, 0.1, 48);
  FusedElasticNetSpec spec;
  spec.W = data.W;
  spec.b = data.b;
  spec.pair_fraction = 0.3;
  std::mt19937_64 rng(49);
  const Vec x = oracle::gaussian(8, rng, 0.01);
  const double exact = primal_objective(build_fused_elastic_net(spec), x);
  spec.smoothed = true;
  double prev = -kInf;
  for (double l3 : {1e2, 1e3, 1e4}) {
    spec.lambda3 = l3;
    const double v = primal_objective(build_fused_elastic_net(spec), x);
    CHECK(v <= exact);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("LASSO forms share the objective") {
  std::mt19937_64 rng(50);
  const Mat W = oracle::gaussian(10, 4, rng);
  const Vec b = oracle::gaussian(10, rng), x = oracle::gaussian(4, rng);
  const double expect = 0.5 * (W * x - b).squaredNorm() + 0.3 * x.lpNorm<1>();
  CHECK(primal_objective(build_lasso(W, b, 0.3, LassoForm::Split), x) == doctest::Approx(expect));
  CHECK(primal_objective(build_lasso(W, b, 0.3, LassoForm::Prox), x) == doctest::Approx(expect));
}

TEST_CASE("synthetic data is seeded and sized") {
  const auto a = make_synthetic_regression(10, 20, 0.25, 0.1, 3);
  const auto b = make_synthetic_regression(10, 20, 0.25, 0.1, 3);
  CHECK(a.W == b.W);
  CHECK(a.b == b.b);
  CHECK((a.x_true.array() != 0.0).count() == 5);
  CHECK_THROWS_AS(make_synthetic_regression(0, 3, 0.1, 0.1, 1), UsageError);
}

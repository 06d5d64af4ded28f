#include "acv/cli.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace acv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "acv_cli_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunConfig lasso_config(const fs::path& out) {
  RunConfig c = parse_config(
      "problem = lasso\nn_samples = 30\nn_features = 12\nlambda1 = 0.2\nmax_iters = 200\nseed = 5\n");
  c.output_path = out.string();
  return c;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("solve writes one row per logged iteration") {
  const fs::path out = scratch("solve");
  RunConfig c = lasso_config(out);
  c.log_every = 4;
  std::ostringstream o, e;
  CHECK(cmd_solve(c, o, e) == kExitOk);
  CHECK(count_lines(slurp(out / "acv-general.csv")) == 1 + 50);
  CHECK(o.str().find("acv-general") != std::string::npos);
}

TEST_CASE("solve is byte-identical across invocations") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    RunConfig c = lasso_config(dir);
    c.algorithm = Algorithm::CvBook;
    c.pd_gap = true;
    std::ostringstream o, e;
    REQUIRE(cmd_solve(c, o, e) == kExitOk);
  }
  CHECK(slurp(a / "cv-book.csv") == slurp(b / "cv-book.csv"));
  CHECK(slurp(a / "cv-book.csv").find(",,") == std::string::npos);  // pd_gap filled
}

TEST_CASE("missing constant for the smooth regime is a validation failure naming it") {
  RunConfig c = lasso_config(scratch("smooth"));
  c.problem = ProblemFamily::FusedElasticNet;
  c.smoothed = false;
  c.algorithm = Algorithm::AcvScSmooth;
  std::ostringstream o, e;
  CHECK(cmd_solve(c, o, e) == kExitValidation);
  CHECK(e.str().find("mu_fstar") != std::string::npos);
}

TEST_CASE("validate reports hand-set alpha and the printed steady formula") {
  RunConfig c = lasso_config(scratch("validate"));
  c.step_alpha = 1.5;
  std::ostringstream o, e;
  CHECK(cmd_validate(c, 10, false, o, e) == kExitValidation);
  CHECK(o.str().find("FAIL  alpha_k in (0,1]") != std::string::npos);

  RunConfig s = lasso_config(scratch("validate2"));
  s.problem = ProblemFamily::FusedElasticNet;
  s.algorithm = Algorithm::AcvSc;
  s.target_lipschitz = 1e3;
  std::ostringstream o2, e2, o3, e3;
  CHECK(cmd_validate(s, 100000, false, o2, e2) == kExitOk);
  CHECK(cmd_validate(s, 100000, true, o3, e3) == kExitValidation);
  CHECK(o3.str().find("FAIL  steady: |A|^2/2") != std::string::npos);
}

TEST_CASE("a solve with hand-set steps that violate the constraints exits with 2") {
  RunConfig c = lasso_config(scratch("bad_steps"));
  c.algorithm = Algorithm::CvBook;
  c.step_tau = 10.0;
  std::ostringstream o, e;
  CHECK(cmd_solve(c, o, e) == kExitValidation);
}

TEST_CASE("compare: empty list, duplicates, and a failing member") {
  std::ostringstream o, e;
  CHECK(cmd_compare(lasso_config(scratch("cmp0")), {}, o, e) == kExitUsage);
  const fs::path out = scratch("cmp");
  std::ostringstream o2, e2;
  const int status = cmd_compare(lasso_config(out), {"acv-general", "acv-general", "pdhg", "cv-book"}, o2, e2);
  CHECK(status == kExitUsage);  // pdhg needs L = 0
  CHECK(slurp(out / "acv-general.csv") == slurp(out / "acv-general-2.csv"));
  CHECK(count_lines(slurp(out / "cv-book.csv")) == 201);
  CHECK(fs::exists(out / "summary.txt"));
  CHECK(o2.str().find("pdhg") != std::string::npos);
  CHECK(e2.str().find("pdhg needs L = 0") != std::string::npos);
}

TEST_CASE("apgd applies only where a gradient form exists") {
  RunConfig c = lasso_config(scratch("apgd"));
  c.algorithm = Algorithm::Apgd;
  std::ostringstream o, e;
  CHECK(cmd_solve(c, o, e) == kExitOk);
  c.problem = ProblemFamily::Imaging;
  c.height = c.width = 4;
  std::ostringstream o2, e2;
  CHECK(cmd_solve(c, o2, e2) == kExitUsage);
}

TEST_CASE("grid parsing") {
  const GridSpec d = parse_grid("dual");
  CHECK(d.mode == GridSpec::Mode::Dual);
  CHECK(d.j_lo == -5);
  CHECK(d.j_hi == 5);
  const GridSpec p = parse_grid("primal:1..2:3..4");
  CHECK(p.j_lo == 1);
  CHECK(p.i_hi == 4);
  CHECK(parse_grid("primal:0").j_hi == 0);
  CHECK_THROWS_AS(parse_grid("sideways"), UsageError);
  CHECK_THROWS_AS(parse_grid("primal:3..1"), UsageError);
  CHECK_THROWS_AS(parse_grid("primal:a..b"), UsageError);
}

TEST_CASE("tuning: single point and grid containing the book parameters") {
  const RunConfig c = lasso_config(scratch("tune"));
  const ProblemSetup setup = build_problem(c);
  const Reference ref = compute_reference(c, setup);
  const TuneResult one = tune_cv(c, setup.problem, parse_grid("dual:0..0"), ref.objective);
  CHECK(one.points.size() == 1);
  CHECK(one.best.multiplier == 1.0);
  const StepParams book = condat_vu_book_params(setup.problem.L, setup.problem.opnorm_A).at(0);
  CHECK(one.best.params.gamma == book.gamma);
  const TuneResult grid = tune_cv(c, setup.problem, parse_grid("dual:-2..2"), ref.objective);
  CHECK(*grid.best.final_gap <= *one.best.final_gap);
  std::ostringstream o, e;
  CHECK(cmd_tune_cv(c, "primal:0..1", o, e) == kExitOk);
  CHECK(o.str().find("best multiplier") != std::string::npos);
}

TEST_CASE("reference cache round trip") {
  const fs::path cache = scratch("cache");
  RunConfig c = lasso_config(scratch("cache_out"));
  c.reference_cache_dir = cache.string();
  const ProblemSetup setup = build_problem(c);
  const Reference a = compute_reference(c, setup);
  CHECK(std::distance(fs::directory_iterator(cache), fs::directory_iterator()) == 1);
  const Reference b = compute_reference(c, setup);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
}

TEST_CASE("divergent hand-set steps: rejected by the sweep, exit 1 when it is off") {
  const fs::path out = scratch("diverge");
  RunConfig c = lasso_config(out);
  c.algorithm = Algorithm::Apgd;
  c.step_tau = 1e3;
  c.step_alpha = 1.0;
  c.max_iters = 5000;
  std::ostringstream o, e;
  CHECK(cmd_solve(c, o, e) == kExitValidation);
  c.check_schedule = false;
  std::ostringstream o2, e2;
  CHECK(cmd_solve(c, o2, e2) == kExitDivergence);
  const std::string csv = slurp(out / "apgd.csv");
  CHECK(count_lines(csv) > 1);
  CHECK(count_lines(csv) < 5001);
}

#include "acv/cli.hpp"

#include "acv/linops.hpp"
#include "acv/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace acv {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string file_bytes(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t problem_hash(const RunConfig& c) {
  // Only fields that change the problem data or the starting point.
  RunConfig key = c;
  const RunConfig defaults;
  key.algorithm = defaults.algorithm;
  key.max_iters = defaults.max_iters;
  key.output_path = defaults.output_path;
  key.log_every = defaults.log_every;
  key.reference_iters_multiplier = defaults.reference_iters_multiplier;
  key.record_timing = defaults.record_timing;
  key.pd_gap = defaults.pd_gap;
  key.check_schedule = defaults.check_schedule;
  key.gap_threshold = defaults.gap_threshold;
  key.tune_grid = defaults.tune_grid;
  key.reference_cache_dir = defaults.reference_cache_dir;
  key.step_gamma = key.step_tau = key.step_alpha = key.step_theta = std::nullopt;
  std::uint64_t h = fnv1a(format_config(key));
  for (const auto* path : {&c.data_path, &c.observed_path, &c.x0_path, &c.y0_path}) h = fnv1a(file_bytes(*path), h);
  return h;
}

struct Regression {
  Mat W;
  Vec b;
};

Regression load_regression(const RunConfig& c) {
  Regression r;
  if (!c.data_path.empty()) {
    Dataset d = read_libsvm(c.data_path);
    if (c.rescale) d = rescale_columns(std::move(d));
    r.W = std::move(d.features);
    r.b = std::move(d.labels);
  } else {
    auto s = make_synthetic_regression(c.n_samples, c.n_features, c.sparsity, c.noise, c.seed);
    r.W = std::move(s.W);
    r.b = std::move(s.b);
  }
  if (c.target_lipschitz > 0.0) {
    const double L = least_squares(dense_operator(r.W), r.b).lipschitz();
    require(L > 0.0, "target_lipschitz: the data matrix is zero");
    const double scale = std::sqrt(c.target_lipschitz / L);
    r.W *= scale;
    r.b *= scale;
  }
  return r;
}

ForwardModel forward_model(const std::string& name) {
  if (name == "mask") return ForwardModel::Mask;
  if (name == "blur") return ForwardModel::Blur;
  if (name == "tomography") return ForwardModel::Tomography;
  throw UsageError("unknown forward model '" + name + "'");
}

Vec load_start(const std::string& path, Index dim, const char* what) {
  if (path.empty()) return Vec::Zero(dim);
  Vec v = read_vector(path);
  if (v.size() != dim)
    throw DimensionError(std::string(what) + " from " + path + " has " + std::to_string(v.size()) +
                         " entries, expected " + std::to_string(dim));
  return v;
}

Algorithm strongest_schedule(const SaddleProblem& p) {
  const double a2 = p.opnorm_A * p.opnorm_A;
  if (p.mu_g > 0.0 && p.mu_fstar > 0.0 && p.mu_g <= a2 / p.mu_fstar + p.L) return Algorithm::AcvScSmooth;
  if (p.mu_g > 0.0 && p.L > 0.0 && p.opnorm_A > 0.0 && p.mu_g <= 4.0 * p.L) return Algorithm::AcvSc;
  return Algorithm::AcvGeneral;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt17(double v) { return fmt(v, "%.17g"); }

}  // namespace

ProblemSetup build_problem(const RunConfig& c) {
  std::optional<SaddleProblem> saddle;
  std::optional<SaddleProblem> gradient;
  if (c.problem == ProblemFamily::Imaging) {
    ImagingSpec spec;
    spec.height = c.height;
    spec.width = c.width;
    spec.forward = forward_model(c.forward);
    spec.keep_fraction = c.keep_fraction;
    spec.blur_half_width = c.blur_half_width;
    spec.ct_rows_factor = c.ct_rows_factor;
    spec.ct_scale = c.ct_scale;
    spec.lambda1 = c.lambda1;
    spec.mu_g = c.mu_g;
    spec.rho1 = c.effective_rho1();
    spec.seed = c.seed;
    if (c.observed_path.empty())
      spec.observed = synthetic_observation(imaging_forward_operator(spec), make_phantom(c.height, c.width),
                                            c.noise, c.seed + 1);
    else
      spec.observed = read_vector(c.observed_path);
    saddle = build_imaging(spec);
  } else {
    Regression r = load_regression(c);
    if (c.problem == ProblemFamily::Lasso) {
      saddle = build_lasso(r.W, r.b, c.lambda1, LassoForm::Split);
      gradient = build_lasso(r.W, r.b, c.lambda1, LassoForm::Prox);
    } else {
      const FusedElasticNetSpec spec{std::move(r.W), std::move(r.b), c.lambda1, c.lambda2,
                                     c.lambda3,      c.beta,         c.smoothed, c.pair_fraction};
      saddle = build_fused_elastic_net(spec);
      if (c.smoothed) gradient = build_fused_elastic_net_apgd(spec);
    }
  }
  ProblemSetup s{std::move(*saddle), std::move(gradient), Vec(), Vec(), 0};
  s.x0 = load_start(c.x0_path, s.problem.primal_dim(), "x0");
  s.y0 = load_start(c.y0_path, s.problem.dual_dim(), "y0");
  s.hash = problem_hash(c);
  return s;
}

const SaddleProblem& problem_for(const ProblemSetup& setup, Algorithm a) {
  if (a != Algorithm::Apgd) return setup.problem;
  if (!setup.gradient_form)
    throw UsageError("apgd needs a gradient form: use problem = lasso, or the smoothed fused elastic net");
  return *setup.gradient_form;
}

ParamSchedule build_schedule(const RunConfig& c, Algorithm a, const SaddleProblem& p, bool paper_literal) {
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw ValidationFailure(algorithm_name(a) + ": " + what);
  };
  auto base = [&]() -> ParamSchedule {
    switch (a) {
      case Algorithm::AcvGeneral: return schedule_general(p.L, p.opnorm_A);
      case Algorithm::AcvSc:
        need(p.mu_g > 0.0, "needs mu_g > 0 (the problem has mu_g = 0)");
        need(p.L > 0.0 && p.opnorm_A > 0.0, "needs L > 0 and |A| > 0");
        need(p.mu_g <= 4.0 * p.L, "needs mu_g <= 4L (mu_g = " + fmt(p.mu_g) + ", L = " + fmt(p.L) + ")");
        return schedule_sc_primal(p.L, p.mu_g, p.opnorm_A, paper_literal);
      case Algorithm::AcvScDual:
        need(p.mu_fstar > 0.0, "needs mu_fstar > 0 (the problem has mu_fstar = 0)");
        need(p.L > 0.0 && p.opnorm_A > 0.0, "needs L > 0 and |A| > 0");
        need(p.mu_fstar <= 4.0 * p.L, "needs mu_fstar <= 4L");
        return schedule_sc_dual(p.L, p.mu_fstar, p.opnorm_A, paper_literal);
      case Algorithm::AcvScSmooth: {
        need(p.mu_g > 0.0, "needs mu_g > 0 (the problem has mu_g = 0)");
        need(p.mu_fstar > 0.0, "needs mu_fstar > 0 (the problem has mu_fstar = 0)");
        const double lbar = p.opnorm_A * p.opnorm_A / p.mu_fstar + p.L;
        need(p.mu_g <= lbar, "needs mu_g <= |A|^2/mu_fstar + L");
        return schedule_sc_smooth(p.L, p.mu_g, p.mu_fstar, p.opnorm_A);
      }
      case Algorithm::CvBook: return condat_vu_book_params(p.L, p.opnorm_A);
      case Algorithm::Apgd: return schedule_general(p.L, p.opnorm_A);
      case Algorithm::Pdhg:
        if (p.L != 0.0) throw UsageError("pdhg needs L = 0 (the problem has L = " + fmt(p.L) + ")");
        return pdhg_params(p.opnorm_A);
      case Algorithm::CvTuned: throw UsageError("cv-tuned has no fixed schedule; it is found by tune-cv");
    }
    throw UsageError("unknown algorithm");
  };
  ParamSchedule s = base();
  if (!c.step_gamma && !c.step_tau && !c.step_alpha && !c.step_theta) return s;
  StepParams q = s.at(0);
  if (c.step_gamma) q.gamma = *c.step_gamma;
  if (c.step_tau) q.tau = *c.step_tau;
  if (c.step_alpha) q.alpha = *c.step_alpha;
  if (c.step_theta) q.theta = *c.step_theta;
  return ParamSchedule::constant(Regime::Custom, q);
}

Reference compute_reference(const RunConfig& c, const ProblemSetup& setup) {
  const SaddleProblem& p = setup.problem;
  Reference ref;
  const Algorithm algo = strongest_schedule(p);
  ref.algorithm = algorithm_name(algo);
  ref.iterations = std::max<Index>(1, c.reference_iters_multiplier * c.max_iters);

  fs::path cache;
  if (!c.reference_cache_dir.empty()) {
    char name[96];
    std::snprintf(name, sizeof name, "%016llx-%s-%lld.ref", static_cast<unsigned long long>(setup.hash),
                  ref.algorithm.c_str(), static_cast<long long>(ref.iterations));
    cache = fs::path(c.reference_cache_dir) / name;
    if (fs::exists(cache)) {
      const Vec all = read_vector(cache);
      if (all.size() == 1 + p.primal_dim() + p.dual_dim()) {
        ref.objective = all[0];
        ref.x = all.segment(1, p.primal_dim());
        ref.y = all.tail(p.dual_dim());
        return ref;
      }
    }
  }

  RunConfig plain = c;
  plain.step_gamma = plain.step_tau = plain.step_alpha = plain.step_theta = std::nullopt;
  const ParamSchedule s = build_schedule(plain, algo, p);
  double best = std::numeric_limits<double>::infinity();
  const SolverState end = run(p, s, initial_state(p, setup.x0, setup.y0), ref.iterations,
                              [&](const SolverState& z, double) { best = std::min(best, primal_objective(p, z.v)); });
  if (!std::isfinite(best)) throw ValidationFailure("reference run produced no finite objective");
  ref.objective = best;
  ref.x = end.v;
  ref.y = end.w;

  if (!cache.empty()) {
    Vec all(1 + p.primal_dim() + p.dual_dim());
    all << ref.objective, ref.x, ref.y;
    write_vector(all, cache);
  }
  return ref;
}

GridSpec parse_grid(const std::string& spec) {
  auto bad = [&]() { return UsageError("bad grid '" + spec + "' (expected primal[:jlo..jhi[:ilo..ihi]] or dual[:jlo..jhi])"); };
  auto range = [&](const std::string& r, int& lo, int& hi) {
    const auto dots = r.find("..");
    try {
      std::size_t used = 0;
      if (dots == std::string::npos) {
        lo = hi = std::stoi(r, &used);
        if (used != r.size()) throw bad();
      } else {
        const std::string a = r.substr(0, dots), b = r.substr(dots + 2);
        lo = std::stoi(a, &used);
        if (used != a.size()) throw bad();
        hi = std::stoi(b, &used);
        if (used != b.size()) throw bad();
      }
    } catch (const std::logic_error&) {
      throw bad();
    }
    if (lo > hi) throw bad();
  };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty()) throw bad();
  GridSpec g;
  if (parts[0] == "primal") {
    if (parts.size() > 3) throw bad();
    if (parts.size() >= 2) range(parts[1], g.j_lo, g.j_hi);
    if (parts.size() == 3) range(parts[2], g.i_lo, g.i_hi);
    if (g.i_lo < 1) throw bad();
  } else if (parts[0] == "dual") {
    g.mode = GridSpec::Mode::Dual;
    g.j_lo = -5;
    g.j_hi = 5;
    if (parts.size() > 2) throw bad();
    if (parts.size() == 2) range(parts[1], g.j_lo, g.j_hi);
  } else {
    throw bad();
  }
  return g;
}

TuneResult tune_cv(const RunConfig& c, const SaddleProblem& p, const GridSpec& grid, double reference_objective) {
  require(c.max_iters >= 1, "tune-cv: max_iters must be at least 1");
  const StepParams book = condat_vu_book_params(p.L, p.opnorm_A).at(0);
  const double tau_acc = schedule_general(p.L, p.opnorm_A).at(c.max_iters).tau;

  TuneResult result;
  result.grid = grid;
  auto try_point = [&](double m, StepParams q) {
    TunePoint pt{m, q, std::nullopt};
    double best = std::numeric_limits<double>::infinity();
    try {
      run(p, condat_vu_params(q.gamma, q.tau), initial_state(p), c.max_iters,
          [&](const SolverState& z, double) { best = std::min(best, primal_objective(p, z.v)); });
      if (std::isfinite(best)) pt.final_gap = best - reference_objective;
    } catch (const DivergenceError&) {
    }
    result.points.push_back(pt);
  };
  if (grid.mode == GridSpec::Mode::Primal) {
    for (int j = grid.j_lo; j <= grid.j_hi; ++j)
      for (int i = grid.i_lo; i <= grid.i_hi; ++i) {
        const double m = i * std::pow(10.0, -j);
        try_point(m, {book.gamma, m * tau_acc, 1.0, 1.0});
      }
  } else {
    for (int j = grid.j_lo; j <= grid.j_hi; ++j) {
      const double m = std::pow(10.0, j);
      try_point(m, {m * book.gamma, book.tau, 1.0, 1.0});
    }
  }

  const bool primal = grid.mode == GridSpec::Mode::Primal;
  const TunePoint* best = nullptr;
  for (const auto& pt : result.points) {
    if (!pt.final_gap) continue;
    const double step = primal ? pt.params.tau : pt.params.gamma;
    if (!best || *pt.final_gap < *best->final_gap ||
        (*pt.final_gap == *best->final_gap && step > (primal ? best->params.tau : best->params.gamma)))
      best = &pt;
  }
  if (!best) throw ValidationFailure("tune-cv: every grid point diverged");
  result.best = *best;
  return result;
}

RunOutcome run_algorithm(const RunConfig& c, const ProblemSetup& setup, Algorithm a, const Reference& ref) {
  RunOutcome out;
  out.label = algorithm_name(a);
  out.algorithm = a;
  std::optional<Recorder> recorder;
  try {
    const SaddleProblem& p = problem_for(setup, a);
    std::optional<ParamSchedule> schedule;
    if (a == Algorithm::CvTuned) {
      const TuneResult t = tune_cv(c, p, parse_grid(c.tune_grid), ref.objective);
      schedule = condat_vu_params(t.best.params.gamma, t.best.params.tau);
    } else {
      schedule = build_schedule(c, a, p);
    }
    if (a != Algorithm::CvTuned && c.check_schedule) {
      const ValidationReport report =
          validate_schedule(*schedule, {p.L, p.opnorm_A, p.mu_g, p.mu_fstar}, std::max<Index>(c.max_iters, 1));
      if (!report.passed()) {
        const ConstraintResult* f = report.first_failure();
        throw ValidationFailure(out.label + ": schedule violates '" + f->name + "' at k = " +
                                std::to_string(*f->first_violation));
      }
    }

    RecordOptions opts;
    opts.log_every = c.effective_log_every();
    opts.seed = c.seed;
    // The gap box lives in the saddle form's spaces.
    if (c.pd_gap && &p == &setup.problem) opts.gap_box = default_box(ref.x, ref.y, setup.x0, setup.y0);
    recorder.emplace(p, opts);
    const Vec y0 = (&p == &setup.problem) ? setup.y0 : Vec::Zero(p.dual_dim());
    double seconds = 0.0;
    const SolverState end = run(p, *schedule, initial_state(p, setup.x0, y0), c.max_iters,
                                [&](const SolverState& z, double dt) {
                                  seconds += dt;
                                  recorder->observe(z, dt);
                                });
    out.iterations = end.k;
    out.step_seconds = seconds;
  } catch (const DivergenceError& e) {
    out.status = kExitDivergence;
    out.message = e.what();
    out.iterations = e.last_finite().k;
  } catch (const ValidationFailure& e) {
    out.status = kExitValidation;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.status = kExitUsage;
    out.message = e.what();
  }
  if (!out.message.empty() && out.message.rfind(out.label + ":", 0) != 0)
    out.message = out.label + ": " + out.message;
  if (recorder) out.record = recorder->take();
  if (!c.record_timing)
    for (auto& row : out.record.rows) row.wall_time_s = 0.0;
  return out;
}

BenchSummary summarize(std::vector<RunOutcome>& runs, double reference_objective, double threshold,
                       Index max_iters) {
  BenchSummary s;
  s.threshold = threshold;
  // A compared run may end below the long reference run.
  double ref = reference_objective;
  for (const auto& r : runs)
    for (const auto& row : r.record.rows) ref = std::min(ref, row.objective);
  s.reference_objective = ref;
  const Index width = std::max<Index>(1, max_iters / 10);
  s.slope_lo = width;
  s.slope_hi = max_iters;
  s.tail_lo = std::max<Index>(1, max_iters - width + 1);
  s.tail_hi = max_iters;

  for (auto& r : runs) {
    BenchRow row;
    row.label = r.label;
    row.status = r.status;
    row.message = r.message;
    row.wall_time_s = r.step_seconds;
    std::vector<Index> ks;
    std::vector<double> gaps;
    for (auto& rr : r.record.rows) {
      rr.gap_ref = gap_vs_reference(rr.objective, ref);
      ks.push_back(rr.k);
      gaps.push_back(*rr.gap_ref);
    }
    if (!gaps.empty()) {
      const auto env = best_so_far(gaps);
      row.final_gap = env.back();
      for (std::size_t i = 0; i < env.size(); ++i)
        if (env[i] <= threshold) {
          row.iterations_to_threshold = ks[i];
          break;
        }
      try {
        row.rate_slope = fit_rate_slope(ks, gaps, s.slope_lo, s.slope_hi);
      } catch (const UsageError&) {
      }
      try {
        row.contraction = fit_linear_rate(ks, gaps, s.tail_lo, s.tail_hi);
      } catch (const UsageError&) {
      }
    }
    s.rows.push_back(std::move(row));
  }
  return s;
}

std::string BenchSummary::to_string() const {
  std::ostringstream o;
  o << "reference objective " << fmt17(reference_objective) << "\n";
  o << "gap threshold " << fmt(threshold) << ", slope window [" << slope_lo << ", " << slope_hi
    << "], contraction window [" << tail_lo << ", " << tail_hi << "]\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-10s %-13s %-13s %-10s %-12s %s\n", "algorithm", "status", "final_gap",
                "iters_to_gap", "slope", "contraction", "step_time_s");
  o << line;
  auto opt = [](const std::optional<double>& v, const char* spec) { return v ? fmt(*v, spec) : std::string("n/a"); };
  for (const auto& r : rows) {
    const char* status = r.status == kExitOk           ? "ok"
                         : r.status == kExitDivergence ? "diverged"
                         : r.status == kExitValidation ? "invalid"
                                                       : "error";
    const std::string hit = r.iterations_to_threshold ? std::to_string(*r.iterations_to_threshold) : "not reached";
    std::snprintf(line, sizeof line, "%-16s %-10s %-13s %-13s %-10s %-12s %.3f\n", r.label.c_str(), status,
                  opt(r.final_gap, "%.4e").c_str(), hit.c_str(), opt(r.rate_slope, "%.3f").c_str(),
                  opt(r.contraction, "%.6f").c_str(), r.wall_time_s);
    o << line;
    if (!r.message.empty()) o << "  " << r.message << "\n";
  }
  return o.str();
}

namespace {

int worst_status(const std::vector<RunOutcome>& runs) {
  int status = kExitOk;
  for (const auto& r : runs) status = std::max(status, r.status);
  return status;
}

int run_and_report(const RunConfig& c, const std::vector<Algorithm>& algos, std::ostream& out, std::ostream& err,
                   bool concurrent) {
  const ProblemSetup setup = build_problem(c);
  const Reference ref = compute_reference(c, setup);

  std::vector<RunOutcome> runs(algos.size());
  if (concurrent && algos.size() > 1) {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < algos.size(); ++i)
      threads.emplace_back([&, i]() { runs[i] = run_algorithm(c, setup, algos[i], ref); });
    for (auto& t : threads) t.join();
  } else {
    for (std::size_t i = 0; i < algos.size(); ++i) runs[i] = run_algorithm(c, setup, algos[i], ref);
  }

  std::map<std::string, int> seen;
  for (auto& r : runs) {
    const int n = ++seen[r.label];
    if (n > 1) r.label += "-" + std::to_string(n);
  }
  BenchSummary summary = summarize(runs, ref.objective, c.gap_threshold, c.max_iters);
  for (const auto& r : runs) {
    const fs::path csv = fs::path(c.output_path) / (r.label + ".csv");
    write_convergence_csv(r.record, csv);
    if (r.status != kExitOk) err << r.message << "\n";
  }
  const std::string text = summary.to_string();
  out << text;
  if (algos.size() > 1) {
    std::ofstream f(fs::path(c.output_path) / "summary.txt");
    f << text;
    if (!f) throw IoError("failed writing " + (fs::path(c.output_path) / "summary.txt").string());
  }
  return worst_status(runs);
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ValidationFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() { return run_and_report(c, {c.algorithm}, out, err, false); });
}

int cmd_compare(const RunConfig& c, const std::vector<std::string>& algorithms, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&]() {
    if (algorithms.empty()) throw UsageError("compare: the algorithm list is empty");
    std::vector<Algorithm> algos;
    for (const auto& name : algorithms) algos.push_back(parse_algorithm(name));
    return run_and_report(c, algos, out, err, true);
  });
}

int cmd_tune_cv(const RunConfig& c, const std::string& grid, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() {
    const GridSpec g = parse_grid(grid);
    const ProblemSetup setup = build_problem(c);
    const Reference ref = compute_reference(c, setup);
    const TuneResult t = tune_cv(c, setup.problem, g, ref.objective);
    const bool primal = g.mode == GridSpec::Mode::Primal;
    out << (primal ? "primal" : "dual") << " grid, " << t.points.size() << " points, reference objective "
        << fmt17(ref.objective) << "\n";
    for (const auto& pt : t.points)
      out << "  multiplier " << fmt(pt.multiplier) << "  gamma " << fmt(pt.params.gamma) << "  tau "
          << fmt(pt.params.tau) << "  final_gap " << (pt.final_gap ? fmt(*pt.final_gap, "%.4e") : "diverged")
          << "\n";
    out << "best multiplier " << fmt(t.best.multiplier) << " gamma " << fmt17(t.best.params.gamma) << " tau "
        << fmt17(t.best.params.tau) << " final_gap " << fmt(*t.best.final_gap, "%.4e") << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_validate(const RunConfig& c, std::optional<Index> horizon, bool paper_literal, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&]() {
    const ProblemSetup setup = build_problem(c);
    const SaddleProblem& p = problem_for(setup, c.algorithm);
    const ParamSchedule s = build_schedule(c, c.algorithm, p, paper_literal);
    const Index k_max = horizon.value_or(std::max<Index>(c.max_iters, 1));
    require(k_max >= 0, "validate: horizon must be non-negative");
    const ValidationReport report = validate_schedule(s, {p.L, p.opnorm_A, p.mu_g, p.mu_fstar}, k_max);
    out << algorithm_name(c.algorithm) << " (" << regime_name(s.regime()) << "), L = " << fmt(p.L)
        << ", |A| = " << fmt(p.opnorm_A) << ", mu_g = " << fmt(p.mu_g) << ", mu_fstar = " << fmt(p.mu_fstar)
        << ", k <= " << k_max << "\n";
    out << report.to_string();
    return report.passed() ? static_cast<int>(kExitOk) : static_cast<int>(kExitValidation);
  });
}

}  // namespace acv

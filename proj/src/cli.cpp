#include "sgdavg/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "sgdavg/averaging.hpp"
#include "sgdavg/dataset.hpp"
#include "sgdavg/lower_bound.hpp"
#include "sgdavg/oracles.hpp"
#include "sgdavg/report_io.hpp"
#include "sgdavg/sgd.hpp"
#include "sgdavg/tail.hpp"
#include "sgdavg/trials.hpp"
#include "sgdavg/verifiers.hpp"

namespace sgdavg::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProblemOptions {
  std::string problem = "quadratic";
  std::size_t dim = 1;
  double mu = 1.0;
  std::string data_path;
  std::size_t n_features = 0;
  double lambda = 0.0;
  std::string scale = "auto";
  std::size_t synthetic_m = 2000;
  std::size_t synthetic_n = 20;
  std::string set = "auto";
  double lo = -6.0;
  double hi = 6.0;
  double radius = 1.0;
  std::string noise = "none";
  double noise_scale = 1.0;
  double step_c = 2.0;
  double step_shift = 1.0;
  bool step_unscaled = false;
  std::int64_t horizon = 0;
  double x1 = 0.0;
  std::vector<std::string> schemes{"final", "uniform", "suffix", "nonuniform"};
  double suffix_alpha = 0.5;
  std::int64_t eval_every = 0;
  std::optional<std::uint64_t> seed;
};

void add_problem_options(CLI::App& cmd, ProblemOptions& o) {
  cmd.add_option("--problem", o.problem, "quadratic | svm | svm-synthetic")
      ->check(CLI::IsMember({"quadratic", "svm", "svm-synthetic"}));
  cmd.add_option("--dim", o.dim, "quadratic dimension")->check(CLI::PositiveNumber);
  cmd.add_option("--mu", o.mu, "quadratic curvature (strong-convexity modulus)");
  cmd.add_option("--data", o.data_path, "LIBSVM dataset for --problem svm");
  cmd.add_option("--n-features", o.n_features, "override dataset dimension");
  cmd.add_option("--lambda", o.lambda, "SVM regularization (default 1/m)");
  cmd.add_option("--scale", o.scale, "feature scaling: auto | sparse01 | standardize | none")
      ->check(CLI::IsMember({"auto", "sparse01", "standardize", "none"}));
  cmd.add_option("--synthetic-m", o.synthetic_m, "points for svm-synthetic")->check(CLI::PositiveNumber);
  cmd.add_option("--synthetic-n", o.synthetic_n, "features for svm-synthetic")->check(CLI::PositiveNumber);
  cmd.add_option("--set", o.set, "feasible set: auto | unconstrained | interval | ball")
      ->check(CLI::IsMember({"auto", "unconstrained", "interval", "ball"}));
  cmd.add_option("--lo", o.lo, "interval lower end");
  cmd.add_option("--hi", o.hi, "interval upper end");
  cmd.add_option("--radius", o.radius, "ball radius");
  cmd.add_option("--noise", o.noise, "quadratic noise: none | ball | gaussian")
      ->check(CLI::IsMember({"none", "ball", "gaussian"}));
  cmd.add_option("--noise-scale", o.noise_scale, "noise bound (ball) or scale (gaussian)");
  cmd.add_option("--step-c", o.step_c, "step numerator c");
  cmd.add_option("--step-shift", o.step_shift, "step shift a");
  cmd.add_flag("--step-unscaled", o.step_unscaled, "use c/(t+a) instead of c/(mu(t+a))");
  cmd.add_option("--T", o.horizon, "iterations")->required()->check(CLI::PositiveNumber);
  cmd.add_option("--x1", o.x1, "initial point (every coordinate)");
  cmd.add_option("--schemes", o.schemes, "final,uniform,suffix,nonuniform")
      ->delimiter(',')
      ->check(CLI::IsMember({"final", "uniform", "suffix", "nonuniform"}));
  cmd.add_option("--suffix-alpha", o.suffix_alpha, "suffix window fraction");
  cmd.add_option("--eval-every", o.eval_every, "checkpoint period (default: m for datasets, T/50 otherwise)");
  cmd.add_option("--seed", o.seed, "base seed")->envname("SGDAVG_SEED");
}

std::string effective_config(const std::string& sub, const ProblemOptions& o) {
  std::string s = fmt::format(
      "{} problem={} dim={} mu={} data={} n_features={} lambda={} scale={} synthetic={}x{} set={} "
      "lo={} hi={} radius={} noise={} noise_scale={} step=({},{},{}) T={} x1={} schemes={} "
      "suffix_alpha={} eval_every={} seed={}",
      sub, o.problem, o.dim, o.mu, o.data_path, o.n_features, o.lambda, o.scale, o.synthetic_m,
      o.synthetic_n, o.set, o.lo, o.hi, o.radius, o.noise, o.noise_scale, o.step_c, o.step_shift,
      o.step_unscaled ? "unscaled" : "mu-scaled", o.horizon, o.x1, fmt::join(o.schemes, ","),
      o.suffix_alpha, o.eval_every, o.seed ? fmt::format("{}", *o.seed) : "none");
  return s;
}

struct Setup {
  Problem problem;
  OracleFactory oracle_factory;
  RunConfig config;
  std::vector<Averager> schemes;
  bool gap_known = false;
};

Setup build_setup(const ProblemOptions& o) {
  Setup s;
  const bool is_svm = o.problem != "quadratic";
  const bool random = is_svm || o.noise != "none";
  if (random && !o.seed) {
    throw UsageError("--seed (or SGDAVG_SEED) is required for stochastic runs");
  }

  std::string set_kind = o.set;
  if (set_kind == "auto") set_kind = is_svm ? "unconstrained" : "interval";
  FeasibleSet set = set_kind == "interval" ? FeasibleSet::interval(o.lo, o.hi)
                    : set_kind == "ball"   ? FeasibleSet::ball(o.radius)
                                           : FeasibleSet::unconstrained();

  std::int64_t natural_eval = std::max<std::int64_t>(1, o.horizon / 50);
  std::size_t dim = o.dim;
  if (!is_svm) {
    NoiseModel noise = NoNoise{};
    if (o.noise == "ball") noise = BoundedUniformBall{o.noise_scale};
    if (o.noise == "gaussian") noise = GaussianNoise{o.noise_scale};
    validate(noise);
    s.problem = make_quadratic_problem(o.dim, std::move(set), o.mu);
    s.oracle_factory = quadratic_oracle_factory(noise, o.mu);
  } else {
    std::shared_ptr<Dataset> data;
    if (o.problem == "svm") {
      if (o.data_path.empty()) throw UsageError("--problem svm needs --data");
      std::optional<std::size_t> dim_override;
      if (o.n_features > 0) dim_override = o.n_features;
      Dataset raw = load_libsvm(o.data_path, dim_override);
      data = std::make_shared<Dataset>(scale_features(raw, parse_scale_mode(o.scale)).data);
    } else {
      RngStream gen(*o.seed, std::numeric_limits<std::uint64_t>::max());
      data = std::make_shared<Dataset>(make_separable_dataset(o.synthetic_m, o.synthetic_n, gen));
    }
    const double lambda = o.lambda > 0.0 ? o.lambda : 1.0 / static_cast<double>(data->size());
    s.problem = make_svm_problem(data, lambda, std::move(set));
    s.oracle_factory = svm_oracle_factory(data, lambda);
    natural_eval = static_cast<std::int64_t>(data->size());
    dim = data->dim();
  }
  s.gap_known = s.problem.optimum.has_value();

  s.config.horizon = o.horizon;
  s.config.schedule = StepSchedule(o.step_c, o.step_shift, !o.step_unscaled);
  s.config.x1 = Vector::filled(dim, o.x1);
  s.config.eval_every = o.eval_every > 0 ? o.eval_every : natural_eval;
  for (const auto& name : o.schemes) {
    s.schemes.push_back(Averager::from_name(name, o.suffix_alpha, o.horizon));
  }
  return s;
}

void dump_trajectory(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write trajectory file '{}'", path));
  const auto& traj = *rec.trajectory;
  const std::size_t n = traj.empty() ? 0 : traj.front().x.dim();
  out << "t";
  for (std::size_t j = 0; j < n; ++j) out << ",x" << j;
  for (std::size_t j = 0; j < n; ++j) out << ",ghat" << j;
  for (std::size_t j = 0; j < n; ++j) out << ",zhat" << j;
  out << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << k + 1;
    for (std::size_t j = 0; j < n; ++j) out << fmt::format(",{:.17g}", traj[k].x.at(j));
    for (std::size_t j = 0; j < n; ++j) out << fmt::format(",{:.17g}", traj[k].sample.ghat.at(j));
    for (std::size_t j = 0; j < n; ++j) {
      const auto& z = traj[k].sample.zhat;
      out << (z ? fmt::format(",{:.17g}", z->at(j)) : std::string(","));
    }
    out << '\n';
  }
}

int cmd_run(const ProblemOptions& o, const std::string& trajectory_path, std::ostream& out) {
  Setup s = build_setup(o);
  s.config.record_iterates = !trajectory_path.empty();
  auto oracle = s.oracle_factory(RngStream(o.seed.value_or(0), 0));
  const RunRecord rec = run_sgd(s.problem, *oracle, s.config, s.schemes);
  out << fmt::format("# {}\n", s.problem.id);
  out << fmt::format("{:<11} {}\n", "scheme", s.gap_known ? "gap" : "objective");
  for (const auto& a : s.schemes) {
    out << fmt::format("{:<11} {:.17g}\n", a.name(), s.problem.gap(rec.reported.at(a.name())));
  }
  if (!trajectory_path.empty()) dump_trajectory(rec, trajectory_path);
  return kExitOk;
}

struct TrialsOptions {
  std::size_t trials = 100;
  std::size_t workers = 0;
  std::string csv_path;
  std::string svg_path;
  std::vector<double> deltas{0.1, 0.05, 0.02, 0.01};
  bool deltas_given = false;
  std::string tail_scheme = "nonuniform";
  bool reproducible = false;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int cmd_trials(const ProblemOptions& o, const TrialsOptions& t, std::ostream& out) {
  Setup s = build_setup(o);
  if (!o.seed) throw UsageError("--seed (or SGDAVG_SEED) is required for trials");
  const std::size_t workers =
      t.workers > 0 ? t.workers : std::max(1u, std::thread::hardware_concurrency());
  const TrialMatrix m =
      run_trials(s.problem, s.oracle_factory, s.config, s.schemes, t.trials, *o.seed, workers);

  if (!t.csv_path.empty()) {
    std::vector<std::string> comments{"config: " + effective_config("trials", o) +
                                      fmt::format(" trials={}", t.trials)};
    if (!t.reproducible) comments.push_back("generated: " + utc_timestamp());
    export_csv(m, t.csv_path, comments);
  }
  if (!t.svg_path.empty()) {
    SvgOptions svg;
    svg.title = s.problem.id;
    if (o.problem != "quadratic") {
      svg.x_unit = static_cast<double>(s.config.eval_every);
      svg.x_label = "effective passes";
    }
    render_svg(m, {}, t.svg_path, svg);
  }

  out << fmt::format("# {} trials={} T={} seed={}\n", s.problem.id, t.trials, o.horizon, *o.seed);
  out << fmt::format("{:<11} {:>24} {:>24} {:>24}\n", "scheme", s.gap_known ? "mean_gap" : "mean_obj",
                     "median", "stddev");
  for (const auto& name : m.schemes()) {
    const auto g = m.final_gaps(name);
    out << fmt::format("{:<11} {:>24.17g} {:>24.17g} {:>24.17g}\n", name, sample_mean(g),
                       sample_median(g), sample_stddev(g));
  }

  if (std::find(m.schemes().begin(), m.schemes().end(), t.tail_scheme) != m.schemes().end()) {
    std::vector<double> deltas;
    const double min_delta = 2.0 / static_cast<double>(t.trials);
    for (double d : t.deltas) {
      if (d >= min_delta || t.deltas_given) deltas.push_back(d);
    }
    if (!deltas.empty()) {
      const TailReport tail = tail_fit(m, t.tail_scheme, deltas);
      out << fmt::format("tail fit ({}):\n", t.tail_scheme);
      out << fmt::format("{:>8} {:>24} {:>24} {:>24}\n", "delta", "quantile", "log(1/delta)/T", "ratio");
      for (const auto& r : tail.rows) {
        out << fmt::format("{:>8} {:>24.17g} {:>24.17g} {:>24.17g}\n", r.delta, r.quantile,
                           r.bound_shape, r.ratio);
      }
      out << fmt::format("fitted C = {:.17g}\n", tail.constant);
    } else {
      out << fmt::format("tail fit skipped: need trials >= {} for the requested deltas\n",
                         static_cast<int>(std::ceil(2.0 / t.deltas.back())));
    }
  }
  return kExitOk;
}

struct LbOptions {
  std::int64_t horizon = 0;
  bool exact = false;
  std::size_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::vector<double> deltas{0.1, 0.01};
  bool silence = false;
};

constexpr double kLbGapThreshold = 0.03;

int cmd_lb(const LbOptions& o, std::ostream& out) {
  if (o.horizon < 4 || o.horizon % 4 != 0) {
    throw UsageError(fmt::format("--T must be a positive multiple of 4 (got {})", o.horizon));
  }
  const bool exact_available = o.horizon <= kMaxExactLbHorizon;
  std::vector<LbOutcome> pmf;
  if (exact_available) pmf = lb_exact_distribution(o.horizon);

  if (o.exact || o.trials == 0) {
    if (!exact_available) {
      throw UsageError(fmt::format("exact enumeration needs T <= {}", kMaxExactLbHorizon));
    }
    out << fmt::format("exact law of f(report), T={}\n", o.horizon);
    out << "value  probability\n";
    for (const auto& row : pmf) out << row.value.str() << "  " << row.probability.str() << '\n';
  }

  const double T = static_cast<double>(o.horizon);
  for (double d : o.deltas) {
    if (!(d > 0.0 && d < 1.0)) throw UsageError(fmt::format("delta must be in (0,1) (got {})", d));
    const double threshold = std::log(1.0 / d) / (9.0 * T);
    if (exact_available) {
      const Rational p = lb_tail_probability(pmf, threshold);
      out << fmt::format("P[f >= log(1/delta)/(9T)] delta={} threshold={:.17g} exact={} ({:.17g})\n",
                         d, threshold, p.str(), p.to_double());
    }
  }

  if (o.trials == 0) return kExitOk;
  if (!o.seed) throw UsageError("--seed (or SGDAVG_SEED) is required with --trials");
  if (!exact_available) throw UsageError(fmt::format("simulation match needs T <= {}", kMaxExactLbHorizon));
  const LbMatchResult r = lb_simulate_and_match(o.horizon, o.trials, *o.seed, o.silence);
  for (double d : o.deltas) {
    const double threshold = std::log(1.0 / d) / (9.0 * T);
    const auto hits = std::count_if(r.objective_values.begin(), r.objective_values.end(),
                                    [&](double f) { return f >= threshold - 1e-12; });
    out << fmt::format("empirical P[f >= log(1/delta)/(9T)] delta={} : {:.17g}\n", d,
                       static_cast<double>(hits) / static_cast<double>(o.trials));
  }
  out << fmt::format("iterate identity max error: {:.3e}\n", r.max_iterate_identity_error);
  out << fmt::format("report identity max error: {:.3e}\n", r.max_report_identity_error);
  out << fmt::format("kolmogorov gap: {:.17g} (threshold {})\n", r.kolmogorov_gap, kLbGapThreshold);
  const bool ok = r.kolmogorov_gap <= kLbGapThreshold && r.max_iterate_identity_error <= 1e-12 &&
                  r.max_report_identity_error <= 1e-12;
  out << (ok ? "PASS\n" : "FAIL\n");
  return ok ? kExitOk : kExitFailure;
}

struct VerifyOptions {
  std::string only = "all";
  std::string report_path;
  bool perturb_beta_zero = false;
  std::size_t trajectories = 20;
  std::int64_t horizon = 2000;
  std::uint64_t seed = 2019;
};

struct Verdict {
  std::string name;
  bool passed;
  nlohmann::json detail;
};

std::vector<RunRecord> bounded_noise_fleet(const VerifyOptions& o, const Problem& problem) {
  RunConfig config;
  config.horizon = o.horizon;
  config.x1 = Vector::dense({3.0});
  config.record_iterates = true;
  config.eval_every = o.horizon;
  std::vector<RunRecord> fleet;
  for (std::size_t k = 0; k < o.trajectories; ++k) {
    QuadraticOracle oracle(BoundedUniformBall{1.0}, RngStream(o.seed, k));
    fleet.push_back(run_sgd(problem, oracle, config, {Averager::nonuniform()}));
  }
  return fleet;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const auto want = [&](const char* name) { return o.only == "all" || o.only == name; };
  std::vector<Verdict> verdicts;

  const Problem problem = make_quadratic_problem(1, FeasibleSet::interval(-6.0, 6.0));
  const bool needs_fleet = want("diameter") || want("recursive-bound") || want("chicken-and-egg");
  std::vector<RunRecord> fleet;
  if (needs_fleet) fleet = bounded_noise_fleet(o, problem);

  if (want("diameter")) {
    double worst = 0.0;
    for (const auto& rec : fleet) {
      worst = std::max(worst, verify_diameter_bound(*rec.trajectory, problem.optimum,
                                                    problem.lipschitz, problem.mu));
    }
    verdicts.push_back({"diameter", worst <= 1.0 + 1e-9, {{"worst_ratio", worst}}});
  }
  if (want("recursive-bound")) {
    bool ok = true;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& rec : fleet) {
      const auto c = verify_recursive_bound(*rec.trajectory, problem.optimum, problem.mu);
      ok = ok && c.passed;
      worst = std::min(worst, c.worst_normalized_slack);
    }
    // The lemma holds for any noise law; include one adversarial trajectory.
    const Problem lb_problem = make_quadratic_problem(1, FeasibleSet::interval(-6.0, 6.0));
    RunConfig lb_config;
    lb_config.horizon = 64;
    lb_config.schedule = StepSchedule::strongly_convex_default();
    lb_config.x1 = Vector::zeros(1);
    lb_config.record_iterates = true;
    lb_config.eval_every = 64;
    LowerBoundOracle lb_oracle(64, RngStream(o.seed, 1000));
    const auto lb_rec = run_sgd(lb_problem, lb_oracle, lb_config, {Averager::nonuniform()});
    const auto lb_check = verify_recursive_bound(*lb_rec.trajectory, lb_problem.optimum, 1.0);
    ok = ok && lb_check.passed;
    verdicts.push_back({"recursive-bound",
                        ok,
                        {{"worst_normalized_slack", worst},
                         {"adversarial_worst_normalized_slack", lb_check.worst_normalized_slack}}});
  }
  if (want("chicken-and-egg")) {
    bool ok = true;
    double worst = std::numeric_limits<double>::infinity();
    const double multiplier = o.perturb_beta_zero ? 0.0 : 1.0;
    for (const auto& rec : fleet) {
      const auto c = verify_chicken_and_egg(*rec.trajectory, problem.optimum, problem.mu,
                                            problem.lipschitz, multiplier);
      ok = ok && c.passed;
      worst = std::min(worst, c.beta > 0.0 ? c.slack / c.beta : c.slack);
    }
    verdicts.push_back({"chicken-and-egg", ok, {{"worst_slack_over_beta", worst},
                                                 {"beta_multiplier", multiplier}}});
  }
  if (want("product-identity")) {
    const double err = product_identity_sweep(200);
    verdicts.push_back({"product-identity", err <= 1e-12, {{"max_relative_error", err}, {"t_max", 200}}});
  }
  if (want("mgf")) {
    bool ok = true;
    nlohmann::json detail = nlohmann::json::array();
    for (std::size_t n : {std::size_t{1}, std::size_t{50}}) {
      RngStream rng(o.seed, 2000 + n);
      const double kappa = 2.0;
      const double est = empirical_mgf_check(GaussianNoise{1.0}, kappa, n, 1'000'000, rng);
      const double dn = static_cast<double>(n);
      const double closed = std::pow(1.0 - 2.0 / (dn * kappa * kappa), -dn / 2.0);
      const bool pass = std::abs(est - closed) <= 0.05 && est <= 2.0;
      ok = ok && pass;
      detail.push_back({{"n", n}, {"estimate", est}, {"closed_form", closed}, {"passed", pass}});
    }
    verdicts.push_back({"mgf", ok, detail});
  }
  if (verdicts.empty()) throw UsageError(fmt::format("unknown --only selection '{}'", o.only));

  bool all = true;
  nlohmann::json report;
  report["checks"] = nlohmann::json::array();
  for (const auto& v : verdicts) {
    out << fmt::format("{:<18} {}  {}\n", v.name, v.passed ? "PASS" : "FAIL", v.detail.dump());
    report["checks"].push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
    all = all && v.passed;
  }
  report["passed"] = all;
  if (!o.report_path.empty()) {
    std::ofstream f(o.report_path);
    if (!f) throw std::runtime_error(fmt::format("cannot write report '{}'", o.report_path));
    f << report.dump(2) << '\n';
  }
  out << (all ? "ALL PASS\n" : "FAILURES PRESENT\n");
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projected SGD with iterate averaging: runs, trial batches and verifiers", "sgdavg"};
  app.require_subcommand(1);

  ProblemOptions run_opts;
  std::string trajectory_path;
  auto* run = app.add_subcommand("run", "single SGD run; prints the final gap per scheme");
  add_problem_options(*run, run_opts);
  run->add_option("--trajectory", trajectory_path, "write the trajectory as CSV");

  ProblemOptions trial_problem;
  TrialsOptions trial_opts;
  auto* trials = app.add_subcommand("trials", "multi-trial batch with CSV/SVG output and tail fit");
  add_problem_options(*trials, trial_problem);
  trials->add_option("--trials", trial_opts.trials, "number of trials")->check(CLI::PositiveNumber);
  trials->add_option("--workers", trial_opts.workers, "worker threads (default: logical cores)")
      ->envname("SGDAVG_WORKERS");
  trials->add_option("--csv", trial_opts.csv_path, "CSV output path");
  trials->add_option("--svg", trial_opts.svg_path, "SVG output path");
  auto* deltas_opt = trials->add_option("--deltas", trial_opts.deltas, "tail-fit deltas")->delimiter(',');
  trials->add_option("--tail-scheme", trial_opts.tail_scheme, "scheme for the tail fit");
  trials->add_flag("--reproducible", trial_opts.reproducible, "omit the timestamp comment");

  LbOptions lb_opts;
  auto* lb = app.add_subcommand("lb", "exact and simulated law of the lower-bound construction");
  lb->add_option("--T", lb_opts.horizon, "horizon (multiple of 4)")->required();
  lb->add_flag("--exact", lb_opts.exact, "print the exact pmf");
  lb->add_option("--trials", lb_opts.trials, "simulated runs to compare with the exact law");
  lb->add_option("--seed", lb_opts.seed, "base seed")->envname("SGDAVG_SEED");
  lb->add_option("--delta", lb_opts.deltas, "deltas for P[f >= log(1/delta)/(9T)]")->delimiter(',');
  lb->add_flag("--silence-noise", lb_opts.silence, "zero the oracle noise (negative control)");

  VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "run the lemma verifier fleet");
  verify->add_option("--only", verify_opts.only,
                     "all | diameter | recursive-bound | chicken-and-egg | product-identity | mgf")
      ->check(CLI::IsMember(
          {"all", "diameter", "recursive-bound", "chicken-and-egg", "product-identity", "mgf"}));
  verify->add_option("--report", verify_opts.report_path, "write a JSON verdict report");
  verify->add_flag("--perturb-beta-zero", verify_opts.perturb_beta_zero,
                   "test hook: multiply beta by 0 (must fail)");

  std::vector<std::string> argv_storage{"sgdavg"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  trial_opts.deltas_given = deltas_opt->count() > 0;

  try {
    if (run->parsed()) return cmd_run(run_opts, trajectory_path, out);
    if (trials->parsed()) return cmd_trials(trial_problem, trial_opts, out);
    if (lb->parsed()) return cmd_lb(lb_opts, out);
    if (verify->parsed()) return cmd_verify(verify_opts, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sgdavg::cli

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <numeric>

#include "sgdavg/lower_bound.hpp"
#include "sgdavg/tail.hpp"
#include "sgdavg/trials.hpp"
#include "sgdavg/verifiers.hpp"

using namespace sgdavg;

namespace {

std::vector<Averager> all_schemes(std::int64_t T) {
  return {Averager::final_iterate(), Averager::uniform(), Averager::suffix(0.5, T),
          Averager::nonuniform()};
}

RunConfig quad_config(std::int64_t T, double x1, std::int64_t every) {
  RunConfig c;
  c.horizon = T;
  c.x1 = Vector::dense({x1});
  c.eval_every = every;
  return c;
}

std::vector<TrajectoryStep> bounded_noise_trajectory(std::uint64_t seed, std::int64_t T) {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  QuadraticOracle oracle(BoundedUniformBall{1.0}, RngStream(seed, 0));
  RunConfig c = quad_config(T, 3.0, T);
  c.record_iterates = true;
  return *run_sgd(p, oracle, c, {Averager::final_iterate()}).trajectory;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

class NanOracle final : public StochasticOracle {
 public:
  GradientSample query(const Vector&, std::int64_t) override {
    return {Vector::dense({std::numeric_limits<double>::quiet_NaN()}), std::nullopt, std::nullopt};
  }
};

}  // namespace

TEST_CASE("one trial matches a direct run") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  const RunConfig c = quad_config(200, 2.0, 20);
  const TrialMatrix m = run_trials(p, quadratic_oracle_factory(GaussianNoise{1.0}), c, all_schemes(200), 1, 31);
  QuadraticOracle oracle(GaussianNoise{1.0}, RngStream(31, 0));
  const RunRecord rec = run_sgd(p, oracle, c, all_schemes(200));
  REQUIRE(m.checkpoints().size() == rec.checkpoints.size());
  for (std::size_t k = 0; k < rec.checkpoints.size(); ++k) {
    CHECK(m.checkpoints()[k] == rec.checkpoints[k].iteration);
    for (std::size_t s = 0; s < m.schemes().size(); ++s) {
      const auto it = rec.checkpoints[k].objective.find(m.schemes()[s]);
      if (it == rec.checkpoints[k].objective.end()) {
        CHECK(std::isnan(m.at(0, k, s)));
      } else {
        CHECK(m.at(0, k, s) == it->second);
      }
    }
  }
}

TEST_CASE("trials are reproducible and independent of worker count") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  const RunConfig c = quad_config(500, 1.0, 50);
  const auto f = quadratic_oracle_factory(BoundedUniformBall{1.0});
  const TrialMatrix a = run_trials(p, f, c, all_schemes(500), 24, 99, 1);
  const TrialMatrix b = run_trials(p, f, c, all_schemes(500), 24, 99, 1);
  const TrialMatrix w = run_trials(p, f, c, all_schemes(500), 24, 99, 5);
  CHECK(a.same_values(b));
  CHECK(a.same_values(w));
  const TrialMatrix other = run_trials(p, f, c, all_schemes(500), 24, 100, 1);
  CHECK_FALSE(a.same_values(other));
  CHECK(a.meta().base_seed == 99);
  CHECK(a.meta().horizon == 500);
}

TEST_CASE("noiseless trials coincide") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  const TrialMatrix m =
      run_trials(p, quadratic_oracle_factory(NoNoise{}), quad_config(100, 5.0, 10), all_schemes(100), 8, 3, 3);
  for (std::size_t k = 0; k < m.checkpoints().size(); ++k) {
    for (std::size_t s = 0; s < m.schemes().size(); ++s) {
      for (std::size_t i = 1; i < 8; ++i) {
        const double x = m.at(0, k, s), y = m.at(i, k, s);
        CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
      }
    }
  }
}

TEST_CASE("a failing trial is reported with its index") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::unconstrained());
  std::atomic<int> calls{0};
  const OracleFactory f = [&](RngStream rng) -> std::unique_ptr<StochasticOracle> {
    if (calls++ == 2) return std::make_unique<NanOracle>();
    return std::make_unique<QuadraticOracle>(NoNoise{}, rng);
  };
  try {
    run_trials(p, f, quad_config(10, 1.0, 5), {Averager::final_iterate()}, 5, 1, 1);
    FAIL("expected TrialFailure");
  } catch (const TrialFailure& e) {
    CHECK(e.trial() == 2);
  }
}

TEST_CASE("empirical quantile") {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  std::reverse(xs.begin(), xs.end());
  CHECK(empirical_quantile(xs, 0.1) == 90.0);
  CHECK(empirical_quantile(xs, 0.01) == 99.0);
  CHECK(empirical_quantile(xs, 0.999) == 1.0);
  const std::vector<double> flat(17, 2.5);
  for (double d : {0.5, 0.1, 0.06}) CHECK(empirical_quantile(flat, d) == 2.5);
  CHECK_THROWS_AS(empirical_quantile(xs, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_quantile(xs, 1.0), std::invalid_argument);
  CHECK(sample_median(std::vector<double>{3.0, 1.0, 2.0}) == 2.0);
  CHECK(sample_stddev(std::vector<double>{1.0, 3.0}) == 1.0);
}

TEST_CASE("tail fit") {
  const std::int64_t T = 100;
  TrialMatrix zeros(50, {T}, {"nonuniform"}, TrialMeta{"q", T, 0, "s"});
  for (std::size_t i = 0; i < 50; ++i) zeros.at(i, 0, 0) = 0.0;
  CHECK(tail_fit(zeros, "nonuniform", {0.1, 0.05}).constant == 0.0);

  // gaps i/50 for i = 1..50: quantiles at 0.1 and 0.05 are 45/50 and 48/50
  TrialMatrix ramp(50, {T}, {"nonuniform"}, TrialMeta{"q", T, 0, "s"});
  for (std::size_t i = 0; i < 50; ++i) ramp.at(i, 0, 0) = static_cast<double>(i + 1) / 50.0;
  const TailReport r = tail_fit(ramp, "nonuniform", {0.1, 0.05});
  const double s1 = std::log(10.0) / T, s2 = std::log(20.0) / T;
  const double q1 = 0.9, q2 = 0.96;
  CHECK(r.rows[0].quantile == q1);
  CHECK(r.rows[1].quantile == q2);
  CHECK(r.constant == doctest::Approx((q1 * s1 + q2 * s2) / (s1 * s1 + s2 * s2)).epsilon(1e-12));
  CHECK(r.ratio_spread() == doctest::Approx(std::max(q1 / s1, q2 / s2) / std::min(q1 / s1, q2 / s2)));

  CHECK_THROWS_AS(tail_fit(ramp, "nonuniform", {0.01}), std::invalid_argument);
  TrialMatrix early(50, {T - 1}, {"nonuniform"}, TrialMeta{"q", T, 0, "s"});
  CHECK_THROWS_AS(tail_fit(early, "nonuniform", {0.1}), std::invalid_argument);
}

TEST_CASE("exact lower-bound law at T = 8") {
  const auto pmf = lb_exact_distribution(8);
  REQUIRE(pmf.size() == 2);
  CHECK(pmf[0].value == Rational(0, 1));
  CHECK(pmf[0].probability == Rational(1, 2));
  CHECK(pmf[1].value == Rational(1, 8));
  CHECK(pmf[1].probability == Rational(1, 2));
  CHECK(lb_tail_probability(pmf, 0.125) == Rational(1, 2));
  CHECK(lb_tail_probability(pmf, 0.0) == Rational(1, 1));
}

TEST_CASE("exact lower-bound law matches a binomial count") {
  for (std::int64_t T : {4, 8, 16, 32, 48}) {
    const int n = static_cast<int>(T / 4);
    const auto pmf = lb_exact_distribution(T);
    Rational total;
    for (const auto& o : pmf) total = total + o.probability;
    CHECK(total == Rational(1, 1));
    for (const auto& o : pmf) {
      double p = 0.0;
      for (int j = 0; j <= n; ++j) {
        const double k = 2.0 * j - n;
        if (std::abs(2.0 * k * k / static_cast<double>(T * T) - o.value.to_double()) < 1e-15) {
          p += binomial(n, j) / std::pow(2.0, n);
        }
      }
      CHECK(o.probability.to_double() == doctest::Approx(p).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(lb_exact_distribution(10), std::invalid_argument);
  CHECK_THROWS_AS(lb_exact_distribution(kMaxExactLbHorizon + 4), std::invalid_argument);
}

TEST_CASE("kolmogorov distance") {
  const auto pmf = lb_exact_distribution(8);
  CHECK(kolmogorov_distance(std::vector<double>{0.0, 0.125}, pmf) == 0.0);
  CHECK(kolmogorov_distance(std::vector<double>{0.0, 0.0, 0.0, 0.125 + 1e-12}, pmf) ==
        doctest::Approx(0.25));
  CHECK(kolmogorov_distance(std::vector<double>{0.0}, pmf) == doctest::Approx(0.5));
}

TEST_CASE("simulated lower bound matches the exact law") {
  const LbMatchResult r = lb_simulate_and_match(8, 4000, 7);
  CHECK(r.kolmogorov_gap <= 0.03);
  CHECK(r.max_iterate_identity_error <= 1e-12);
  CHECK(r.max_report_identity_error <= 1e-12);
  CHECK(r.objective_values.size() == 4000);

  const LbMatchResult silent = lb_simulate_and_match(8, 400, 7, true);
  CHECK(silent.kolmogorov_gap == doctest::Approx(0.5));
}

TEST_CASE("verifiers on a trajectory pinned at the optimum") {
  std::vector<TrajectoryStep> traj;
  for (int t = 0; t < 50; ++t) {
    traj.push_back({Vector::zeros(1), {Vector::zeros(1), Vector::zeros(1), Vector::zeros(1)}});
  }
  const Optimum opt{Vector::zeros(1), 0.0};
  CHECK(verify_diameter_bound(traj, opt, 6.0, 1.0) == 0.0);
  const auto rb = verify_recursive_bound(traj, opt, 1.0);
  CHECK(rb.passed);
  CHECK(rb.min_slack == 0.0);
  const auto ce = verify_chicken_and_egg(traj, opt, 1.0, 6.0);
  CHECK(ce.passed);
  CHECK(ce.slack == ce.beta);
}

TEST_CASE("product identity") {
  for (std::int64_t t = 3; t <= 40; ++t) CHECK(telescoping_product_coeff(t, t) == 1.0);
  CHECK(telescoping_product_coeff(3, 4) == doctest::Approx(0.2).epsilon(1e-15));
  for (std::int64_t i = 3; i < 60; ++i) {
    for (std::int64_t t = i; t < 60; ++t) {
      double literal = 1.0;
      for (std::int64_t j = i + 1; j <= t; ++j) literal *= 1.0 - 4.0 / static_cast<double>(j + 1);
      CHECK(telescoping_product_coeff(i, t) == doctest::Approx(literal).epsilon(1e-12));
    }
  }
  CHECK(product_identity_sweep(200) <= 1e-12);
  CHECK_THROWS_AS(telescoping_product_coeff(2, 5), std::invalid_argument);
}

TEST_CASE("bounded-noise fleet satisfies every inequality") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto traj = bounded_noise_trajectory(seed, 2000);
    CHECK(verify_diameter_bound(traj, p.optimum, p.lipschitz, p.mu) <= 1.0);
    CHECK(verify_diameter_bound(traj, p.optimum, p.lipschitz, p.mu) <= 0.5);
    const auto rb = verify_recursive_bound(traj, p.optimum, p.mu);
    CHECK(rb.passed);
    CHECK(rb.checked == 1996);
    const auto ce = verify_chicken_and_egg(traj, p.optimum, p.mu, p.lipschitz);
    CHECK(ce.passed);
    CHECK_FALSE(verify_chicken_and_egg(traj, p.optimum, p.mu, p.lipschitz, 0.0).passed);
  }
}

TEST_CASE("recursive bound holds on the adversarial instance") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    LowerBoundOracle oracle(64, RngStream(seed, 0));
    RunConfig c = quad_config(64, 0.0, 64);
    c.record_iterates = true;
    const auto rec = run_sgd(p, oracle, c, {Averager::nonuniform()});
    CHECK(verify_recursive_bound(*rec.trajectory, p.optimum, p.mu).passed);
  }
}

TEST_CASE("chicken-and-egg coefficients scale like T / mu") {
  for (std::int64_t T : {100, 500, 2000}) {
    const auto co = chicken_and_egg_coefficients(T, 1.0, 6.0);
    REQUIRE(co.alpha.size() == static_cast<std::size_t>(T));
    CHECK(co.alpha[0] == 0.0);
    CHECK(co.alpha[1] == 0.0);
    CHECK(co.alpha.back() == 0.0);
    const double max_alpha = *std::max_element(co.alpha.begin(), co.alpha.end());
    CHECK(max_alpha / static_cast<double>(T) <= 16.0);
    CHECK(co.beta > 0.0);
  }
}

TEST_CASE("verifier preconditions") {
  const auto traj = bounded_noise_trajectory(1, 20);
  CHECK_THROWS_AS(verify_diameter_bound(traj, std::nullopt, 6.0, 1.0), std::invalid_argument);
  const Optimum opt{Vector::zeros(1), 0.0};
  CHECK_THROWS_AS(verify_diameter_bound(traj, opt, std::numeric_limits<double>::infinity(), 1.0),
                  std::invalid_argument);
  std::vector<TrajectoryStep> no_split = traj;
  for (auto& s : no_split) s.sample.zhat.reset();
  CHECK_THROWS_AS(verify_recursive_bound(no_split, opt, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_recursive_bound(std::span(traj).first(4), opt, 1.0), std::invalid_argument);
}

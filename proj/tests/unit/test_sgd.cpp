#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>

#include "sgdavg/sgd.hpp"

using namespace sgdavg;

namespace {

std::vector<Averager> all_schemes(std::int64_t T) {
  return {Averager::final_iterate(), Averager::uniform(), Averager::suffix(0.5, T),
          Averager::nonuniform()};
}

RunConfig config_1d(std::int64_t T, double x1) {
  RunConfig c;
  c.horizon = T;
  c.x1 = Vector::dense({x1});
  c.record_iterates = true;
  return c;
}

class NanAfter final : public StochasticOracle {
 public:
  explicit NanAfter(std::int64_t t) : bad_t_(t) {}
  GradientSample query(const Vector& x, std::int64_t t) override {
    const double v = t >= bad_t_ ? std::numeric_limits<double>::quiet_NaN() : x.at(0);
    return {Vector::dense({v}), std::nullopt, std::nullopt};
  }

 private:
  std::int64_t bad_t_;
};

}  // namespace

TEST_CASE("single exact step") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::unconstrained());
  QuadraticOracle oracle(NoNoise{}, RngStream(0, 0));
  const RunRecord rec = run_sgd(p, oracle, config_1d(1, 1.0), all_schemes(1));
  CHECK(rec.last_point == Vector::dense({0.0}));
  for (const auto& [name, v] : rec.reported) CHECK(v == Vector::dense({1.0}));
  REQUIRE(rec.trajectory->size() == 1);
  CHECK(rec.trajectory->front().x == Vector::dense({1.0}));
}

TEST_CASE("three hand-unrolled steps") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  QuadraticOracle oracle(NoNoise{}, RngStream(0, 0));
  const RunRecord rec = run_sgd(p, oracle, config_1d(3, 1.0), all_schemes(3));
  const auto& traj = *rec.trajectory;
  CHECK(traj[1].x.at(0) == 0.0);
  CHECK(traj[2].x.at(0) == 0.0);
  CHECK(rec.last_point.at(0) == 0.0);
  CHECK(rec.reported.at("nonuniform").at(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(rec.reported.at("uniform").at(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rec.reported.at("final").at(0) == 0.0);
  CHECK(rec.reported.at("suffix").at(0) == 0.0);  // window {2, 3}
}

TEST_CASE("lower-bound trajectory is the running noise average") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LowerBoundOracle oracle(8, RngStream(seed, 0));
    RunConfig c = config_1d(8, 0.0);
    c.schedule = StepSchedule::lower_bound();
    const RunRecord rec = run_sgd(p, oracle, c, {Averager::nonuniform()});
    double zsum = 0.0;
    for (std::size_t k = 0; k < rec.trajectory->size(); ++k) {
      const auto& step = (*rec.trajectory)[k];
      CHECK(std::abs(step.x.at(0) - zsum / static_cast<double>(k + 1)) <= 1e-12);
      zsum += step.sample.zhat->at(0);
    }
  }
}

TEST_CASE("iterates stay feasible") {
  const Problem p = make_quadratic_problem(2, FeasibleSet::ball(0.5));
  QuadraticOracle oracle(GaussianNoise{50.0}, RngStream(3, 0));
  RunConfig c;
  c.horizon = 2000;
  c.x1 = Vector::dense({0.3, 0.1});
  c.record_iterates = true;
  const RunRecord rec = run_sgd(p, oracle, c, {Averager::final_iterate()});
  for (const auto& step : *rec.trajectory) {
    CHECK(distance(step.x, project(p.feasible, step.x)) <= 1e-12);
  }
}

TEST_CASE("runs are deterministic") {
  const Problem p = make_quadratic_problem(3, FeasibleSet::interval(-2, 2));
  RunConfig c;
  c.horizon = 500;
  c.x1 = Vector::filled(3, 1.0);
  c.record_iterates = true;
  c.eval_every = 50;
  auto run_once = [&] {
    QuadraticOracle oracle(BoundedUniformBall{1.0}, RngStream(77, 3));
    return run_sgd(p, oracle, c, all_schemes(500));
  };
  const RunRecord a = run_once();
  const RunRecord b = run_once();
  CHECK(a.reported == b.reported);
  CHECK(a.last_point == b.last_point);
  REQUIRE(a.checkpoints.size() == b.checkpoints.size());
  for (std::size_t k = 0; k < a.checkpoints.size(); ++k) {
    CHECK(a.checkpoints[k].iteration == b.checkpoints[k].iteration);
    CHECK(a.checkpoints[k].objective == b.checkpoints[k].objective);
  }
  for (std::size_t k = 0; k < a.trajectory->size(); ++k) {
    CHECK((*a.trajectory)[k].x == (*b.trajectory)[k].x);
    CHECK((*a.trajectory)[k].sample.ghat == (*b.trajectory)[k].sample.ghat);
  }
}

TEST_CASE("noiseless quadratic gap is non-increasing") {
  const Problem p = make_quadratic_problem(3, FeasibleSet::unconstrained(), 1.0);
  for (const StepSchedule& s : {StepSchedule::strongly_convex_default(), StepSchedule(1.0, 3.0, true)}) {
    QuadraticOracle oracle(NoNoise{}, RngStream(0, 0));
    RunConfig c;
    c.horizon = 300;
    c.schedule = s;
    c.x1 = Vector::dense({4.0, -3.0, 1.0});
    c.record_iterates = true;
    const RunRecord rec = run_sgd(p, oracle, c, {Averager::final_iterate()});
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& step : *rec.trajectory) {
      const double gap = p.gap(step.x);
      CHECK(gap <= prev);
      prev = gap;
    }
  }
}

TEST_CASE("replaying recorded steps reproduces the trajectory") {
  const Problem p = make_quadratic_problem(2, FeasibleSet::interval(-1, 1));
  QuadraticOracle oracle(GaussianNoise{3.0}, RngStream(5, 1));
  RunConfig c;
  c.horizon = 1000;
  c.x1 = Vector::dense({0.5, -0.5});
  c.record_iterates = true;
  const RunRecord rec = run_sgd(p, oracle, c, {Averager::nonuniform()});
  const auto& traj = *rec.trajectory;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector next = sgd_step(p, c.schedule, traj[k].x, traj[k].sample.ghat,
                                 static_cast<std::int64_t>(k + 1));
    CHECK(next == (k + 1 < traj.size() ? traj[k + 1].x : rec.last_point));
  }
}

TEST_CASE("non-finite iterates abort the run") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::unconstrained());
  NanAfter oracle(7);
  try {
    run_sgd(p, oracle, config_1d(20, 1.0), {Averager::final_iterate()});
    FAIL("expected RunAborted");
  } catch (const RunAborted& e) {
    CHECK(e.iteration() == 7);
    CHECK(std::string(e.what()).find("iteration 7") != std::string::npos);
  }
}

TEST_CASE("invalid configurations are rejected") {
  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-1, 1));
  QuadraticOracle oracle(NoNoise{}, RngStream(0, 0));
  CHECK_THROWS_AS(run_sgd(p, oracle, config_1d(5, 2.0), {Averager::final_iterate()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_sgd(p, oracle, config_1d(5, 0.5), {}), std::invalid_argument);
  CHECK_THROWS_AS(run_sgd(p, oracle, config_1d(0, 0.5), {Averager::final_iterate()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      run_sgd(p, oracle, config_1d(5, 0.5), {Averager::final_iterate(), Averager::final_iterate()}),
      std::invalid_argument);
}

TEST_CASE("checkpoints follow eval-every and always include T") {
  CHECK(checkpoint_iterations(10, 3) == std::vector<std::int64_t>{3, 6, 9, 10});
  CHECK(checkpoint_iterations(9, 3) == std::vector<std::int64_t>{3, 6, 9});
  CHECK(checkpoint_iterations(2, 5) == std::vector<std::int64_t>{2});

  const Problem p = make_quadratic_problem(1, FeasibleSet::interval(-6, 6));
  QuadraticOracle oracle(NoNoise{}, RngStream(0, 0));
  RunConfig c = config_1d(10, 1.0);
  c.eval_every = 3;
  const RunRecord rec = run_sgd(p, oracle, c, all_schemes(10));
  REQUIRE(rec.checkpoints.size() == 4);
  CHECK(rec.checkpoints[0].objective.count("suffix") == 0);  // window opens at t = 6
  CHECK(rec.checkpoints[1].objective.count("suffix") == 1);
  CHECK(rec.checkpoints[0].objective.at("nonuniform") ==
        doctest::Approx(p.objective(Vector::dense({1.0 / 6.0}))));
}

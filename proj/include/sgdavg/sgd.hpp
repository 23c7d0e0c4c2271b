#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgdavg/averaging.hpp"
#include "sgdavg/oracles.hpp"
#include "sgdavg/problem.hpp"
#include "sgdavg/schedule.hpp"

namespace sgdavg {

struct RunConfig {
  std::int64_t horizon = 1;
  StepSchedule schedule = StepSchedule::strongly_convex_default();
  Vector x1;
  /// Keep (x_t, sample_t) for every t. O(T n) memory; meant for verifier runs.
  bool record_iterates = false;
  std::int64_t eval_every = 1;
};

struct Checkpoint {
  std::int64_t iteration;
  /// Full objective of each scheme's current report. Schemes without a report
  /// yet (a suffix window that has not opened) are absent.
  std::map<std::string, double> objective;
};

struct TrajectoryStep {
  Vector x;
  GradientSample sample;
};

struct RunRecord {
  std::map<std::string, Vector> reported;
  std::vector<Checkpoint> checkpoints;
  std::optional<std::vector<TrajectoryStep>> trajectory;
  /// x_{T+1}, the iterate after the last update.
  Vector last_point;
};

/// Raised when an oracle fails or an iterate becomes non-finite.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(std::int64_t iteration, const std::string& why);
  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

/// Throws std::invalid_argument if the config is inconsistent with the problem.
void validate(const RunConfig& config, const Problem& problem);

/// Checkpoint iterations: every multiple of eval_every, plus T itself.
std::vector<std::int64_t> checkpoint_iterations(std::int64_t horizon, std::int64_t eval_every);

/// Projected stochastic subgradient descent for exactly T oracle queries:
///   y_{t+1} = x_t - eta_t ghat_t,  x_{t+1} = Proj(y_{t+1}).
/// Every averager observes x_t before the update, so reports cover x_1..x_T.
RunRecord run_sgd(const Problem& problem, StochasticOracle& oracle, const RunConfig& config,
                  std::vector<Averager> schemes);

/// One update step, exposed so recorded trajectories can be replayed.
Vector sgd_step(const Problem& problem, const StepSchedule& schedule, const Vector& x,
                const Vector& ghat, std::int64_t t);

}  // namespace sgdavg

#include "sgdavg/sgd.hpp"

#include <set>

#include <fmt/format.h>

namespace sgdavg {

RunAborted::RunAborted(std::int64_t iteration, const std::string& why)
    : std::runtime_error(fmt::format("run aborted at iteration {}: {}", iteration, why)),
      iteration_(iteration) {}

void validate(const RunConfig& config, const Problem& problem) {
  if (config.horizon < 1) throw std::invalid_argument("run config: T must be >= 1");
  if (config.eval_every < 1) throw std::invalid_argument("run config: eval-every must be >= 1");
  if (config.x1.dim() == 0) throw std::invalid_argument("run config: x1 is empty");
  if (!contains(problem.feasible, config.x1)) {
    throw std::invalid_argument(
        fmt::format("run config: x1 is not in the feasible set {}", problem.feasible.describe()));
  }
}

std::vector<std::int64_t> checkpoint_iterations(std::int64_t horizon, std::int64_t eval_every) {
  std::vector<std::int64_t> out;
  for (std::int64_t t = eval_every; t <= horizon; t += eval_every) out.push_back(t);
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

Vector sgd_step(const Problem& problem, const StepSchedule& schedule, const Vector& x,
                const Vector& ghat, std::int64_t t) {
  Vector y = x.to_dense();
  axpy(-step_size(schedule, problem.mu, t), ghat, y);
  return project(problem.feasible, y);
}

RunRecord run_sgd(const Problem& problem, StochasticOracle& oracle, const RunConfig& config,
                  std::vector<Averager> schemes) {
  validate(config, problem);
  if (schemes.empty()) throw std::invalid_argument("run_sgd: at least one averaging scheme required");
  {
    std::set<std::string> names;
    for (const auto& s : schemes) {
      if (!names.insert(s.name()).second) {
        throw std::invalid_argument(fmt::format("run_sgd: duplicate scheme '{}'", s.name()));
      }
    }
  }

  RunRecord record;
  if (config.record_iterates) {
    record.trajectory.emplace();
    record.trajectory->reserve(static_cast<std::size_t>(config.horizon));
  }

  Vector x = config.x1.to_dense();
  const auto evals = checkpoint_iterations(config.horizon, config.eval_every);
  std::size_t next_eval = 0;
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    for (auto& s : schemes) s.observe(x, t);

    GradientSample sample;
    try {
      sample = oracle.query(x, t);
    } catch (const std::exception& e) {
      throw RunAborted(t, fmt::format("oracle failure: {}", e.what()));
    }
    if (!all_finite(sample.ghat)) throw RunAborted(t, "oracle returned a non-finite subgradient");

    Vector next = sgd_step(problem, config.schedule, x, sample.ghat, t);
    if (!all_finite(next)) throw RunAborted(t, "non-finite iterate");

    if (next_eval < evals.size() && t == evals[next_eval]) {
      Checkpoint cp{t, {}};
      for (const auto& s : schemes) {
        if (s.has_report()) cp.objective.emplace(s.name(), problem.objective(s.report()));
      }
      record.checkpoints.push_back(std::move(cp));
      ++next_eval;
    }

    if (record.trajectory) record.trajectory->push_back({std::move(x), std::move(sample)});
    x = std::move(next);
  }

  for (const auto& s : schemes) record.reported.emplace(s.name(), s.report());
  record.last_point = std::move(x);
  return record;
}

}  // namespace sgdavg

#include "sgdavg/trials.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include <fmt/format.h>

namespace sgdavg {

TrialMatrix::TrialMatrix(std::size_t trials, std::vector<std::int64_t> checkpoints,
                         std::vector<std::string> schemes, TrialMeta meta)
    : trials_(trials),
      checkpoints_(std::move(checkpoints)),
      schemes_(std::move(schemes)),
      meta_(std::move(meta)),
      gaps_(trials_ * checkpoints_.size() * schemes_.size(),
            std::numeric_limits<double>::quiet_NaN()) {}

std::size_t TrialMatrix::index(std::size_t trial, std::size_t checkpoint, std::size_t scheme) const {
  if (trial >= trials_ || checkpoint >= checkpoints_.size() || scheme >= schemes_.size()) {
    throw std::out_of_range("TrialMatrix index");
  }
  return (trial * checkpoints_.size() + checkpoint) * schemes_.size() + scheme;
}

double& TrialMatrix::at(std::size_t trial, std::size_t checkpoint, std::size_t scheme) {
  return gaps_[index(trial, checkpoint, scheme)];
}

double TrialMatrix::at(std::size_t trial, std::size_t checkpoint, std::size_t scheme) const {
  return gaps_[index(trial, checkpoint, scheme)];
}

std::size_t TrialMatrix::scheme_index(const std::string& name) const {
  const auto it = std::find(schemes_.begin(), schemes_.end(), name);
  if (it == schemes_.end()) throw std::invalid_argument(fmt::format("scheme '{}' not in matrix", name));
  return static_cast<std::size_t>(it - schemes_.begin());
}

std::vector<double> TrialMatrix::across_trials(std::size_t checkpoint, std::size_t scheme) const {
  std::vector<double> out(trials_);
  for (std::size_t i = 0; i < trials_; ++i) out[i] = at(i, checkpoint, scheme);
  return out;
}

std::vector<double> TrialMatrix::final_gaps(const std::string& scheme) const {
  if (checkpoints_.empty()) throw std::invalid_argument("TrialMatrix has no checkpoints");
  return across_trials(checkpoints_.size() - 1, scheme_index(scheme));
}

bool TrialMatrix::same_values(const TrialMatrix& other) const {
  if (trials_ != other.trials_ || checkpoints_ != other.checkpoints_ || schemes_ != other.schemes_) {
    return false;
  }
  for (std::size_t k = 0; k < gaps_.size(); ++k) {
    const double a = gaps_[k];
    const double b = other.gaps_[k];
    if (!(a == b || (std::isnan(a) && std::isnan(b)))) return false;
  }
  return true;
}

TrialFailure::TrialFailure(std::size_t trial, std::uint64_t seed, const std::string& why)
    : std::runtime_error(fmt::format("trial {} (seed {}) failed: {}", trial, seed, why)),
      trial_(trial) {}

TrialMatrix run_trials(const Problem& problem, const OracleFactory& oracle_factory,
                       const RunConfig& config, const std::vector<Averager>& schemes,
                       std::size_t trials, std::uint64_t base_seed, std::size_t workers) {
  if (trials == 0) throw std::invalid_argument("run_trials: trials must be >= 1");
  validate(config, problem);
  if (schemes.empty()) throw std::invalid_argument("run_trials: at least one scheme required");

  std::vector<std::string> names;
  for (const auto& s : schemes) names.push_back(s.name());
  TrialMeta meta{problem.id, config.horizon, base_seed, config.schedule.describe()};
  TrialMatrix matrix(trials, checkpoint_iterations(config.horizon, config.eval_every), names, meta);

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::optional<std::pair<std::size_t, std::string>> failure;

  auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        auto oracle = oracle_factory(RngStream(base_seed, i));
        RunConfig trial_config = config;
        trial_config.record_iterates = false;
        const RunRecord rec = run_sgd(problem, *oracle, trial_config, schemes);
        for (std::size_t c = 0; c < rec.checkpoints.size(); ++c) {
          for (std::size_t s = 0; s < names.size(); ++s) {
            const auto it = rec.checkpoints[c].objective.find(names[s]);
            if (it == rec.checkpoints[c].objective.end()) continue;
            matrix.at(i, c, s) = problem.optimum ? it->second - problem.optimum->value : it->second;
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure || i < failure->first) failure.emplace(i, e.what());
      }
    }
  };

  const std::size_t n_workers = std::clamp<std::size_t>(workers, 1, trials);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) throw TrialFailure(failure->first, base_seed, failure->second);
  return matrix;
}

}  // namespace sgdavg

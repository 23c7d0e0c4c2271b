#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgdavg/averaging.hpp"
#include "sgdavg/oracles.hpp"
#include "sgdavg/problem.hpp"
#include "sgdavg/sgd.hpp"

namespace sgdavg {

struct TrialMeta {
  std::string problem_id;
  std::int64_t horizon = 0;
  std::uint64_t base_seed = 0;
  std::string schedule;
};

/// trials x checkpoints x schemes array of objective gaps (f(report) - f*, or
/// the raw objective when f* is unknown). Cells for a suffix scheme before its
/// window opens hold NaN.
class TrialMatrix {
 public:
  TrialMatrix() = default;
  TrialMatrix(std::size_t trials, std::vector<std::int64_t> checkpoints,
              std::vector<std::string> schemes, TrialMeta meta);

  std::size_t trials() const { return trials_; }
  const std::vector<std::int64_t>& checkpoints() const { return checkpoints_; }
  const std::vector<std::string>& schemes() const { return schemes_; }
  const TrialMeta& meta() const { return meta_; }

  double& at(std::size_t trial, std::size_t checkpoint, std::size_t scheme);
  double at(std::size_t trial, std::size_t checkpoint, std::size_t scheme) const;

  /// Throws std::invalid_argument for an unknown scheme name.
  std::size_t scheme_index(const std::string& name) const;
  /// Values across trials at one cell position.
  std::vector<double> across_trials(std::size_t checkpoint, std::size_t scheme) const;
  std::vector<double> final_gaps(const std::string& scheme) const;

  /// Cell-wise equality treating NaN == NaN; metadata is not compared.
  bool same_values(const TrialMatrix& other) const;

 private:
  std::size_t index(std::size_t trial, std::size_t checkpoint, std::size_t scheme) const;

  std::size_t trials_ = 0;
  std::vector<std::int64_t> checkpoints_;
  std::vector<std::string> schemes_;
  TrialMeta meta_;
  std::vector<double> gaps_;
};

class TrialFailure : public std::runtime_error {
 public:
  TrialFailure(std::size_t trial, std::uint64_t seed, const std::string& why);
  std::size_t trial() const { return trial_; }

 private:
  std::size_t trial_;
};

/// Runs `trials` independent runs, trial i drawing from RngStream(base_seed, i).
/// Results are slot-addressed, so the matrix does not depend on `workers`.
TrialMatrix run_trials(const Problem& problem, const OracleFactory& oracle_factory,
                       const RunConfig& config, const std::vector<Averager>& schemes,
                       std::size_t trials, std::uint64_t base_seed, std::size_t workers = 1);

}  // namespace sgdavg

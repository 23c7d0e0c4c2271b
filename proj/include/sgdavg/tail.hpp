#pragma once

#include <span>
#include <string>
#include <vector>

#include "sgdavg/trials.hpp"

namespace sgdavg {

/// Nearest-rank upper quantile: the sorted sample's element at 1-based rank
/// ceil((1 - delta) N), clamped to [1, N]. Requires 0 < delta < 1.
double empirical_quantile(std::span<const double> sample, double delta);

double sample_median(std::span<const double> sample);
double sample_mean(std::span<const double> sample);
/// Population standard deviation.
double sample_stddev(std::span<const double> sample);

struct TailRow {
  double delta;
  double quantile;
  /// log(1/delta) / T
  double bound_shape;
  double ratio;
};

struct TailReport {
  std::vector<TailRow> rows;
  /// Least-squares C through the origin for quantile ~ C log(1/delta)/T.
  double constant = 0.0;

  /// max ratio / min ratio over the rows.
  double ratio_spread() const;
};

/// Uses the final checkpoint, which must be iteration T. Each delta must be
/// at least 2 / trials.
TailReport tail_fit(const TrialMatrix& m, const std::string& scheme,
                    const std::vector<double>& deltas);

}  // namespace sgdavg

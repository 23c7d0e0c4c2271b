#include "sgdavg/tail.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

double empirical_quantile(std::span<const double> sample, double delta) {
  if (sample.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(fmt::format("empirical_quantile: delta must be in (0,1) (got {})", delta));
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - delta) * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double sample_median(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("sample_median: empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

double sample_mean(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("sample_mean: empty sample");
  double mean = 0.0;
  std::size_t k = 0;
  for (double v : sample) mean += (v - mean) / static_cast<double>(++k);
  return mean;
}

double sample_stddev(std::span<const double> sample) {
  const double mean = sample_mean(sample);
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(sample.size()));
}

double TailReport::ratio_spread() const {
  if (rows.empty()) return 1.0;
  double lo = rows.front().ratio;
  double hi = lo;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  if (hi == 0.0) return 1.0;
  return hi / lo;
}

TailReport tail_fit(const TrialMatrix& m, const std::string& scheme,
                    const std::vector<double>& deltas) {
  if (m.checkpoints().empty() || m.checkpoints().back() != m.meta().horizon) {
    throw std::invalid_argument("tail_fit: final checkpoint must be iteration T");
  }
  const double min_delta = 2.0 / static_cast<double>(m.trials());
  for (double d : deltas) {
    if (!(d >= min_delta && d < 1.0)) {
      throw std::invalid_argument(fmt::format(
          "tail_fit: delta {} not resolvable with {} trials (minimum feasible delta {})", d,
          m.trials(), min_delta));
    }
  }
  const std::vector<double> gaps = m.final_gaps(scheme);
  const double T = static_cast<double>(m.meta().horizon);

  TailReport report;
  double sxy = 0.0;
  double sxx = 0.0;
  for (double d : deltas) {
    TailRow row{};
    row.delta = d;
    row.quantile = empirical_quantile(gaps, d);
    row.bound_shape = std::log(1.0 / d) / T;
    row.ratio = row.quantile / row.bound_shape;
    sxy += row.bound_shape * row.quantile;
    sxx += row.bound_shape * row.bound_shape;
    report.rows.push_back(row);
  }
  report.constant = sxx > 0.0 ? sxy / sxx : 0.0;
  return report;
}

}  // namespace sgdavg

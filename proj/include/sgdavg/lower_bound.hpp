#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sgdavg {

/// Non-negative exact fraction, always stored in lowest terms.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);
};

struct LbOutcome {
  Rational value;        // f of the non-uniform report
  Rational probability;
};

/// Largest horizon accepted by lb_exact_distribution (2^15 sign patterns).
inline constexpr std::int64_t kMaxExactLbHorizon = 60;

/// Exact law of f(non-uniform report) under the adversarial oracle with
/// eta_t = 1/(t+1), x_1 = 0 on f = x^2/2. Enumerates every sign pattern of
/// X_{T/2+1..3T/4}; the report equals half their mean. Sorted by value.
std::vector<LbOutcome> lb_exact_distribution(std::int64_t horizon);

/// P[f >= threshold] under the exact law.
Rational lb_tail_probability(const std::vector<LbOutcome>& pmf, double threshold);

/// sup_x |F_sample(x) - F_pmf(x)|. Sample values within `snap_tol` of a support
/// point are treated as that point.
double kolmogorov_distance(std::span<const double> sample, const std::vector<LbOutcome>& pmf,
                           double snap_tol = 1e-9);

struct LbMatchResult {
  double kolmogorov_gap = 0.0;
  /// max |x_t - (1/t) sum_{i<t} zhat_i| over every trial and t.
  double max_iterate_identity_error = 0.0;
  /// max |report - (1/2) mean(X)| over every trial.
  double max_report_identity_error = 0.0;
  std::vector<double> objective_values;
};

/// Runs the full SGD pipeline on the lower-bound instance (trial i uses
/// RngStream(base_seed, i)) and compares f(non-uniform report) with the exact
/// law. `silence_noise` zeroes the oracle noise as a negative control.
LbMatchResult lb_simulate_and_match(std::int64_t horizon, std::size_t trials,
                                    std::uint64_t base_seed, bool silence_noise = false);

}  // namespace sgdavg

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sgdavg/problem.hpp"
#include "sgdavg/sgd.hpp"

namespace sgdavg {

// Numeric checks of the probability-one inequalities behind the high-probability
// analysis, evaluated along recorded trajectories x_1..x_T (trajectory[k] holds
// x_{k+1}). All of them require a known optimum.

/// max_t ||x_t - x*|| / (2L/mu). Passes when <= 1 + 1e-9.
double verify_diameter_bound(std::span<const TrajectoryStep> trajectory,
                             const std::optional<Optimum>& optimum, double lipschitz, double mu);

/// prod_{j=i+1}^t (1 - 4/(j+1)) in closed form
/// (i-2)(i-1)i(i+1) / ((t-2)(t-1)t(t+1)). Requires 3 <= i <= t.
double telescoping_product_coeff(std::int64_t i, std::int64_t t);
/// The same product multiplied out term by term.
double telescoping_product_literal(std::int64_t i, std::int64_t t);

/// Max relative error between the two product routes over 3 <= i < t <= t_max.
double product_identity_sweep(std::int64_t t_max);

struct RecursiveBoundCheck {
  double min_slack = 0.0;
  /// Minimum of slack / scale over the checked t.
  double worst_normalized_slack = 0.0;
  std::int64_t worst_t = 0;
  std::int64_t checked = 0;
  bool passed = true;
};

/// For every 4 <= t <= T-1 checks
///   ||x_{t+1} - x*||^2 <= (4/mu) sum_{i=3}^t a_i(t) <zhat_i, x_i - x*>
///                        + (4/mu^2) sum_{i=3}^t b_i(t) ||ghat_i||^2
/// with a_i(t) = c(i,t)/(i+1), b_i(t) = c(i,t)/(i+1)^2. The tolerance is
/// -1e-9 times the sum of absolute term magnitudes at that t.
RecursiveBoundCheck verify_recursive_bound(std::span<const TrajectoryStep> trajectory,
                                           const std::optional<Optimum>& optimum, double mu);

struct ChickenEggCoefficients {
  /// alpha[i-1] for i = 1..T; alpha_1 = alpha_2 = alpha_T = 0.
  std::vector<double> alpha;
  double beta = 0.0;
};

/// alpha_i = (4/mu) sum_{t=i+1}^T t^2 a_i(t-1) / i for 3 <= i <= T-1, and
/// beta = (4(L+1)^2/mu^2) sum_{t=4}^T t^2 sum_{i=3}^{t-1} b_i(t-1) + 56 L^2/mu^2.
ChickenEggCoefficients chicken_and_egg_coefficients(std::int64_t horizon, double mu,
                                                    double lipschitz);

struct ChickenEggCheck {
  /// sum_t t^2 ||x_t - x*||^2
  double total_conditional_variance = 0.0;
  double weighted_increments = 0.0;
  double beta = 0.0;
  double max_alpha = 0.0;
  double slack = 0.0;
  bool passed = true;
};

/// Checks V_T <= sum_i alpha_i d_i + beta with d_i = i <zhat_i, x_i - x*>.
/// Assumes ||zhat|| <= 1. `beta_multiplier` exists for negative-control tests.
ChickenEggCheck verify_chicken_and_egg(std::span<const TrajectoryStep> trajectory,
                                       const std::optional<Optimum>& optimum, double mu,
                                       double lipschitz, double beta_multiplier = 1.0);

}  // namespace sgdavg

#include "sgdavg/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

const Optimum& require_optimum(const std::optional<Optimum>& optimum) {
  if (!optimum) throw std::invalid_argument("verifier requires a known optimum x*");
  return *optimum;
}

void require_decomposition(std::span<const TrajectoryStep> trajectory) {
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    if (!trajectory[k].sample.zhat) {
      throw std::invalid_argument(
          fmt::format("trajectory step {} lacks the noise decomposition", k + 1));
    }
  }
}

// <zhat_i, x_i - x*> and ||ghat_i||^2, indexed by i - 1.
struct StepTerms {
  std::vector<double> noise_inner;
  std::vector<double> grad_norm2;
  std::vector<double> dist2;
};

StepTerms step_terms(std::span<const TrajectoryStep> trajectory, const Optimum& opt) {
  StepTerms out;
  for (const auto& step : trajectory) {
    const Vector offset = step.x - opt.point;
    out.noise_inner.push_back(dot(*step.sample.zhat, offset));
    out.grad_norm2.push_back(norm_squared(step.sample.ghat));
    out.dist2.push_back(norm_squared(offset));
  }
  return out;
}

}  // namespace

double verify_diameter_bound(std::span<const TrajectoryStep> trajectory,
                             const std::optional<Optimum>& optimum, double lipschitz, double mu) {
  const Optimum& opt = require_optimum(optimum);
  if (!(mu > 0.0)) throw std::invalid_argument("verify_diameter_bound: mu must be > 0");
  if (!std::isfinite(lipschitz)) {
    throw std::invalid_argument("verify_diameter_bound: Lipschitz bound is unbounded");
  }
  const double radius = 2.0 * lipschitz / mu;
  double worst = 0.0;
  for (const auto& step : trajectory) {
    const double d = distance(step.x, opt.point);
    if (radius == 0.0) {
      if (d > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, d / radius);
  }
  return worst;
}

double telescoping_product_coeff(std::int64_t i, std::int64_t t) {
  if (i < 3 || t < i) {
    throw std::invalid_argument(
        fmt::format("telescoping_product_coeff: need 3 <= i <= t (got i={}, t={})", i, t));
  }
  const auto poly = [](std::int64_t k) {
    const double x = static_cast<double>(k);
    return (x - 2.0) * (x - 1.0) * x * (x + 1.0);
  };
  return poly(i) / poly(t);
}

double telescoping_product_literal(std::int64_t i, std::int64_t t) {
  double p = 1.0;
  for (std::int64_t j = i + 1; j <= t; ++j) p *= 1.0 - 4.0 / static_cast<double>(j + 1);
  return p;
}

double product_identity_sweep(std::int64_t t_max) {
  double worst = 0.0;
  for (std::int64_t t = 4; t <= t_max; ++t) {
    for (std::int64_t i = 3; i < t; ++i) {
      const double closed = telescoping_product_coeff(i, t);
      const double literal = telescoping_product_literal(i, t);
      worst = std::max(worst, std::abs(closed - literal) / std::abs(literal));
    }
  }
  return worst;
}

RecursiveBoundCheck verify_recursive_bound(std::span<const TrajectoryStep> trajectory,
                                           const std::optional<Optimum>& optimum, double mu) {
  const Optimum& opt = require_optimum(optimum);
  if (!(mu > 0.0)) throw std::invalid_argument("verify_recursive_bound: mu must be > 0");
  require_decomposition(trajectory);
  const auto T = static_cast<std::int64_t>(trajectory.size());
  if (T < 5) throw std::invalid_argument("verify_recursive_bound: need at least 5 recorded steps");
  const StepTerms terms = step_terms(trajectory, opt);

  RecursiveBoundCheck check;
  check.min_slack = std::numeric_limits<double>::infinity();
  check.worst_normalized_slack = std::numeric_limits<double>::infinity();
  for (std::int64_t t = 4; t <= T - 1; ++t) {
    const double lhs = terms.dist2[static_cast<std::size_t>(t)];  // x_{t+1}
    CompensatedSum rhs;
    CompensatedSum scale;
    scale.add(lhs);
    for (std::int64_t i = 3; i <= t; ++i) {
      const auto k = static_cast<std::size_t>(i - 1);
      const double c = telescoping_product_coeff(i, t);
      const double ip1 = static_cast<double>(i + 1);
      const double noise_term = 4.0 / mu * (c / ip1) * terms.noise_inner[k];
      const double grad_term = 4.0 / (mu * mu) * (c / (ip1 * ip1)) * terms.grad_norm2[k];
      rhs.add(noise_term);
      rhs.add(grad_term);
      scale.add(std::abs(noise_term));
      scale.add(grad_term);
    }
    const double slack = rhs.value() - lhs;
    const double s = scale.value();
    const double normalized = s > 0.0 ? slack / s : slack;
    if (slack < check.min_slack) check.min_slack = slack;
    if (normalized < check.worst_normalized_slack) {
      check.worst_normalized_slack = normalized;
      check.worst_t = t;
    }
    if (slack < -1e-9 * s) check.passed = false;
    ++check.checked;
  }
  return check;
}

ChickenEggCoefficients chicken_and_egg_coefficients(std::int64_t horizon, double mu,
                                                    double lipschitz) {
  if (horizon < 4) throw std::invalid_argument("chicken_and_egg_coefficients: need T >= 4");
  if (!(mu > 0.0) || !std::isfinite(lipschitz) || lipschitz < 0.0) {
    throw std::invalid_argument("chicken_and_egg_coefficients: need mu > 0 and finite L >= 0");
  }
  ChickenEggCoefficients out;
  out.alpha.assign(static_cast<std::size_t>(horizon), 0.0);
  for (std::int64_t i = 3; i <= horizon - 1; ++i) {
    const double di = static_cast<double>(i);
    CompensatedSum s;
    for (std::int64_t t = i + 1; t <= horizon; ++t) {
      const double tt = static_cast<double>(t);
      const double a = telescoping_product_coeff(i, t - 1) / (di + 1.0);
      s.add(tt * tt * a / di);
    }
    out.alpha[static_cast<std::size_t>(i - 1)] = 4.0 / mu * s.value();
  }

  CompensatedSum b_total;
  for (std::int64_t t = 4; t <= horizon; ++t) {
    const double tt = static_cast<double>(t);
    CompensatedSum inner;
    for (std::int64_t i = 3; i <= t - 1; ++i) {
      const double ip1 = static_cast<double>(i + 1);
      inner.add(telescoping_product_coeff(i, t - 1) / (ip1 * ip1));
    }
    b_total.add(tt * tt * inner.value());
  }
  const double l1 = lipschitz + 1.0;
  out.beta = 4.0 * l1 * l1 / (mu * mu) * b_total.value() +
             56.0 * lipschitz * lipschitz / (mu * mu);
  return out;
}

ChickenEggCheck verify_chicken_and_egg(std::span<const TrajectoryStep> trajectory,
                                       const std::optional<Optimum>& optimum, double mu,
                                       double lipschitz, double beta_multiplier) {
  const Optimum& opt = require_optimum(optimum);
  require_decomposition(trajectory);
  const auto T = static_cast<std::int64_t>(trajectory.size());
  const ChickenEggCoefficients coeffs = chicken_and_egg_coefficients(T, mu, lipschitz);
  const StepTerms terms = step_terms(trajectory, opt);

  ChickenEggCheck check;
  CompensatedSum v_total;
  CompensatedSum weighted;
  for (std::int64_t i = 1; i <= T; ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    const double di = static_cast<double>(i);
    v_total.add(di * di * terms.dist2[k]);
    weighted.add(coeffs.alpha[k] * di * terms.noise_inner[k]);
    check.max_alpha = std::max(check.max_alpha, coeffs.alpha[k]);
  }
  check.total_conditional_variance = v_total.value();
  check.weighted_increments = weighted.value();
  check.beta = beta_multiplier * coeffs.beta;
  check.slack = check.weighted_increments + check.beta - check.total_conditional_variance;
  check.passed = check.slack >= -1e-9 * check.beta;
  return check;
}

}  // namespace sgdavg

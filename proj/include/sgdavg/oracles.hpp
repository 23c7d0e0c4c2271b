#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "sgdavg/dataset.hpp"
#include "sgdavg/problem.hpp"
#include "sgdavg/rng.hpp"
#include "sgdavg/vector.hpp"

namespace sgdavg {

/// Reply of a stochastic subgradient oracle: ghat = g - zhat.
struct GradientSample {
  Vector ghat;
  std::optional<Vector> g;
  std::optional<Vector> zhat;
};

struct NoNoise {};
/// Uniform on the ball of radius `bound`.
struct BoundedUniformBall {
  double bound;
};
/// Isotropic normal with per-coordinate variance scale^2 / n.
struct GaussianNoise {
  double scale;
};

using NoiseModel = std::variant<NoNoise, BoundedUniformBall, GaussianNoise>;

/// Throws std::invalid_argument for non-positive bound or scale.
void validate(const NoiseModel& noise);
std::string describe(const NoiseModel& noise);
Vector draw_noise(const NoiseModel& noise, std::size_t dim, RngStream& rng);

/// Per-sample hinge subgradient lambda w - y_i x_i 1[y_i <w,x_i> < 1], i uniform.
GradientSample svm_oracle_query(const Vector& w, const Dataset& data, double lambda,
                                RngStream& rng);
/// (lambda/2)||w||^2 + (1/m) sum_i max(0, 1 - y_i <w, x_i>).
double full_svm_objective(const Vector& w, const Dataset& data, double lambda);
Vector full_svm_subgradient(const Vector& w, const Dataset& data, double lambda);

/// f = (curvature/2)||x||^2: g = curvature x, zhat drawn from `noise`.
GradientSample quadratic_oracle_query(const Vector& x, const NoiseModel& noise, RngStream& rng,
                                      double curvature = 1.0);

/// Adversarial 1-D oracle on f = x^2/2: zhat_t = 0 outside (T/2, 3T/4], and
/// ((T+1)/(T-t)) X_t with X_t a fair sign inside. Requires 4 | T.
GradientSample lb_oracle_query(const Vector& x, std::int64_t t, std::int64_t horizon,
                               RngStream& rng);

/// Monte-Carlo estimate of E[exp(||z||^2 / kappa^2)] for n-dimensional draws.
double empirical_mgf_check(const NoiseModel& noise, double kappa, std::size_t dim,
                           std::size_t samples, RngStream& rng);

/// Stateful oracle bound to one trial's random stream.
class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;
  /// t is the 1-based iteration index.
  virtual GradientSample query(const Vector& x, std::int64_t t) = 0;
};

using OracleFactory = std::function<std::unique_ptr<StochasticOracle>(RngStream)>;

class QuadraticOracle final : public StochasticOracle {
 public:
  QuadraticOracle(NoiseModel noise, RngStream rng, double curvature = 1.0);
  GradientSample query(const Vector& x, std::int64_t t) override;

 private:
  NoiseModel noise_;
  RngStream rng_;
  double curvature_;
};

class LowerBoundOracle final : public StochasticOracle {
 public:
  /// Throws std::invalid_argument unless horizon >= 4 and divisible by 4.
  LowerBoundOracle(std::int64_t horizon, RngStream rng, bool silence_noise = false);
  GradientSample query(const Vector& x, std::int64_t t) override;

 private:
  std::int64_t horizon_;
  RngStream rng_;
  bool silence_noise_;
};

class SvmOracle final : public StochasticOracle {
 public:
  SvmOracle(std::shared_ptr<const Dataset> data, double lambda, RngStream rng);
  GradientSample query(const Vector& x, std::int64_t t) override;

 private:
  std::shared_ptr<const Dataset> data_;
  double lambda_;
  RngStream rng_;
};

OracleFactory quadratic_oracle_factory(NoiseModel noise, double curvature = 1.0);
OracleFactory lower_bound_oracle_factory(std::int64_t horizon, bool silence_noise = false);
OracleFactory svm_oracle_factory(std::shared_ptr<const Dataset> data, double lambda);

/// Mean-form SVM objective. The Lipschitz bound is lambda * R + max ||x_i|| when
/// `set` is a ball of radius R about the origin, otherwise +inf.
Problem make_svm_problem(std::shared_ptr<const Dataset> data, double lambda, FeasibleSet set);

}  // namespace sgdavg

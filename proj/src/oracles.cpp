#include "sgdavg/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

void validate(const NoiseModel& noise) {
  if (const auto* b = std::get_if<BoundedUniformBall>(&noise); b && !(b->bound > 0.0)) {
    throw std::invalid_argument(fmt::format("noise bound must be > 0 (got {})", b->bound));
  }
  if (const auto* g = std::get_if<GaussianNoise>(&noise); g && !(g->scale > 0.0)) {
    throw std::invalid_argument(fmt::format("noise scale must be > 0 (got {})", g->scale));
  }
}

std::string describe(const NoiseModel& noise) {
  if (const auto* b = std::get_if<BoundedUniformBall>(&noise)) return fmt::format("ball({})", b->bound);
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) return fmt::format("gaussian({})", g->scale);
  return "none";
}

Vector draw_noise(const NoiseModel& noise, std::size_t dim, RngStream& rng) {
  std::vector<double> z(dim, 0.0);
  if (const auto* b = std::get_if<BoundedUniformBall>(&noise)) {
    double r2 = 0.0;
    do {
      r2 = 0.0;
      for (double& v : z) {
        v = rng.normal();
        r2 += v * v;
      }
    } while (r2 == 0.0);
    const double radius = b->bound * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    const double s = radius / std::sqrt(r2);
    for (double& v : z) v *= s;
  } else if (const auto* g = std::get_if<GaussianNoise>(&noise)) {
    const double sd = g->scale / std::sqrt(static_cast<double>(dim));
    for (double& v : z) v = sd * rng.normal();
  }
  return Vector::dense(std::move(z));
}

namespace {
void require_svm_inputs(const Vector& w, const Dataset& data, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument(fmt::format("lambda must be > 0 (got {})", lambda));
  if (w.dim() != data.dim()) {
    throw std::invalid_argument(
        fmt::format("weight dimension {} differs from dataset dimension {}", w.dim(), data.dim()));
  }
}
}  // namespace

GradientSample svm_oracle_query(const Vector& w, const Dataset& data, double lambda,
                                RngStream& rng) {
  require_svm_inputs(w, data, lambda);
  const auto& p = data[rng.uniform_index(data.size())];
  Vector ghat = lambda * w.to_dense();
  if (p.y * dot(w, p.x) < 1.0) axpy(-static_cast<double>(p.y), p.x, ghat);
  return {std::move(ghat), std::nullopt, std::nullopt};
}

double full_svm_objective(const Vector& w, const Dataset& data, double lambda) {
  require_svm_inputs(w, data, lambda);
  double hinge = 0.0;
  for (const auto& p : data.points()) hinge += std::max(0.0, 1.0 - p.y * dot(w, p.x));
  return 0.5 * lambda * norm_squared(w) + hinge / static_cast<double>(data.size());
}

Vector full_svm_subgradient(const Vector& w, const Dataset& data, double lambda) {
  require_svm_inputs(w, data, lambda);
  Vector g = lambda * w.to_dense();
  const double inv_m = 1.0 / static_cast<double>(data.size());
  for (const auto& p : data.points()) {
    if (p.y * dot(w, p.x) < 1.0) axpy(-p.y * inv_m, p.x, g);
  }
  return g;
}

GradientSample quadratic_oracle_query(const Vector& x, const NoiseModel& noise, RngStream& rng,
                                      double curvature) {
  Vector g = curvature * x.to_dense();
  Vector z = draw_noise(noise, x.dim(), rng);
  Vector ghat = g - z;
  return {std::move(ghat), std::move(g), std::move(z)};
}

namespace {
void require_lb_horizon(std::int64_t horizon) {
  if (horizon < 4 || horizon % 4 != 0) {
    throw std::invalid_argument(
        fmt::format("lower-bound horizon must be a positive multiple of 4 (got {})", horizon));
  }
}

GradientSample lb_query(const Vector& x, std::int64_t t, std::int64_t horizon, RngStream& rng,
                        bool silence) {
  require_lb_horizon(horizon);
  if (x.dim() != 1) throw std::invalid_argument("lower-bound oracle is one-dimensional");
  if (t < 1 || t > horizon) {
    throw std::invalid_argument(fmt::format("lower-bound oracle: t={} outside [1, {}]", t, horizon));
  }
  double z = 0.0;
  if (2 * t > horizon && 4 * t <= 3 * horizon) {
    const double sign = rng.rademacher();
    if (!silence) z = static_cast<double>(horizon + 1) / static_cast<double>(horizon - t) * sign;
  }
  Vector g = x.to_dense();
  Vector zv = Vector::dense({z});
  Vector ghat = g - zv;
  return {std::move(ghat), std::move(g), std::move(zv)};
}
}  // namespace

GradientSample lb_oracle_query(const Vector& x, std::int64_t t, std::int64_t horizon,
                               RngStream& rng) {
  return lb_query(x, t, horizon, rng, false);
}

double empirical_mgf_check(const NoiseModel& noise, double kappa, std::size_t dim,
                           std::size_t samples, RngStream& rng) {
  if (!(kappa > 0.0)) throw std::invalid_argument(fmt::format("kappa must be > 0 (got {})", kappa));
  if (samples == 0) throw std::invalid_argument("empirical_mgf_check needs samples >= 1");
  validate(noise);
  const double inv_k2 = 1.0 / (kappa * kappa);
  double mean = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double v = std::exp(norm_squared(draw_noise(noise, dim, rng)) * inv_k2);
    mean += (v - mean) / static_cast<double>(s + 1);
  }
  return mean;
}

QuadraticOracle::QuadraticOracle(NoiseModel noise, RngStream rng, double curvature)
    : noise_(noise), rng_(std::move(rng)), curvature_(curvature) {
  validate(noise_);
}

GradientSample QuadraticOracle::query(const Vector& x, std::int64_t) {
  return quadratic_oracle_query(x, noise_, rng_, curvature_);
}

LowerBoundOracle::LowerBoundOracle(std::int64_t horizon, RngStream rng, bool silence_noise)
    : horizon_(horizon), rng_(std::move(rng)), silence_noise_(silence_noise) {
  require_lb_horizon(horizon);
}

GradientSample LowerBoundOracle::query(const Vector& x, std::int64_t t) {
  return lb_query(x, t, horizon_, rng_, silence_noise_);
}

SvmOracle::SvmOracle(std::shared_ptr<const Dataset> data, double lambda, RngStream rng)
    : data_(std::move(data)), lambda_(lambda), rng_(std::move(rng)) {
  if (!data_) throw std::invalid_argument("SvmOracle needs a dataset");
  if (!(lambda_ > 0.0)) throw std::invalid_argument("SvmOracle needs lambda > 0");
}

GradientSample SvmOracle::query(const Vector& x, std::int64_t) {
  return svm_oracle_query(x, *data_, lambda_, rng_);
}

OracleFactory quadratic_oracle_factory(NoiseModel noise, double curvature) {
  validate(noise);
  return [noise, curvature](RngStream rng) {
    return std::make_unique<QuadraticOracle>(noise, std::move(rng), curvature);
  };
}

OracleFactory lower_bound_oracle_factory(std::int64_t horizon, bool silence_noise) {
  require_lb_horizon(horizon);
  return [horizon, silence_noise](RngStream rng) {
    return std::make_unique<LowerBoundOracle>(horizon, std::move(rng), silence_noise);
  };
}

OracleFactory svm_oracle_factory(std::shared_ptr<const Dataset> data, double lambda) {
  return [data = std::move(data), lambda](RngStream rng) {
    return std::make_unique<SvmOracle>(data, lambda, std::move(rng));
  };
}

Problem make_svm_problem(std::shared_ptr<const Dataset> data, double lambda, FeasibleSet set) {
  if (!data) throw std::invalid_argument("make_svm_problem needs a dataset");
  if (!(lambda > 0.0)) throw std::invalid_argument(fmt::format("lambda must be > 0 (got {})", lambda));
  Problem p;
  p.id = fmt::format("svm(m={},n={},lambda={})", data->size(), data->dim(), lambda);
  p.objective = [data, lambda](const Vector& w) { return full_svm_objective(w, *data, lambda); };
  p.subgradient = [data, lambda](const Vector& w) { return full_svm_subgradient(w, *data, lambda); };
  p.mu = lambda;
  p.lipschitz = std::numeric_limits<double>::infinity();
  if (const auto* b = std::get_if<L2Ball>(&set.shape()); b && b->center.dim() == 0) {
    p.lipschitz = lambda * b->radius + data->max_point_norm();
  }
  p.feasible = std::move(set);
  validate(p);
  return p;
}

}  // namespace sgdavg

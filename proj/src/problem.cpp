#include "sgdavg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

double Problem::gap(const Vector& x) const {
  const double fx = objective(x);
  return optimum ? fx - optimum->value : fx;
}

bool Problem::lipschitz_bounded() const { return std::isfinite(lipschitz); }

void validate(const Problem& p) {
  if (!(p.mu > 0.0)) throw std::invalid_argument(fmt::format("problem mu must be > 0 (got {})", p.mu));
  if (!(p.lipschitz >= 0.0)) {
    throw std::invalid_argument(fmt::format("problem lipschitz must be >= 0 (got {})", p.lipschitz));
  }
  if (p.optimum) {
    const double fx = p.objective(p.optimum->point);
    if (std::abs(fx - p.optimum->value) > 1e-12) {
      throw std::invalid_argument(
          fmt::format("problem optimum inconsistent: f(x*)={} but f*={}", fx, p.optimum->value));
    }
  }
}

namespace {

// Largest ||x|| over the set, used for the gradient bound of the quadratic.
double max_norm(const FeasibleSet& set, std::size_t dim) {
  const auto& s = set.shape();
  if (const auto* iv = std::get_if<Interval>(&s)) {
    const double m = std::max(std::abs(iv->lo), std::abs(iv->hi));
    return m * std::sqrt(static_cast<double>(dim));
  }
  if (const auto* b = std::get_if<L2Ball>(&s)) {
    return b->radius + (b->center.dim() == 0 ? 0.0 : norm(b->center));
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

Problem make_quadratic_problem(std::size_t dim, FeasibleSet set, double curvature) {
  if (dim == 0) throw std::invalid_argument("quadratic problem needs dim >= 1");
  const Vector origin = Vector::zeros(dim);
  if (!contains(set, origin)) {
    throw std::invalid_argument("quadratic problem: the origin must be feasible");
  }
  Problem p;
  p.id = fmt::format("quadratic(n={},mu={})", dim, curvature);
  p.objective = [curvature](const Vector& x) { return 0.5 * curvature * norm_squared(x); };
  p.subgradient = [curvature](const Vector& x) { return curvature * x.to_dense(); };
  p.feasible = std::move(set);
  p.mu = curvature;
  p.lipschitz = curvature * max_norm(p.feasible, dim);
  p.optimum = Optimum{origin, 0.0};
  validate(p);
  return p;
}

}  // namespace sgdavg

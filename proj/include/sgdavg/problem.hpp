#pragma once

#include <functional>
#include <optional>
#include <string>

#include "sgdavg/feasible_set.hpp"
#include "sgdavg/vector.hpp"

namespace sgdavg {

struct Optimum {
  Vector point;
  double value;
};

/// A mu-strongly convex objective over a feasible set.
struct Problem {
  std::string id;
  std::function<double(const Vector&)> objective;
  /// Deterministic selection from the subdifferential.
  std::function<Vector(const Vector&)> subgradient;
  FeasibleSet feasible;
  double mu = 1.0;
  /// Bound on subgradient norms over the feasible set; +inf when unbounded.
  double lipschitz = 0.0;
  std::optional<Optimum> optimum;

  /// f(x) - f*, or f(x) when the optimum is unknown.
  double gap(const Vector& x) const;
  bool lipschitz_bounded() const;
};

/// Throws std::invalid_argument if mu <= 0, lipschitz < 0, or a supplied
/// optimum disagrees with the objective beyond 1e-12.
void validate(const Problem& p);

/// f(x) = (curvature/2) ||x||^2 over `set` in `dim` dimensions; x* = 0 must be feasible.
Problem make_quadratic_problem(std::size_t dim, FeasibleSet set, double curvature = 1.0);

}  // namespace sgdavg

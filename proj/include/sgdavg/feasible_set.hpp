#pragma once

#include <string>
#include <variant>

#include "sgdavg/vector.hpp"

namespace sgdavg {

struct Unconstrained {};

/// The same [lo, hi] applied to every coordinate.
struct Interval {
  double lo;
  double hi;
};

struct L2Ball {
  double radius;
  Vector center;  // empty center means the origin
};

/// Closed convex feasible region with Euclidean projection.
class FeasibleSet {
 public:
  FeasibleSet() = default;

  static FeasibleSet unconstrained();
  /// Requires lo < hi.
  static FeasibleSet interval(double lo, double hi);
  /// Requires radius > 0. An empty center means the origin.
  static FeasibleSet ball(double radius, Vector center = {});

  const std::variant<Unconstrained, Interval, L2Ball>& shape() const { return shape_; }
  std::string describe() const;

 private:
  explicit FeasibleSet(std::variant<Unconstrained, Interval, L2Ball> s)
      : shape_(std::move(s)) {}
  std::variant<Unconstrained, Interval, L2Ball> shape_;
};

/// Euclidean projection; returns p unchanged (as a dense vector) when feasible.
Vector project(const FeasibleSet& set, const Vector& p);

bool contains(const FeasibleSet& set, const Vector& p, double tol = 0.0);

}  // namespace sgdavg

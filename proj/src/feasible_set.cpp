#include "sgdavg/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

FeasibleSet FeasibleSet::unconstrained() { return FeasibleSet(Unconstrained{}); }

FeasibleSet FeasibleSet::interval(double lo, double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument(fmt::format("interval requires lo < hi (got [{}, {}])", lo, hi));
  }
  return FeasibleSet(Interval{lo, hi});
}

FeasibleSet FeasibleSet::ball(double radius, Vector center) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument(fmt::format("ball radius must be positive (got {})", radius));
  }
  return FeasibleSet(L2Ball{radius, center.to_dense()});
}

std::string FeasibleSet::describe() const {
  return std::visit(
      overloaded{[](const Unconstrained&) { return std::string("unconstrained"); },
                 [](const Interval& s) { return fmt::format("interval[{},{}]", s.lo, s.hi); },
                 [](const L2Ball& s) { return fmt::format("ball(r={})", s.radius); }},
      shape_);
}

Vector project(const FeasibleSet& set, const Vector& p) {
  return std::visit(
      overloaded{
          [&](const Unconstrained&) { return p.to_dense(); },
          [&](const Interval& s) {
            Vector out = p.to_dense();
            for (double& x : out.mutable_values()) x = std::clamp(x, s.lo, s.hi);
            return out;
          },
          [&](const L2Ball& s) {
            if (s.center.dim() != 0 && s.center.dim() != p.dim()) {
              throw std::invalid_argument(fmt::format(
                  "project: dimension mismatch (ball center {} vs point {})", s.center.dim(),
                  p.dim()));
            }
            Vector offset = s.center.dim() == 0 ? p.to_dense() : p - s.center;
            const double r = norm(offset);
            if (r <= s.radius) return p.to_dense();
            // Shrink past rounding so the result passes the `r <= radius` test above.
            double factor = s.radius / r;
            for (;;) {
              Vector out = factor * offset;
              if (s.center.dim() != 0) out = out + s.center;
              const Vector back = s.center.dim() == 0 ? out : out - s.center;
              if (norm(back) <= s.radius) return out;
              factor = std::nextafter(factor, 0.0);
            }
          }},
      set.shape());
}

bool contains(const FeasibleSet& set, const Vector& p, double tol) {
  return std::visit(
      overloaded{[&](const Unconstrained&) { return true; },
                 [&](const Interval& s) {
                   const Vector d = p.to_dense();
                   return std::all_of(d.values().begin(), d.values().end(), [&](double x) {
                     return x >= s.lo - tol && x <= s.hi + tol;
                   });
                 },
                 [&](const L2Ball& s) {
                   const double r = s.center.dim() == 0 ? norm(p) : distance(p, s.center);
                   return r <= s.radius + tol;
                 }},
      set.shape());
}

}  // namespace sgdavg

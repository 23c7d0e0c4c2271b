#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sgdavg/vector.hpp"

namespace sgdavg {

/// Thrown when observations arrive out of order or a report is not yet defined.
class AveragerError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Online reporting scheme over the iterates x_1, x_2, ...
///
/// - final:      the latest iterate.
/// - uniform:    running arithmetic mean.
/// - suffix:     uniform mean of x_t for t > T - ceil(alpha T); needs the horizon.
/// - nonuniform: sum_t t x_t / (t(t+1)/2) via z_t = rho_t x_t + (1 - rho_t) z_{t-1},
///               rho_t = 2/(t+1). Needs no horizon.
class Averager {
 public:
  enum class Kind { final_iterate, uniform, suffix, nonuniform };

  static Averager final_iterate() { return Averager(Kind::final_iterate); }
  static Averager uniform() { return Averager(Kind::uniform); }
  static Averager nonuniform() { return Averager(Kind::nonuniform); }
  /// Requires 0 < alpha <= 1 and horizon >= 1.
  static Averager suffix(double alpha, std::int64_t horizon);
  /// Accepts the serialized names "final", "uniform", "nonuniform"; "suffix"
  /// needs alpha and horizon.
  static Averager from_name(const std::string& name, double suffix_alpha, std::int64_t horizon);

  Kind kind() const { return kind_; }
  /// CSV key: "final", "uniform", "suffix" or "nonuniform".
  std::string name() const;
  std::int64_t count() const { return count_; }

  /// First iteration that enters the suffix window (1 for other schemes).
  std::int64_t window_start() const;
  bool has_report() const;

  /// t must equal count() + 1.
  void observe(const Vector& x, std::int64_t t);
  const Vector& report() const;

 private:
  explicit Averager(Kind k) : kind_(k) {}

  Kind kind_;
  double alpha_ = 1.0;
  std::int64_t horizon_ = 0;
  std::int64_t count_ = 0;
  std::int64_t window_count_ = 0;
  Vector z_;
};

}  // namespace sgdavg

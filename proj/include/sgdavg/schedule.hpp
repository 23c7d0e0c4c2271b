#pragma once

#include <cstdint>
#include <string>

namespace sgdavg {

/// eta_t = c / (mu (t + shift)) when mu-scaled, else c / (t + shift).
class StepSchedule {
 public:
  /// Requires c > 0 and shift >= 0.
  StepSchedule(double c, double shift, bool mu_scaled);

  /// eta_t = 2 / (mu (t + 1)), the rate-optimal default for strongly convex objectives.
  static StepSchedule strongly_convex_default() { return {2.0, 1.0, true}; }
  /// eta_t = 1 / (t + 1), used by the lower-bound construction.
  static StepSchedule lower_bound() { return {1.0, 1.0, false}; }

  double numerator() const { return c_; }
  double shift() const { return shift_; }
  bool mu_scaled() const { return mu_scaled_; }
  std::string describe() const;

 private:
  double c_;
  double shift_;
  bool mu_scaled_;
};

/// Requires t >= 1, and mu > 0 for mu-scaled schedules.
double step_size(const StepSchedule& s, double mu, std::int64_t t);

/// gamma_t = t / (T(T+1)/2), the weight of x_t in the non-uniform average.
/// Requires 1 <= t <= T.
double gamma_weight(std::int64_t t, std::int64_t horizon);

}  // namespace sgdavg

#include "sgdavg/schedule.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

StepSchedule::StepSchedule(double c, double shift, bool mu_scaled)
    : c_(c), shift_(shift), mu_scaled_(mu_scaled) {
  if (!(c > 0.0)) throw std::invalid_argument(fmt::format("step numerator must be > 0 (got {})", c));
  if (!(shift >= 0.0)) {
    throw std::invalid_argument(fmt::format("step shift must be >= 0 (got {})", shift));
  }
}

std::string StepSchedule::describe() const {
  return mu_scaled_ ? fmt::format("{}/(mu(t+{}))", c_, shift_)
                    : fmt::format("{}/(t+{})", c_, shift_);
}

double step_size(const StepSchedule& s, double mu, std::int64_t t) {
  if (t < 1) throw std::invalid_argument(fmt::format("step_size: t must be >= 1 (got {})", t));
  const double denom = static_cast<double>(t) + s.shift();
  if (!s.mu_scaled()) return s.numerator() / denom;
  if (!(mu > 0.0)) throw std::invalid_argument(fmt::format("step_size: mu must be > 0 (got {})", mu));
  return s.numerator() / (mu * denom);
}

double gamma_weight(std::int64_t t, std::int64_t horizon) {
  if (horizon < 1 || t < 1 || t > horizon) {
    throw std::invalid_argument(
        fmt::format("gamma_weight: need 1 <= t <= T (got t={}, T={})", t, horizon));
  }
  const double T = static_cast<double>(horizon);
  return static_cast<double>(t) / (T * (T + 1.0) / 2.0);
}

}  // namespace sgdavg

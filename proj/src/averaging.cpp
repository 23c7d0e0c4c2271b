#include "sgdavg/averaging.hpp"

#include <cmath>

#include <fmt/format.h>

namespace sgdavg {

Averager Averager::suffix(double alpha, std::int64_t horizon) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(fmt::format("suffix alpha must lie in (0, 1] (got {})", alpha));
  }
  if (horizon < 1) throw std::invalid_argument("suffix averaging needs a horizon T >= 1");
  Averager a(Kind::suffix);
  a.alpha_ = alpha;
  a.horizon_ = horizon;
  return a;
}

Averager Averager::from_name(const std::string& name, double suffix_alpha, std::int64_t horizon) {
  if (name == "final") return final_iterate();
  if (name == "uniform") return uniform();
  if (name == "nonuniform") return nonuniform();
  if (name == "suffix") return suffix(suffix_alpha, horizon);
  throw std::invalid_argument(fmt::format("unknown averaging scheme '{}'", name));
}

std::string Averager::name() const {
  switch (kind_) {
    case Kind::final_iterate:
      return "final";
    case Kind::uniform:
      return "uniform";
    case Kind::suffix:
      return "suffix";
    case Kind::nonuniform:
      return "nonuniform";
  }
  return "unknown";
}

std::int64_t Averager::window_start() const {
  if (kind_ != Kind::suffix) return 1;
  const auto window =
      static_cast<std::int64_t>(std::ceil(alpha_ * static_cast<double>(horizon_)));
  return horizon_ - window + 1;
}

bool Averager::has_report() const {
  return kind_ == Kind::suffix ? window_count_ > 0 : count_ > 0;
}

void Averager::observe(const Vector& x, std::int64_t t) {
  if (t != count_ + 1) {
    throw AveragerError(
        fmt::format("{} averager expected iteration {} but got {}", name(), count_ + 1, t));
  }
  count_ = t;
  switch (kind_) {
    case Kind::final_iterate:
      z_ = x.to_dense();
      break;
    case Kind::uniform:
      if (t == 1) {
        z_ = x.to_dense();
      } else {
        axpy(1.0 / static_cast<double>(t), x - z_, z_);
      }
      break;
    case Kind::nonuniform:
      if (t == 1) {
        z_ = x.to_dense();
      } else {
        const double rho = 2.0 / static_cast<double>(t + 1);
        scale_in_place(1.0 - rho, z_);
        axpy(rho, x, z_);
      }
      break;
    case Kind::suffix:
      if (t < window_start()) break;
      if (t > horizon_) {
        throw AveragerError(fmt::format("suffix averager observed t={} beyond horizon {}", t, horizon_));
      }
      ++window_count_;
      if (window_count_ == 1) {
        z_ = x.to_dense();
      } else {
        axpy(1.0 / static_cast<double>(window_count_), x - z_, z_);
      }
      break;
  }
}

const Vector& Averager::report() const {
  if (count_ == 0) throw AveragerError(fmt::format("{} averager has no observations", name()));
  if (kind_ == Kind::suffix && window_count_ == 0) {
    throw AveragerError(fmt::format("suffix window not started (opens at t={}, seen {})",
                                    window_start(), count_));
  }
  return z_;
}

}  // namespace sgdavg

#include "sgdavg/lower_bound.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "sgdavg/averaging.hpp"
#include "sgdavg/oracles.hpp"
#include "sgdavg/problem.hpp"
#include "sgdavg/sgd.hpp"

namespace sgdavg {

Rational::Rational(std::uint64_t n, std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  const std::uint64_t g = std::gcd(n, d);
  num = g == 0 ? 0 : n / g;
  den = g == 0 ? 1 : d / g;
}

std::string Rational::str() const { return den == 1 ? fmt::format("{}", num) : fmt::format("{}/{}", num, den); }

Rational operator+(const Rational& a, const Rational& b) {
  const std::uint64_t g = std::gcd(a.den, b.den);
  const std::uint64_t l = a.den / g * b.den;
  return Rational(a.num * (l / a.den) + b.num * (l / b.den), l);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
}

std::vector<LbOutcome> lb_exact_distribution(std::int64_t horizon) {
  if (horizon < 4 || horizon % 4 != 0) {
    throw std::invalid_argument(
        fmt::format("lower-bound horizon must be a positive multiple of 4 (got {})", horizon));
  }
  if (horizon > kMaxExactLbHorizon) {
    throw std::invalid_argument(fmt::format("exact enumeration supports T <= {} (got {})",
                                            kMaxExactLbHorizon, horizon));
  }
  const auto signs = static_cast<unsigned>(horizon / 4);
  const std::uint64_t patterns = std::uint64_t{1} << signs;
  const auto T = static_cast<std::uint64_t>(horizon);

  // report = k / (T/2) with k the sign sum, so f = k^2 / 2 / (T/2)^2 = 2 k^2 / T^2.
  std::map<std::uint64_t, std::uint64_t> count_by_abs_sum;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    const auto plus = static_cast<std::int64_t>(std::popcount(mask));
    const std::int64_t sum = 2 * plus - static_cast<std::int64_t>(signs);
    ++count_by_abs_sum[static_cast<std::uint64_t>(std::abs(sum))];
  }
  std::vector<LbOutcome> pmf;
  for (const auto& [k, count] : count_by_abs_sum) {
    pmf.push_back({Rational(2 * k * k, T * T), Rational(count, patterns)});
  }
  std::sort(pmf.begin(), pmf.end(),
            [](const LbOutcome& a, const LbOutcome& b) { return a.value < b.value; });
  return pmf;
}

Rational lb_tail_probability(const std::vector<LbOutcome>& pmf, double threshold) {
  Rational p;
  for (const auto& o : pmf) {
    if (o.value.to_double() >= threshold) p = p + o.probability;
  }
  return p;
}

double kolmogorov_distance(std::span<const double> sample, const std::vector<LbOutcome>& pmf,
                           double snap_tol) {
  if (sample.empty()) throw std::invalid_argument("kolmogorov_distance: empty sample");
  std::vector<double> support;
  for (const auto& o : pmf) support.push_back(o.value.to_double());

  std::vector<double> snapped(sample.begin(), sample.end());
  for (double& v : snapped) {
    for (double s : support) {
      if (std::abs(v - s) <= snap_tol) {
        v = s;
        break;
      }
    }
  }
  std::sort(snapped.begin(), snapped.end());

  std::vector<double> points = support;
  points.insert(points.end(), snapped.begin(), snapped.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const double n = static_cast<double>(snapped.size());
  double worst = 0.0;
  for (double x : points) {
    const auto below = std::upper_bound(snapped.begin(), snapped.end(), x) - snapped.begin();
    const double f_sample = static_cast<double>(below) / n;
    double f_exact = 0.0;
    for (const auto& o : pmf) {
      if (o.value.to_double() <= x) f_exact += o.probability.to_double();
    }
    worst = std::max(worst, std::abs(f_sample - f_exact));
  }
  return worst;
}

LbMatchResult lb_simulate_and_match(std::int64_t horizon, std::size_t trials,
                                    std::uint64_t base_seed, bool silence_noise) {
  if (trials == 0) throw std::invalid_argument("lb_simulate_and_match: trials must be >= 1");
  const auto pmf = lb_exact_distribution(horizon);
  const Problem problem = make_quadratic_problem(1, FeasibleSet::interval(-6.0, 6.0));
  RunConfig config;
  config.horizon = horizon;
  config.schedule = StepSchedule::lower_bound();
  config.x1 = Vector::zeros(1);
  config.record_iterates = true;
  config.eval_every = horizon;

  const double T = static_cast<double>(horizon);
  LbMatchResult result;
  result.objective_values.reserve(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    LowerBoundOracle oracle(horizon, RngStream(base_seed, trial), silence_noise);
    RunRecord rec;
    try {
      rec = run_sgd(problem, oracle, config, {Averager::nonuniform()});
    } catch (const std::exception& e) {
      throw std::runtime_error(
          fmt::format("lower-bound trial {} (seed {}) failed: {}", trial, base_seed, e.what()));
    }
    const auto& traj = *rec.trajectory;

    double zsum = 0.0;
    double sign_sum = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const double t = static_cast<double>(k + 1);
      const double expected = zsum / t;
      result.max_iterate_identity_error =
          std::max(result.max_iterate_identity_error, std::abs(traj[k].x.at(0) - expected));
      const double z = traj[k].sample.zhat->at(0);
      zsum += z;
      sign_sum += z * (T - t) / (T + 1.0);
    }
    const double report = rec.reported.at("nonuniform").at(0);
    const double predicted = 0.5 * sign_sum / (T / 4.0);
    result.max_report_identity_error =
        std::max(result.max_report_identity_error, std::abs(report - predicted));
    result.objective_values.push_back(problem.objective(rec.reported.at("nonuniform")));
  }
  result.kolmogorov_gap = kolmogorov_distance(result.objective_values, pmf);
  return result;
}

}  // namespace sgdavg

#include "sgdavg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace sgdavg {

Dataset::Dataset(std::vector<LabeledPoint> points, std::size_t dim)
    : points_(std::move(points)), dim_(dim) {
  if (points_.empty()) throw std::invalid_argument("dataset must contain at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (p.y != 1 && p.y != -1) {
      throw std::invalid_argument(fmt::format("point {}: label {} not in {{+1,-1}}", i, p.y));
    }
    if (p.x.dim() != dim_) {
      throw std::invalid_argument(
          fmt::format("point {}: dimension {} differs from dataset dimension {}", i, p.x.dim(), dim_));
    }
  }
}

double Dataset::density() const {
  if (dim_ == 0) return 0.0;
  std::size_t nnz = 0;
  for (const auto& p : points_) {
    for (double v : p.x.values()) nnz += v != 0.0 ? 1 : 0;
  }
  return static_cast<double>(nnz) / (static_cast<double>(points_.size()) * static_cast<double>(dim_));
}

double Dataset::max_point_norm() const {
  double best = 0.0;
  for (const auto& p : points_) best = std::max(best, norm(p.x));
  return best;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

namespace {

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct RawPoint {
  double label;
  std::vector<std::pair<std::size_t, double>> entries;
};

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim_override) {
  std::vector<RawPoint> raw;
  std::vector<double> classes;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;

    RawPoint p{};
    std::string_view label_tok = tok;
    if (!label_tok.empty() && label_tok.front() == '+') label_tok.remove_prefix(1);
    if (!parse_number(label_tok, p.label) || !std::isfinite(p.label)) {
      throw ParseError(lineno, fmt::format("malformed label '{}'", tok));
    }
    if (std::find(classes.begin(), classes.end(), p.label) == classes.end()) {
      if (classes.size() == 2) {
        throw ParseError(lineno, fmt::format("more than two distinct labels (saw {})", tok));
      }
      classes.push_back(p.label);
    }

    while (tokens >> tok) {
      const auto colon = tok.find(':');
      std::size_t idx = 0;
      double val = 0.0;
      if (colon == std::string::npos ||
          !parse_number(std::string_view(tok).substr(0, colon), idx) ||
          !parse_number(std::string_view(tok).substr(colon + 1), val) || idx == 0 ||
          !std::isfinite(val)) {
        throw ParseError(lineno, fmt::format("malformed feature token '{}'", tok));
      }
      const std::size_t zero_based = idx - 1;
      if (!p.entries.empty() && zero_based <= p.entries.back().first) {
        throw ParseError(lineno, fmt::format("feature indices not increasing at '{}'", tok));
      }
      p.entries.emplace_back(zero_based, val);
      dim = std::max(dim, zero_based + 1);
    }
    raw.push_back(std::move(p));
  }
  if (raw.empty()) throw ParseError(lineno, "no data points");

  if (dim_override) {
    if (*dim_override < dim) {
      throw std::invalid_argument(fmt::format(
          "dimension override {} smaller than observed feature count {}", *dim_override, dim));
    }
    dim = *dim_override;
  }

  const bool two_positive = classes.size() == 2 && classes[0] > 0.0 && classes[1] > 0.0;
  const double smaller = classes.size() == 2 ? std::min(classes[0], classes[1]) : 0.0;
  std::vector<LabeledPoint> points;
  points.reserve(raw.size());
  for (auto& p : raw) {
    const bool negative = p.label <= 0.0 || (two_positive && p.label == smaller);
    points.push_back({Vector::sparse(dim, std::move(p.entries)), negative ? -1 : 1});
  }
  return Dataset(std::move(points), dim);
}

Dataset load_libsvm(const std::filesystem::path& path, std::optional<std::size_t> dim_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open dataset file '{}'", path.string()));
  return parse_libsvm(in, dim_override);
}

void write_libsvm(const Dataset& d, std::ostream& out) {
  for (const auto& p : d.points()) {
    out << (p.y > 0 ? "1" : "-1");
    const Vector s = p.x;
    if (s.is_sparse()) {
      for (std::size_t k = 0; k < s.nnz(); ++k) {
        out << fmt::format(" {}:{:.17g}", s.indices()[k] + 1, s.values()[k]);
      }
    } else {
      for (std::size_t i = 0; i < s.dim(); ++i) {
        if (s.values()[i] != 0.0) out << fmt::format(" {}:{:.17g}", i + 1, s.values()[i]);
      }
    }
    out << '\n';
  }
}

ScaleMode parse_scale_mode(const std::string& name) {
  if (name == "none") return ScaleMode::none;
  if (name == "auto") return ScaleMode::automatic;
  if (name == "sparse01") return ScaleMode::sparse01;
  if (name == "standardize") return ScaleMode::standardize;
  throw std::invalid_argument(fmt::format("unknown scaling mode '{}'", name));
}

namespace {

ScaledDataset scale_sparse01(const Dataset& d) {
  const std::size_t n = d.dim();
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  for (const auto& p : d.points()) {
    const Vector& x = p.x;
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      const double v = x.values()[k];
      if (v == 0.0) continue;
      const std::size_t j = x.is_sparse() ? x.indices()[k] : k;
      lo[j] = std::min(lo[j], v);
      hi[j] = std::max(hi[j], v);
    }
  }
  std::vector<LabeledPoint> out;
  out.reserve(d.size());
  for (const auto& p : d.points()) {
    const Vector& x = p.x;
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      const double v = x.values()[k];
      if (v == 0.0) continue;
      const std::size_t j = x.is_sparse() ? x.indices()[k] : k;
      const double mapped = hi[j] > lo[j] ? (v - lo[j]) / (hi[j] - lo[j]) : 1.0;
      entries.emplace_back(j, mapped);
    }
    out.push_back({Vector::sparse(n, std::move(entries)), p.y});
  }
  return {Dataset(std::move(out), n), {}, ScaleMode::sparse01};
}

ScaledDataset scale_standardize(const Dataset& d) {
  const std::size_t n = d.dim();
  const double m = static_cast<double>(d.size());
  std::vector<Vector> dense;
  dense.reserve(d.size());
  for (const auto& p : d.points()) dense.push_back(p.x.to_dense());

  std::vector<double> mean(n, 0.0);
  for (const auto& x : dense) {
    for (std::size_t j = 0; j < n; ++j) mean[j] += x.values()[j];
  }
  for (double& v : mean) v /= m;
  std::vector<double> var(n, 0.0);
  for (const auto& x : dense) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = x.values()[j] - mean[j];
      var[j] += c * c;
    }
  }
  std::vector<std::size_t> degenerate;
  std::vector<double> inv_sd(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    var[j] /= m;
    if (var[j] > 0.0) {
      inv_sd[j] = 1.0 / std::sqrt(var[j]);
    } else {
      degenerate.push_back(j);
    }
  }

  std::vector<LabeledPoint> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = (dense[i].values()[j] - mean[j]) * inv_sd[j];
    out.push_back({Vector::dense(std::move(v)), d[i].y});
  }
  return {Dataset(std::move(out), n), std::move(degenerate), ScaleMode::standardize};
}

}  // namespace

ScaledDataset scale_features(const Dataset& d, ScaleMode mode) {
  switch (mode) {
    case ScaleMode::none:
      return {d, {}, ScaleMode::none};
    case ScaleMode::sparse01:
      return scale_sparse01(d);
    case ScaleMode::standardize:
      return scale_standardize(d);
    case ScaleMode::automatic:
      return d.density() < 0.5 ? scale_sparse01(d) : scale_standardize(d);
  }
  throw std::invalid_argument("unknown scaling mode");
}

Dataset make_separable_dataset(std::size_t m, std::size_t n, RngStream& rng, double margin) {
  if (m == 0 || n == 0) throw std::invalid_argument("separable dataset needs m, n >= 1");
  std::vector<double> w(n);
  for (double& v : w) v = rng.normal();
  const Vector direction = (1.0 / norm(Vector::dense(w))) * Vector::dense(w);
  const double coord_sd = 1.0 / std::sqrt(static_cast<double>(n));

  std::vector<LabeledPoint> points;
  points.reserve(m);
  while (points.size() < m) {
    std::vector<double> x(n);
    for (double& v : x) v = coord_sd * rng.normal();
    Vector xv = Vector::dense(std::move(x));
    const double s = dot(direction, xv);
    if (std::abs(s) < margin) continue;
    points.push_back({std::move(xv), s > 0.0 ? 1 : -1});
  }
  return Dataset(std::move(points), n);
}

}  // namespace sgdavg

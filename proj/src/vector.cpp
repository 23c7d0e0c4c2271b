#include "sgdavg/vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

Vector Vector::dense(std::vector<double> values) {
  Vector v;
  v.dim_ = values.size();
  v.values_ = std::move(values);
  return v;
}

Vector Vector::zeros(std::size_t dim) { return dense(std::vector<double>(dim, 0.0)); }

Vector Vector::filled(std::size_t dim, double value) {
  return dense(std::vector<double>(dim, value));
}

Vector Vector::sparse(std::size_t dim,
                      std::vector<std::pair<std::size_t, double>> entries) {
  Vector v;
  v.dim_ = dim;
  v.sparse_ = true;
  v.indices_.reserve(entries.size());
  v.values_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto [idx, val] = entries[k];
    if (idx >= dim) {
      throw std::invalid_argument(
          fmt::format("sparse index {} out of range for dimension {}", idx, dim));
    }
    if (k > 0 && idx <= entries[k - 1].first) {
      throw std::invalid_argument(
          fmt::format("sparse indices must be strictly increasing (at {})", idx));
    }
    v.indices_.push_back(idx);
    v.values_.push_back(val);
  }
  return v;
}

double Vector::at(std::size_t i) const {
  if (i >= dim_) throw std::out_of_range("Vector::at");
  if (!sparse_) return values_[i];
  auto it = std::lower_bound(indices_.begin(), indices_.end(), i);
  if (it == indices_.end() || *it != i) return 0.0;
  return values_[static_cast<std::size_t>(it - indices_.begin())];
}

Vector Vector::to_dense() const {
  if (!sparse_) return *this;
  std::vector<double> out(dim_, 0.0);
  for (std::size_t k = 0; k < indices_.size(); ++k) out[indices_[k]] = values_[k];
  return dense(std::move(out));
}

namespace {

void require_same_dim(const Vector& a, const Vector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(
        fmt::format("{}: dimension mismatch ({} vs {})", op, a.dim(), b.dim()));
  }
}

double sparse_dense_dot(const Vector& s, const Vector& d) {
  const auto idx = s.indices();
  const auto sv = s.values();
  const auto dv = d.values();
  double acc = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) acc += sv[k] * dv[idx[k]];
  return acc;
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dot");
  if (!a.is_sparse() && !b.is_sparse()) {
    const auto av = a.values();
    const auto bv = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
    return acc;
  }
  if (a.is_sparse() && !b.is_sparse()) return sparse_dense_dot(a, b);
  if (!a.is_sparse() && b.is_sparse()) return sparse_dense_dot(b, a);

  // sparse-sparse merge
  const auto ai = a.indices();
  const auto bi = b.indices();
  const auto av = a.values();
  const auto bv = b.values();
  double acc = 0.0;
  std::size_t p = 0, q = 0;
  while (p < ai.size() && q < bi.size()) {
    if (ai[p] < bi[q]) {
      ++p;
    } else if (bi[q] < ai[p]) {
      ++q;
    } else {
      acc += av[p++] * bv[q++];
    }
  }
  return acc;
}

double norm_squared(const Vector& v) {
  double acc = 0.0;
  for (double x : v.values()) acc += x * x;
  return acc;
}

double norm(const Vector& v) { return std::sqrt(norm_squared(v)); }

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_dim(x, y, "axpy");
  if (y.is_sparse()) throw std::invalid_argument("axpy: target must be dense");
  auto yv = y.mutable_values();
  const auto xv = x.values();
  if (x.is_sparse()) {
    const auto xi = x.indices();
    for (std::size_t k = 0; k < xi.size(); ++k) yv[xi[k]] += alpha * xv[k];
  } else {
    for (std::size_t i = 0; i < xv.size(); ++i) yv[i] += alpha * xv[i];
  }
}

void scale_in_place(double alpha, Vector& v) {
  for (double& x : v.mutable_values()) x *= alpha;
}

Vector operator+(const Vector& a, const Vector& b) {
  Vector out = a.to_dense();
  axpy(1.0, b, out);
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  Vector out = a.to_dense();
  axpy(-1.0, b, out);
  return out;
}

Vector operator*(double alpha, const Vector& v) {
  Vector out = v;
  scale_in_place(alpha, out);
  return out;
}

double distance(const Vector& a, const Vector& b) { return norm(a - b); }

bool all_finite(const Vector& v) {
  return std::all_of(v.values().begin(), v.values().end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace sgdavg

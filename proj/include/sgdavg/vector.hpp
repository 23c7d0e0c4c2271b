#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sgdavg {

/// Real coordinate vector stored either densely or as sorted (index, value)
/// pairs. Iterates are always dense; data points are usually sparse.
class Vector {
 public:
  Vector() = default;

  static Vector dense(std::vector<double> values);
  static Vector zeros(std::size_t dim);
  static Vector filled(std::size_t dim, double value);
  /// Throws std::invalid_argument unless indices are strictly increasing and < dim.
  static Vector sparse(std::size_t dim,
                       std::vector<std::pair<std::size_t, double>> entries);

  std::size_t dim() const { return dim_; }
  bool is_sparse() const { return sparse_; }
  std::size_t nnz() const { return values_.size(); }

  /// Stored values: all coordinates when dense, the nonzeros when sparse.
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  /// Empty when dense.
  std::span<const std::size_t> indices() const { return indices_; }

  /// Coordinate access for either representation (O(log nnz) when sparse).
  double at(std::size_t i) const;

  Vector to_dense() const;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::size_t dim_ = 0;
  bool sparse_ = false;
  std::vector<double> values_;
  std::vector<std::size_t> indices_;
};

double dot(const Vector& a, const Vector& b);
double norm_squared(const Vector& v);
double norm(const Vector& v);

/// y <- y + alpha * x. y must be dense.
void axpy(double alpha, const Vector& x, Vector& y);
/// v <- alpha * v, preserving representation.
void scale_in_place(double alpha, Vector& v);

/// Dense results.
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double alpha, const Vector& v);

double distance(const Vector& a, const Vector& b);
bool all_finite(const Vector& v);

}  // namespace sgdavg

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgdavg/rng.hpp"
#include "sgdavg/vector.hpp"

namespace sgdavg {

struct LabeledPoint {
  Vector x;
  int y;  // +1 or -1
};

/// Binary-labelled points of a common dimension. Immutable once built.
class Dataset {
 public:
  /// Throws std::invalid_argument on empty input, labels outside {+1,-1} or
  /// dimension mismatches.
  Dataset(std::vector<LabeledPoint> points, std::size_t dim);

  const std::vector<LabeledPoint>& points() const { return points_; }
  const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  /// Fraction of stored nonzeros over m * n.
  double density() const;
  double max_point_norm() const;

 private:
  std::vector<LabeledPoint> points_;
  std::size_t dim_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads LIBSVM text ("<label> <idx>:<val> ..." with 1-based increasing
/// indices; '#' comments; blank lines skipped). Labels <= 0, or the smaller of
/// two positive classes, map to -1. `dim_override` must cover every index.
Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim_override = std::nullopt);
Dataset load_libsvm(const std::filesystem::path& path,
                    std::optional<std::size_t> dim_override = std::nullopt);
void write_libsvm(const Dataset& d, std::ostream& out);

enum class ScaleMode { none, automatic, sparse01, standardize };

ScaleMode parse_scale_mode(const std::string& name);

struct ScaledDataset {
  Dataset data;
  /// Columns with zero variance under standardize; left centred at 0.
  std::vector<std::size_t> degenerate_columns;
  ScaleMode applied;
};

/// sparse01 maps each column's observed nonzeros affinely onto [0,1] (absent
/// entries stay 0, a single distinct value maps to 1). standardize makes each
/// column zero-mean unit-variance and densifies. automatic picks sparse01 when
/// density < 0.5.
ScaledDataset scale_features(const Dataset& d, ScaleMode mode);

/// Linearly separable synthetic data: x ~ N(0, I/n), y = sign(<w*, x>) with a
/// rejection margin so no point sits on the separating hyperplane.
Dataset make_separable_dataset(std::size_t m, std::size_t n, RngStream& rng,
                               double margin = 0.05);

}  // namespace sgdavg

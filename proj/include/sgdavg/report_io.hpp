#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgdavg/trials.hpp"

namespace sgdavg {

/// CSV layout: '#' comment lines (caller-supplied provenance first, then the
/// matrix metadata), then the header `trial,checkpoint_iter,scheme,objective`
/// and one row per defined cell. Floats use 17 significant digits.
void write_csv(const TrialMatrix& m, std::ostream& out,
               const std::vector<std::string>& comments = {});
void export_csv(const TrialMatrix& m, const std::filesystem::path& path,
                const std::vector<std::string>& comments = {});

TrialMatrix read_csv(std::istream& in);
TrialMatrix import_csv(const std::filesystem::path& path);

struct SvgOptions {
  std::string title = "objective vs. iteration";
  /// Divide checkpoint iterations by this for the x axis (m for effective passes).
  double x_unit = 1.0;
  std::string x_label = "iteration";
  bool log_y = false;
};

/// One panel per scheme: a translucent polyline per trial and an opaque dashed
/// mean curve (class="mean"). An empty filter plots every scheme.
void write_svg(const TrialMatrix& m, const std::vector<std::string>& scheme_filter,
               std::ostream& out, const SvgOptions& options = {});
void render_svg(const TrialMatrix& m, const std::vector<std::string>& scheme_filter,
                const std::filesystem::path& path, const SvgOptions& options = {});

}  // namespace sgdavg

#include "sgdavg/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace sgdavg {

namespace {

constexpr const char* kHeader = "trial,checkpoint_iter,scheme,objective";

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("I/O error writing '{}'", path.string()));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

template <class T>
T parse_field(const std::string& s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("csv line {}: bad field '{}'", line, s));
  }
  return v;
}

}  // namespace

void write_csv(const TrialMatrix& m, std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  const auto& meta = m.meta();
  out << "# problem: " << meta.problem_id << '\n';
  out << "# horizon: " << meta.horizon << '\n';
  out << "# base_seed: " << meta.base_seed << '\n';
  out << "# schedule: " << meta.schedule << '\n';
  out << kHeader << '\n';
  for (std::size_t i = 0; i < m.trials(); ++i) {
    for (std::size_t c = 0; c < m.checkpoints().size(); ++c) {
      for (std::size_t s = 0; s < m.schemes().size(); ++s) {
        const double v = m.at(i, c, s);
        if (std::isnan(v)) continue;
        out << fmt::format("{},{},{},{:.17g}\n", i, m.checkpoints()[c], m.schemes()[s], v);
      }
    }
  }
}

void export_csv(const TrialMatrix& m, const std::filesystem::path& path,
                const std::vector<std::string>& comments) {
  if (m.trials() == 0 || m.checkpoints().empty() || m.schemes().empty()) {
    throw std::invalid_argument("export_csv: empty trial matrix");
  }
  auto out = open_output(path);
  write_csv(m, out, comments);
  finish_output(out, path);
}

TrialMatrix read_csv(std::istream& in) {
  struct Cell {
    std::size_t trial;
    std::int64_t iter;
    std::string scheme;
    double value;
  };
  TrialMeta meta;
  std::vector<Cell> cells;
  std::vector<std::string> schemes;
  bool header_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      if (key == "problem") meta.problem_id = value;
      if (key == "horizon") meta.horizon = parse_field<std::int64_t>(value, lineno);
      if (key == "base_seed") meta.base_seed = parse_field<std::uint64_t>(value, lineno);
      if (key == "schedule") meta.schedule = value;
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) throw std::runtime_error(fmt::format("csv line {}: unexpected header", lineno));
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 4) throw std::runtime_error(fmt::format("csv line {}: expected 4 fields", lineno));
    Cell cell{parse_field<std::size_t>(f[0], lineno), parse_field<std::int64_t>(f[1], lineno), f[2],
              parse_field<double>(f[3], lineno)};
    if (std::find(schemes.begin(), schemes.end(), cell.scheme) == schemes.end()) {
      schemes.push_back(cell.scheme);
    }
    cells.push_back(std::move(cell));
  }
  if (cells.empty()) throw std::runtime_error("csv contains no data rows");

  std::vector<std::int64_t> checkpoints;
  std::size_t trials = 0;
  for (const auto& c : cells) {
    checkpoints.push_back(c.iter);
    trials = std::max(trials, c.trial + 1);
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  std::map<std::int64_t, std::size_t> cp_index;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) cp_index[checkpoints[k]] = k;

  TrialMatrix m(trials, checkpoints, schemes, meta);
  for (const auto& c : cells) {
    const auto s = static_cast<std::size_t>(
        std::find(schemes.begin(), schemes.end(), c.scheme) - schemes.begin());
    m.at(c.trial, cp_index.at(c.iter), s) = c.value;
  }
  return m;
}

TrialMatrix import_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  return read_csv(in);
}

namespace {

constexpr double kPanelW = 420.0;
constexpr double kPanelH = 300.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Axis {
  double lo;
  double hi;
  bool log;

  double transform(double v) const { return log ? std::log10(v) : v; }
  // Maps to [0, 1].
  double unit(double v) const {
    const double a = transform(lo);
    const double b = transform(hi);
    return b > a ? (transform(v) - a) / (b - a) : 0.5;
  }
};

}  // namespace

void write_svg(const TrialMatrix& m, const std::vector<std::string>& scheme_filter,
               std::ostream& out, const SvgOptions& options) {
  if (m.trials() == 0 || m.checkpoints().empty()) throw std::invalid_argument("write_svg: empty trial matrix");
  std::vector<std::size_t> panels;
  if (scheme_filter.empty()) {
    for (std::size_t s = 0; s < m.schemes().size(); ++s) panels.push_back(s);
  } else {
    for (const auto& name : scheme_filter) panels.push_back(m.scheme_index(name));
  }

  const auto& cps = m.checkpoints();
  Axis x{static_cast<double>(cps.front()) / options.x_unit,
         static_cast<double>(cps.back()) / options.x_unit, false};
  Axis y{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
         options.log_y};
  for (std::size_t s : panels) {
    for (std::size_t i = 0; i < m.trials(); ++i) {
      for (std::size_t c = 0; c < cps.size(); ++c) {
        const double v = m.at(i, c, s);
        if (!std::isfinite(v) || (y.log && v <= 0.0)) continue;
        y.lo = std::min(y.lo, v);
        y.hi = std::max(y.hi, v);
      }
    }
  }
  if (!std::isfinite(y.lo)) {
    y.lo = y.log ? 1.0 : 0.0;
    y.hi = y.log ? 10.0 : 1.0;
  }

  const double plot_w = kPanelW - kMarginL - kMarginR;
  const double plot_h = kPanelH - kMarginT - kMarginB;
  const double width = kPanelW * static_cast<double>(panels.size());
  const double height = kPanelH + 30.0;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      width, height, width, height);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << fmt::format(
      "<text x=\"{:.1f}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"14\">{}</text>\n",
      width / 2.0, escape_xml(options.title));

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const std::size_t s = panels[p];
    const double ox = kPanelW * static_cast<double>(p) + kMarginL;
    const double oy = 30.0 + kMarginT;
    const auto px = [&](double iter) { return ox + plot_w * x.unit(iter / options.x_unit); };
    const auto py = [&](double v) { return oy + plot_h * (1.0 - y.unit(v)); };
    const char* colour = kPalette[p % std::size(kPalette)];

    out << fmt::format("<g class=\"panel\" id=\"panel-{}\">\n", escape_xml(m.schemes()[s]));
    out << fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
        "stroke=\"black\"/>\n",
        ox, oy, plot_w, plot_h);
    out << fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">{}</text>\n",
        ox + plot_w / 2.0, oy - 8.0, escape_xml(m.schemes()[s]));
    out << fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"11\">{}</text>\n",
        ox + plot_w / 2.0, oy + plot_h + 35.0, escape_xml(options.x_label));
    for (double frac : {0.0, 0.5, 1.0}) {
      const double xv = x.lo + frac * (x.hi - x.lo);
      out << fmt::format(
          "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"10\">{:.4g}</text>\n",
          ox + frac * plot_w, oy + plot_h + 15.0, xv);
      const double yv = y.log ? std::pow(10.0, std::log10(y.lo) + frac * (std::log10(y.hi) - std::log10(y.lo)))
                              : y.lo + frac * (y.hi - y.lo);
      out << fmt::format(
          "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"10\">{:.4g}</text>\n",
          ox - 5.0, oy + plot_h * (1.0 - frac) + 3.0, yv);
    }

    std::vector<double> sum(cps.size(), 0.0);
    std::vector<std::size_t> count(cps.size(), 0);
    for (std::size_t i = 0; i < m.trials(); ++i) {
      std::string d;
      for (std::size_t c = 0; c < cps.size(); ++c) {
        const double v = m.at(i, c, s);
        if (!std::isfinite(v) || (y.log && v <= 0.0)) continue;
        sum[c] += v;
        ++count[c];
        d += fmt::format("{}{:.3f},{:.3f}", d.empty() ? "M" : " L", px(static_cast<double>(cps[c])), py(v));
      }
      if (d.empty()) continue;
      out << fmt::format(
          "<path class=\"trial\" d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-opacity=\"0.15\" "
          "stroke-width=\"1\"/>\n",
          d, colour);
    }
    std::string mean_d;
    for (std::size_t c = 0; c < cps.size(); ++c) {
      if (count[c] == 0) continue;
      const double mean = sum[c] / static_cast<double>(count[c]);
      mean_d += fmt::format("{}{:.3f},{:.3f}", mean_d.empty() ? "M" : " L",
                            px(static_cast<double>(cps[c])), py(mean));
    }
    if (!mean_d.empty()) {
      out << fmt::format(
          "<path class=\"mean\" d=\"{}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"2\" "
          "stroke-dasharray=\"4,3\"/>\n",
          mean_d);
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

void render_svg(const TrialMatrix& m, const std::vector<std::string>& scheme_filter,
                const std::filesystem::path& path, const SvgOptions& options) {
  auto out = open_output(path);
  write_svg(m, scheme_filter, out, options);
  finish_output(out, path);
}

}  // namespace sgdavg

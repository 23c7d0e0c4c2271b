#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "sgdavg/dataset.hpp"

using namespace sgdavg;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse examples") {
  const Dataset d = parse("1 1:0.5 3:1.25\n");
  REQUIRE(d.size() == 1);
  CHECK(d.dim() == 3);
  CHECK(d[0].y == 1);
  CHECK(d[0].x.to_dense() == Vector::dense({0.5, 0.0, 1.25}));

  const Dataset empty_features = parse("-1\n");
  CHECK(empty_features[0].y == -1);
  CHECK(empty_features[0].x.nnz() == 0);

  const Dataset three = parse("# header\n+1 2:1\n\n-1 7:3 # trailing\n1 1:2 4:4\n");
  CHECK(three.size() == 3);
  CHECK(three.dim() == 7);
  CHECK(three[1].x.at(6) == 3.0);
}

TEST_CASE("parse errors report the line") {
  CHECK(error_line("1 1:1\n-1 3:1 2:1\n") == 2);
  CHECK(error_line("1 1:1\n1 1:1 1:2\n") == 2);
  CHECK(error_line("1 0:1\n") == 1);
  CHECK(error_line("1 1:1\n\nabc 1:1\n") == 3);
  CHECK(error_line("1 1:x\n") == 1);
  CHECK(error_line("1\n-1\n\n2 1:1\n") == 4);
  CHECK(error_line("# only a comment\n") == 1);
  std::istringstream in("1 5:1\n");
  CHECK_THROWS_AS(parse_libsvm(in, 3), std::invalid_argument);
}

TEST_CASE("label mapping") {
  const Dataset zero_one = parse("0 1:1\n1 1:1\n");
  CHECK(zero_one[0].y == -1);
  CHECK(zero_one[1].y == 1);

  const Dataset one_two = parse("2 1:1\n1 1:1\n");
  CHECK(one_two[0].y == 1);
  CHECK(one_two[1].y == -1);

  const Dataset single = parse("3 1:1\n3 1:2\n");
  CHECK(single[0].y == 1);
}

TEST_CASE("write then parse round-trips") {
  RngStream rng(4, 0);
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::pair<std::size_t, double>> e;
    for (std::size_t j = 0; j < 9; ++j) {
      if (rng.uniform() < 0.3) e.emplace_back(j, rng.normal() * 1e3);
    }
    pts.push_back({Vector::sparse(9, e), rng.uniform() < 0.5 ? 1 : -1});
  }
  const Dataset d(pts, 9);
  std::ostringstream out;
  write_libsvm(d, out);
  std::istringstream in(out.str());
  const Dataset back = parse_libsvm(in, 9);
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back[i].y == d[i].y);
    CHECK(back[i].x.to_dense() == d[i].x.to_dense());
  }
}

TEST_CASE("sparse01 scaling examples") {
  const Dataset d = parse("1 1:2\n-1 1:4\n1 2:10\n");
  const ScaledDataset s = scale_features(d, ScaleMode::sparse01);
  CHECK(s.applied == ScaleMode::sparse01);
  CHECK(s.data[0].x.at(0) == 0.0);
  CHECK(s.data[1].x.at(0) == 1.0);
  CHECK(s.data[2].x.at(0) == 0.0);
  CHECK(s.data[2].x.at(1) == 1.0);
  CHECK(s.data[0].x.at(1) == 0.0);
  CHECK(s.data.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s.data[i].y == d[i].y);
}

TEST_CASE("standardize scaling") {
  const Dataset d = parse("1 1:1 2:1\n-1 1:1 2:3\n1 1:1 2:8\n-1 1:1 3:2\n");
  const ScaledDataset s = scale_features(d, ScaleMode::standardize);
  CHECK(s.degenerate_columns == std::vector<std::size_t>{0});
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.data[i].x.at(0) == 0.0);
    CHECK(s.data[i].y == d[i].y);
  }
  for (std::size_t j = 1; j < 3; ++j) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < 4; ++i) mean += s.data[i].x.at(j) / 4.0;
    for (std::size_t i = 0; i < 4; ++i) sq += std::pow(s.data[i].x.at(j) - mean, 2) / 4.0;
    CHECK(std::abs(mean) <= 1e-9);
    CHECK(std::abs(sq - 1.0) <= 1e-9);
  }
}

TEST_CASE("automatic scaling follows density") {
  CHECK(scale_features(parse("1 1:1\n-1 4:2\n"), ScaleMode::automatic).applied == ScaleMode::sparse01);
  CHECK(scale_features(parse("1 1:1 2:1\n-1 1:2 2:3\n"), ScaleMode::automatic).applied ==
        ScaleMode::standardize);
  CHECK(parse_scale_mode("auto") == ScaleMode::automatic);
  CHECK_THROWS_AS(parse_scale_mode("minmax"), std::invalid_argument);
}

TEST_CASE("missing file names the path") {
  try {
    load_libsvm("/nonexistent/data.svm");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/data.svm") != std::string::npos);
  }
}

TEST_CASE("separable synthetic data") {
  RngStream rng(8, 0);
  const Dataset d = make_separable_dataset(500, 10, rng);
  CHECK(d.size() == 500);
  CHECK(d.dim() == 10);
  int pos = 0;
  for (const auto& p : d.points()) pos += p.y > 0;
  CHECK(pos > 100);
  CHECK(pos < 400);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sgdavg/cli.hpp"

using namespace sgdavg::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run example") {
  const Result r = cli({"run", "--T", "3", "--x1", "1", "--schemes", "nonuniform"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("nonuniform  0.01388888888888889") != std::string::npos);
}

TEST_CASE("help and usage errors") {
  CHECK(cli({"run", "--help"}).code == kExitOk);
  CHECK(cli({"run", "--T", "3", "--bogus"}).code == kExitUsage);
  CHECK(cli({"run"}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"run", "--T", "3", "--noise", "ball"}).code == kExitUsage);
  CHECK(cli({"run", "--T", "3", "--schemes", "median"}).code == kExitUsage);
  CHECK(cli({"lb", "--T", "10"}).code == kExitUsage);
}

TEST_CASE("missing dataset is a runtime failure naming the path") {
  const Result r = cli({"run", "--problem", "svm", "--data", "/nonexistent/d.svm", "--T", "5", "--seed", "1"});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("/nonexistent/d.svm") != std::string::npos);
}

TEST_CASE("trials csv is reproducible") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "sgdavg_cli_a.csv";
  const auto b = dir / "sgdavg_cli_b.csv";
  const auto svg = dir / "sgdavg_cli.svg";
  const std::vector<std::string> base{"trials", "--T", "400", "--noise", "ball", "--trials", "30",
                                      "--seed", "5", "--reproducible", "--deltas", "0.1"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--csv", a.string(), "--workers", "1", "--svg", svg.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--csv", b.string(), "--workers", "4"});
  REQUIRE(cli(args_a).code == kExitOk);
  REQUIRE(cli(args_b).code == kExitOk);
  const std::string ca = slurp(a);
  CHECK(!ca.empty());
  CHECK(ca == slurp(b));
  CHECK(ca.find("generated:") == std::string::npos);
  CHECK(slurp(svg).find("class=\"mean\"") != std::string::npos);
  for (const auto& p : {a, b, svg}) std::filesystem::remove(p);
}

TEST_CASE("lower-bound subcommand") {
  const Result exact = cli({"lb", "--T", "8", "--exact"});
  CHECK(exact.code == kExitOk);
  CHECK(exact.out.find("1/8  1/2") != std::string::npos);
  CHECK(cli({"lb", "--T", "8", "--trials", "4000", "--seed", "7"}).code == kExitOk);
  CHECK(cli({"lb", "--T", "8", "--trials", "400", "--seed", "7", "--silence-noise"}).code == kExitFailure);
}

TEST_CASE("verify subcommand") {
  CHECK(cli({"verify", "--only", "product-identity"}).code == kExitOk);
  CHECK(cli({"verify", "--only", "chicken-and-egg", "--perturb-beta-zero"}).code == kExitFailure);
  CHECK(cli({"verify", "--only", "nonsense"}).code == kExitUsage);
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "carpa/cli.hpp"

using namespace carpa;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("unknown subcommands and flags exit with code 2") {
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({"rates", "--no-such-flag", "1"}).code == 2);
  CHECK(invoke({}).code == 2); // a subcommand is required
}

TEST_CASE("unknown method names exit with code 2 and list the valid ones") {
  const auto r = invoke({"subspace", "--methods", "MAP,WRONG"});
  CHECK(r.code == 2);
  CHECK(r.err.find("WRONG") != std::string::npos);
  CHECK(r.err.find("CARPA") != std::string::npos);

  const auto cs = invoke({"cs", "--preset", "toy", "--methods", "RAAR"});
  CHECK(cs.code == 2);
  CHECK(cs.err.find("RAAR") != std::string::npos);
}

TEST_CASE("unparsable tolerance lists exit with code 2") {
  CHECK(invoke({"ball-line", "--tols", "1e-4,abc", "--trials", "5"}).code == 2);
  CHECK(invoke({"ball-line", "--tols", "", "--trials", "5"}).code == 2);
}

TEST_CASE("unknown presets and problems exit with code 2") {
  CHECK(invoke({"cs", "--preset", "huge"}).code == 2);
  CHECK(invoke({"trajectory", "--problem", "cube"}).code == 2);
}

TEST_CASE("rates emits the sweep with a boundary row at theta_F = pi/2") {
  const auto r = invoke({"rates", "--theta-p", "1.5707963267948966", "--grid", "8"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 8 * 10);
  CHECK(lines[0] == "theta_F,method,rate,params");
  // final sweep point is theta_F = pi/2; find its GRAP row
  bool found = false;
  for (const auto& line : lines) {
    const auto cells = cells_of(line);
    if (cells.size() >= 3 && cells[1] == "GRAP" &&
        std::abs(std::stod(cells[0]) - M_PI_2) < 1e-9) {
      CHECK(std::stod(cells[2]) == 0.0);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("rates output is byte-identical across invocations") {
  const auto a = invoke({"rates", "--grid", "12"});
  const auto b = invoke({"rates", "--grid", "12"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("ball-line reports one row per tolerance and method") {
  const auto r =
      invoke({"ball-line", "--tols", "1e-4", "--trials", "40", "--seed", "9"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 6);
  CHECK(lines[0] == "tol,method,mean_iterations,hit_max_fraction");
  const auto dr = cells_of(lines[1]);
  CHECK(dr[0] == "1e-4");
  CHECK(dr[1] == "DR");
  const double mean = std::stod(dr[2]);
  CHECK(mean > 5.0);
  CHECK(mean < 100.0);
  CHECK(std::stod(dr[3]) == 0.0);

  const auto again =
      invoke({"ball-line", "--tols", "1e-4", "--trials", "40", "--seed", "9"});
  CHECK(again.out == r.out);
}

TEST_CASE("subspace emits per-iteration errors plus a fit summary") {
  const auto r = invoke({"subspace", "--theta-f", "0.7", "--methods", "MAP",
                         "--tol", "1e-10", "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() > 3);
  CHECK(lines[0] == "method,k,error,empirical_rate,theoretical_rate");
  const auto first = cells_of(lines[1]);
  CHECK(first[0] == "MAP");
  CHECK(first[1] == "0");
  const auto summary = cells_of(lines.back());
  REQUIRE(summary.size() == 5);
  CHECK(summary[0] == "MAP");
  CHECK(summary[1].empty());
  const double fitted = std::stod(summary[3]);
  const double theory = std::stod(summary[4]);
  CHECK(theory == doctest::Approx(std::pow(std::cos(0.7), 2)).epsilon(1e-12));
  CHECK(std::abs(fitted - theory) < 0.02);
}

TEST_CASE("cs runs a small preset and tracks the support") {
  const auto r = invoke({"cs", "--preset", "t4-4", "--methods", "GRAP", "--tol",
                         "1e-10", "--seed", "11"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() > 2);
  CHECK(lines[0] == "method,k,error,support_size");
  const auto last = cells_of(lines.back());
  REQUIRE(last.size() == 4);
  CHECK(last[0] == "GRAP");
  CHECK(std::stod(last[2]) <= 1e-10);
  // the planted solution of t4-4 has 3 nonzeros
  CHECK(std::stol(last[3]) == 3);
}

TEST_CASE("trajectory writes the 2D path") {
  const auto r = invoke({"trajectory", "--problem", "subspace2d", "--method", "DR",
                         "--steps", "25", "--seed", "2"});
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 26); // z0 plus 25 steps
  CHECK(lines[0] == "k,z_1,z_2");
  const auto row = cells_of(lines[1]);
  REQUIRE(row.size() == 3);
  CHECK(row[0] == "0");
  const double x = std::stod(row[1]);
  const double y = std::stod(row[2]);
  CHECK(std::hypot(x, y) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("help exits cleanly") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"rates", "--help"}).code == 0);
}

TEST_SUITE_END();

#include "chaoslab/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <random>
#include <sstream>

using namespace chaoslab;

namespace
{

std::string written(const CoefficientMatrix<double>& a, MatrixFormat f)
{
  std::ostringstream out;
  write_matrix(out, a, f);
  return out.str();
}

// line and column of the first ParseError thrown by parse_matrix
std::pair<int, int> error_position(const std::string& content, MatrixFormat f)
{
  try {
    parse_matrix(content, f);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {-1, -1};
}

}  // namespace

TEST_CASE("format_for")
{
  CHECK(format_for("a/b.csv") == MatrixFormat::csv);
  CHECK(format_for("m.json") == MatrixFormat::json);
  CHECK(format_for("m.txt") == MatrixFormat::text);
  CHECK(format_for("m") == MatrixFormat::text);
}

TEST_CASE("parse text, csv and json")
{
  Eigen::Matrix2d expected;
  expected << 1, -2.5, 0, 3e-3;
  CHECK(parse_matrix("2 2\n1 -2.5\n0 +3e-3\n", MatrixFormat::text) == expected);
  CHECK(parse_matrix("2,2\r\n1, -2.5\r\n0,0.003\r\n", MatrixFormat::csv) == expected);
  CHECK(parse_matrix("[[1, -2.5], [0, 0.003]]", MatrixFormat::json) == expected);
  // blank lines are skipped
  CHECK(parse_matrix("\n1 1\n\n  7 \n", MatrixFormat::text)(0, 0) == 7);
}

TEST_CASE("round trip through every format")
{
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(3, 5, [&] { return g(rng); });
  for (const auto f : {MatrixFormat::text, MatrixFormat::csv, MatrixFormat::json})
    REQUIRE(parse_matrix(written(a, f), f) == a);
  CHECK(written(Eigen::MatrixXd::Ones(1, 2), MatrixFormat::text) == "1 2\n1 1\n");
  CHECK(written(Eigen::MatrixXd::Ones(1, 2), MatrixFormat::csv) == "1,2\n1,1\n");
  CHECK(written(Eigen::MatrixXd::Ones(1, 2), MatrixFormat::json) == "[[1.0,1.0]]\n");
}

TEST_CASE("parse errors carry line and column")
{
  CHECK(error_position("2 2\n1 1\n1 x\n", MatrixFormat::text) == std::pair{3, 3});
  CHECK(error_position("2,2\n1,1\n1,  y\n", MatrixFormat::csv) == std::pair{3, 5});
  CHECK(error_position("0 2\n", MatrixFormat::text) == std::pair{1, 1});
  CHECK(error_position("2 2\n1 1\n", MatrixFormat::text).first == 2);
  CHECK(error_position("1 2\n1 1 1\n", MatrixFormat::text) == std::pair{2, 1});
  CHECK(error_position("1 1\ninf\n", MatrixFormat::text) == std::pair{2, 1});
  CHECK(error_position("", MatrixFormat::text) == std::pair{1, 1});
  CHECK(error_position("[[1, 2],\n [3, ]]", MatrixFormat::json) == std::pair{2, 6});
  CHECK(error_position("[[1], [2, 3]]", MatrixFormat::json) == std::pair{0, 0});
  CHECK(error_position("[[\"a\"]]", MatrixFormat::json) == std::pair{0, 0});

  try {
    parse_matrix("2 2\n1 1\n1 x\n", MatrixFormat::text);
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).starts_with("line 3, column 3: "));
  }
}

TEST_CASE("sign matrices")
{
  const auto theta = parse_sign_matrix("2 2\n1 -1\n+1 1\n", MatrixFormat::text);
  CHECK(theta(0, 1) == -1);
  CHECK_THROWS_WITH_AS(parse_sign_matrix("1 2\n1 0.5\n", MatrixFormat::text), doctest::Contains("expected +1 or -1"),
                       ParseError);
  CHECK_THROWS_AS(parse_sign_matrix("2 2\n1 -1\n1 1\n", MatrixFormat::text, true), ParseError);
  CHECK(parse_sign_matrix("[[1,-1],[-1,1]]", MatrixFormat::json, true).symmetric());
  std::ostringstream out;
  write_matrix(out, theta, MatrixFormat::text);
  CHECK(out.str() == "2 2\n1 -1\n1 1\n");
}

TEST_CASE("format_number")
{
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(4) == "4");
  CHECK(format_number(-1.5e-300) == "-1.5e-300");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  const double third = 1.0 / 3;
  CHECK(std::stod(format_number(third)) == third);
}

TEST_CASE("rearrangement csv")
{
  std::ostringstream out;
  write_rearrangement_csv(out, Rearrangement<double>({{6, 0.25}, {2, 0.75}}));
  CHECK(out.str() == "value,cumulative_measure\n6,0.25\n2,1\n");
}

TEST_CASE("search report json")
{
  SearchReport report;
  report.n = 2;
  report.mode = SearchMode::monte_carlo;
  report.value = 3;
  report.samples = 16;
  report.seed = 9;
  report.rng = rng_name;
  report.elapsed_ms = 12.5;
  const auto plain = nlohmann::json::parse(search_report_json(report));
  CHECK(plain["mode"] == "monte_carlo");
  CHECK(plain["seed"] == 9);
  CHECK(plain["rng"] == rng_name);
  CHECK_FALSE(plain.contains("elapsed_ms"));
  CHECK_FALSE(plain.contains("witness"));
  CHECK(nlohmann::json::parse(search_report_json(report, true))["elapsed_ms"] == 12.5);

  report.witness = SignMatrix::constant(1, 2, -1);
  const auto with = nlohmann::json::parse(search_report_json(report));
  CHECK(with["witness"] == nlohmann::json::parse("[[-1,-1]]"));
  // sorted keys: identical reports serialize to identical bytes
  CHECK(search_report_json(report) == search_report_json(report));
}

TEST_CASE("files")
{
  const auto dir = std::filesystem::temp_directory_path() / "chaoslab-test-io";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "m.csv";
  write_file_atomic(path, "1,1\n-4\n");
  CHECK(read_file(path) == "1,1\n-4\n");
  CHECK(read_matrix(path)(0, 0) == -4);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  write_file_atomic(path, "1,1\n1\n");
  CHECK(read_sign_matrix(path)(0, 0) == 1);
  CHECK_THROWS_AS(read_file(dir / "missing.txt"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

#include "chaoslab/dyadic.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <map>
#include <set>

using namespace chaoslab;

namespace
{

// sign sin(2^k π t) at a cell midpoint: the digit-k rule checked against trigonometry
int sine_sign(int k, double t)
{
  return std::sin(std::ldexp(std::numbers::pi, k) * t) > 0 ? 1 : -1;
}

}  // namespace

TEST_CASE("rademacher on named cells")
{
  CHECK(rademacher(1, DyadicPoint::containing(0.25, 1)) == 1);
  CHECK(rademacher(2, DyadicPoint::containing(0.3, 2)) == -1);
  // 5/8 < t < 3/4 has digits 0.101
  const std::array<int, 3> digits{1, 0, 1};
  const auto p = DyadicPoint::from_digits(digits);
  CHECK(p.left() == doctest::Approx(0.625));
  CHECK(rademacher(3, p) == -1);
  CHECK(rademacher(3, p) == sine_sign(3, p.midpoint()));
}

TEST_CASE("rademacher rejects insufficient precision")
{
  CHECK_THROWS_WITH_AS(rademacher(3, DyadicPoint::from_cell(1, 2)), "insufficient precision", std::domain_error);
}

TEST_CASE("digit rule agrees with sign sin(2^k π t) at every midpoint")
{
  for (int m = 1; m <= 10; ++m)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      const auto p = DyadicPoint::from_cell(c, m);
      for (int k = 1; k <= m; ++k)
        REQUIRE(rademacher(k, p) == sine_sign(k, p.midpoint()));
    }
}

TEST_CASE("rademacher is constant on finer cells")
{
  for (int k = 1; k <= 12; ++k) {
    const int m = k + 2;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      const auto fine = DyadicPoint::from_cell(c, m);
      const auto coarse = DyadicPoint::from_cell(c >> (m - k), k);
      REQUIRE(rademacher(k, fine) == rademacher(k, coarse));
    }
  }
}

TEST_CASE("walsh values")
{
  CHECK(walsh(1, DyadicPoint::from_cell(3, 3)) == 1);
  CHECK(walsh(2, DyadicPoint::containing(0.1, 2)) == 1);
  CHECK(walsh(4, DyadicPoint::containing(0.3, 2)) == -1);
  const auto p = DyadicPoint::containing(0.3, 2);
  CHECK(walsh(4, p) == rademacher(2, p) * rademacher(1, p));
}

TEST_CASE("walsh recursion w_{2^i + j} = r_{i+1} w_j")
{
  const int m = 6;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
    const auto p = DyadicPoint::from_cell(c, m);
    for (int i = 0; i < 5; ++i)
      for (std::uint64_t j = 1; j <= (std::uint64_t{1} << i); ++j)
        REQUIRE(walsh((std::uint64_t{1} << i) + j, p) == rademacher(i + 1, p) * walsh(j, p));
  }
}

TEST_CASE("walsh functions are orthonormal")
{
  for (int k = 0; k <= 4; ++k) {
    const int m = k + 1;
    const std::uint64_t size = std::uint64_t{1} << k;
    for (std::uint64_t i = 1; i <= size; ++i)
      for (std::uint64_t j = 1; j <= size; ++j) {
        long sum = 0;
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
          const auto p = DyadicPoint::from_cell(c, m);
          sum += walsh(i, p) * walsh(j, p);
        }
        REQUIRE(std::ldexp(static_cast<double>(sum), -m) == (i == j ? 1.0 : 0.0));
      }
  }
}

TEST_CASE("dyadic addition")
{
  const std::array<int, 2> s10{1, 0}, s01{0, 1}, s11{1, 1}, s00{0, 0};
  const auto a = DyadicPoint::from_digits(s10);
  CHECK(dyadic_add(a, a) == DyadicPoint::from_digits(s00));
  CHECK(dyadic_add(a, DyadicPoint::from_digits(s01)) == DyadicPoint::from_digits(s11));
  CHECK_THROWS_AS(dyadic_add(a, DyadicPoint::from_cell(0, 3)), std::invalid_argument);
}

TEST_CASE("dyadic addition is an abelian group of involutions permuting the cells")
{
  for (int m = 1; m <= 6; ++m) {
    const std::uint64_t count = std::uint64_t{1} << m;
    const DyadicPoint zero = DyadicPoint::from_cell(0, m);
    for (std::uint64_t u = 0; u < count; ++u) {
      const auto pu = DyadicPoint::from_cell(u, m);
      REQUIRE(dyadic_add(pu, zero) == pu);
      REQUIRE(dyadic_add(pu, pu) == zero);
      std::set<std::uint64_t> image;
      for (std::uint64_t s = 0; s < count; ++s) {
        const auto ps = DyadicPoint::from_cell(s, m);
        REQUIRE(dyadic_add(ps, pu) == dyadic_add(pu, ps));
        image.insert(dyadic_add(ps, pu).cell());
        for (std::uint64_t w = 0; w < count; w += 3) {
          const auto pw = DyadicPoint::from_cell(w, m);
          REQUIRE(dyadic_add(dyadic_add(ps, pu), pw) == dyadic_add(ps, dyadic_add(pu, pw)));
        }
      }
      REQUIRE(image.size() == count);
    }
  }
}

TEST_CASE("translation identity in the shifted indexing r~_1 = 1, r~_i = r_{i-1}")
{
  // r~_1(s ∔ u) = r~_1(s) always; for i >= 2 r~_i(s ∔ u) = r~_i(s) iff digit i-1 of u is 0
  for (int i = 2; i <= 8; ++i) {
    const int m = i - 1;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s)
      for (std::uint64_t u = 0; u < (std::uint64_t{1} << m); ++u) {
        const auto ps = DyadicPoint::from_cell(s, m), pu = DyadicPoint::from_cell(u, m);
        const bool same = rademacher(i - 1, dyadic_add(ps, pu)) == rademacher(i - 1, ps);
        REQUIRE(same == (pu.digit(i - 1) == 0));
      }
  }
}

TEST_CASE("precision 2 instance of the translation identity over all 16 pairs")
{
  // r~_2 = r_1 keeps its value under s -> s ∔ u exactly when digit 1 of u is 0
  int kept = 0;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t u = 0; u < 4; ++u) {
      const auto ps = DyadicPoint::from_cell(s, 2), pu = DyadicPoint::from_cell(u, 2);
      const bool same = rademacher(1, dyadic_add(ps, pu)) == rademacher(1, ps);
      CHECK(same == (pu.digit(1) == 0));
      kept += same;
      CHECK(rademacher(2, dyadic_add(ps, pu)) == rademacher(2, ps) * rademacher(2, pu));
    }
  CHECK(kept == 8);
}

TEST_CASE("cells, digits and bit reversal")
{
  for (int m = 1; m <= 8; ++m)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
      const auto p = DyadicPoint::from_cell(c, m);
      REQUIRE(p.cell() == c);
      REQUIRE(p.digits() == reverse_bits(c, m));
      REQUIRE(p.left() == std::ldexp(static_cast<double>(c), -m));
      REQUIRE(DyadicPoint::containing(p.midpoint(), m) == p);
    }
  CHECK_THROWS(DyadicPoint(0, 0));
  CHECK_THROWS(DyadicPoint(0, 64));
  CHECK_THROWS(DyadicPoint(4, 2));
}

TEST_CASE("materialize_1d")
{
  SUBCASE("single coefficient")
  {
    const auto f = materialize_1d(Eigen::VectorXd::Ones(1));
    CHECK(f.values()(0) == 1);
    CHECK(f.values()(1) == -1);
    CHECK(f.weight() == 0.5);
  }
  SUBCASE("two coefficients")
  {
    const auto f = materialize_1d(Eigen::VectorXd::Ones(2));
    CHECK(f.values() == Eigen::Vector4d(2, 0, 0, -2));
  }
  SUBCASE("binomial law of (1/2)(r_1 + ... + r_4)")
  {
    const auto f = materialize_1d(Eigen::VectorXd::Constant(4, 0.5));
    std::map<double, int> counts;
    for (Eigen::Index k = 0; k < f.values().size(); ++k)
      ++counts[f.values()(k)];
    CHECK(counts == std::map<double, int>{{-2, 1}, {-1, 4}, {0, 6}, {1, 4}, {2, 1}});
    CHECK(f.weight() * f.values().size() == 1);
  }
  SUBCASE("values match the Rademacher functions on each cell")
  {
    const Eigen::Vector3d c(0.5, -2, 3);
    const auto f = materialize_1d(c);
    for (std::uint64_t cell = 0; cell < 8; ++cell) {
      const auto p = DyadicPoint::from_cell(cell, 3);
      const double expected = 0.5 * rademacher(1, p) - 2 * rademacher(2, p) + 3 * rademacher(3, p);
      REQUIRE(f(p.digits()) == expected);
    }
  }
  SUBCASE("cap")
  {
    Caps caps;
    caps.materialize_bits = 3;
    CHECK_THROWS_WITH_AS(materialize_1d(Eigen::VectorXd::Ones(4), caps), doctest::Contains("enumeration too large"),
                         cap_error);
  }
}

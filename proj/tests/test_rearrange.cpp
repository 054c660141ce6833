#include "chaoslab/chaos.hpp"
#include "chaoslab/rearrange.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

using namespace chaoslab;

namespace
{

// μ{(s,t): ln(e/s) ln(e/t) > z} by Gauss–Kronrod over s in (0, 1]:
// for fixed s with a = ln(e/s) >= 1 the t-section has measure min(1, e^{1 - z/a}).
double L_oracle(double z)
{
  const auto section = [z](double s) {
    const double a = 1 - std::log(s);
    return std::min(1.0, std::exp(1 - z / a));
  };
  const double kink = std::exp(1 - z);  // a >= z below this point, where the section is all of (0,1]
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  return kink + GK::integrate(section, kink, 1.0, 15, 1e-13);
}

// the displayed integral form e^2 ∫_1^∞ e^{-u - z/u} du, by Gauss–Kronrod on a mapped half line
double integral_form_oracle(double z)
{
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const auto f = [z](double u) { return std::exp(2 - u - z / u); };
  return GK::integrate(f, 1.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
}

}  // namespace

TEST_CASE("distribution examples")
{
  const auto r1 = materialize_1d(Eigen::VectorXd::Ones(1));
  const auto d = distribution(r1);
  CHECK(d.measure_above(0.5) == 1);
  CHECK(d.measure_above(0.999) == 1);
  CHECK(d.measure_above(1) == 0);
  CHECK(d.measure_above(2) == 0);

  const auto x = distribution(eval_decoupled(Eigen::MatrixXd::Ones(2, 2)));
  CHECK(x.measure_above(3) == 4.0 / 16);

  const auto zero = distribution(eval_decoupled(Eigen::MatrixXd::Zero(2, 2)));
  CHECK(zero.measure_above(1e-9) == 0);
  CHECK(zero.measure_above(5) == 0);
}

TEST_CASE("rearrangement examples")
{
  const auto r = rearrangement(materialize_1d(Eigen::VectorXd::Ones(1)));
  REQUIRE(r.size() == 1);
  CHECK(r.value_at(0.001) == 1);
  CHECK(r.value_at(1) == 1);

  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(3, 3);
  c.diagonal().setZero();
  const auto s = rearrangement(eval_undecoupled(c));
  REQUIRE(s.size() == 2);
  CHECK(s.steps()[0].value == 6);
  CHECK(s.steps()[0].mass == 0.25);
  CHECK(s.steps()[1].value == 2);
  CHECK(s.steps()[1].mass == 0.75);
  CHECK_THROWS_AS(s.value_at(0), std::invalid_argument);
}

TEST_CASE("all-ones 2 x 2 block on indices 3, 4 is at least 4 on a set of measure 2^{-6}")
{
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(4, 4);
  y.bottomRightCorner(2, 2).setOnes();
  const auto r = rearrangement(eval_decoupled(y));
  CHECK(r.value_at(std::ldexp(1.0, -6)) >= 4);
  CHECK(r.value_at(std::ldexp(1.0, -7)) >= 4);
}

TEST_CASE("rearrangement and distribution are consistent at every breakpoint")
{
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return double(small(rng)); });
    const auto x = eval_decoupled(a);
    const auto r = rearrangement(x);
    const auto d = distribution(x);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double v = r.steps()[k].value, t = r.breakpoints()[k];
      if (v == 0)
        continue;
      REQUIRE(d.measure_above(v - 1e-9) >= t - 1e-15);
      REQUIRE(d.measure_above(v) < t);
    }
    // mass and integral preservation
    REQUIRE(r.total_mass() == doctest::Approx(1).epsilon(1e-15));
    REQUIRE(r.integral(1) == doctest::Approx(x.values().cwiseAbs().sum() * x.weight()).epsilon(1e-13));
  }
}

TEST_CASE("rearrangement ignores relabelling of sample points")
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(64, [&] { return g(rng); });
  const StepFunction1D<double> f(6, v);
  std::vector<Eigen::Index> order(64);
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::VectorXd w(64);
    for (Eigen::Index k = 0; k < 64; ++k)
      w(k) = v(order[static_cast<std::size_t>(k)]);
    REQUIRE(equimeasurable(f, StepFunction1D<double>(6, w)));
  }
}

TEST_CASE("equimeasurable")
{
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3), q = p;
  p(0, 1) = 1;
  q(2, 0) = 1;
  CHECK(equimeasurable(eval_decoupled(p), eval_decoupled(q)));
  const auto r1 = materialize_1d(Eigen::VectorXd::Ones(1));
  CHECK_FALSE(equimeasurable(r1, materialize_1d(Eigen::VectorXd::Constant(1, 2.0))));
  // different sample spaces, same law
  CHECK(equimeasurable(r1, eval_decoupled(Eigen::MatrixXd::Ones(1, 1))));
}

TEST_CASE("canonical form merges values within the snap")
{
  const Rearrangement<double> r({{1.0, 0.25}, {1.0 + 1e-13, 0.25}, {-0.5, 0.5}, {0.2, 0}});
  REQUIRE(r.size() == 2);
  CHECK(r.steps()[0].mass == 0.5);
  CHECK(r.steps()[1].value == 0.5);
  CHECK(r.integral(0.75) == doctest::Approx(0.625));
  CHECK(r.scaled(-2).max() == doctest::Approx(2));
  CHECK_THROWS_AS(Rearrangement<double>({{1.0, -0.1}}), std::invalid_argument);
}

TEST_CASE("L(z) against an independent quadrature")
{
  for (const double z : {1.0, 1.5, 2.0, 4.0, 9.0, 16.0, 25.0, 40.0}) {
    const double oracle = L_oracle(z);
    REQUIRE(log_distribution_L(z) == doctest::Approx(oracle).epsilon(1e-8));
  }
  CHECK(log_distribution_L(1) == doctest::Approx(1).epsilon(1e-9));
  CHECK(log_distribution_L(4) == doctest::Approx(0.348905264650348751).epsilon(1e-9));
  CHECK(log_distribution_L(25) == doctest::Approx(0.00137796832936144132).epsilon(1e-9));
}

TEST_CASE("the integral form is an upper bound that merges with L(z)")
{
  for (const double z : {1.0, 4.0, 9.0, 16.0, 25.0}) {
    const double form = log_distribution_integral_form(z);
    REQUIRE(form == doctest::Approx(integral_form_oracle(z)).epsilon(1e-8));
    REQUIRE(form >= log_distribution_L(z));
  }
  CHECK(log_distribution_integral_form(1) == doctest::Approx(1.53347684706868857).epsilon(1e-9));
  CHECK(log_distribution_integral_form(25) / log_distribution_L(25) == doctest::Approx(1).epsilon(1e-8));
}

TEST_CASE("L(z) stays inside its two-sided bracket and decreases")
{
  double previous = 2;
  for (const double z : {1.0, 4.0, 9.0, 16.0, 25.0}) {
    const double L = log_distribution_L(z);
    const auto [lo, hi] = log_distribution_bounds(z);
    CHECK(L >= lo);
    CHECK(L <= hi);
    CHECK(L < previous);
    previous = L;
  }
  CHECK(log_distribution_bounds(1).first == doctest::Approx(0.5));
  CHECK(log_distribution_bounds(4).first == doctest::Approx(0.5 * std::exp(-2.0)));
  CHECK(log_distribution_bounds(25).second == doctest::Approx(2 * std::exp(-3.0)));
}

TEST_CASE("L(z) input validation")
{
  CHECK_THROWS_AS(log_distribution_L(0.5), std::invalid_argument);
  CHECK_THROWS_AS(log_distribution_L(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(log_distribution_L(4, 0), std::invalid_argument);
}

TEST_CASE("adaptive Simpson")
{
  const auto r = adaptive_simpson([](double x) { return std::exp(-x); }, 0, 5, 1e-12);
  CHECK(r.value == doctest::Approx(1 - std::exp(-5.0)).epsilon(1e-12));
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1 / std::sqrt(std::abs(x - 0.3)); }, 0, 1, 1e-15, 8),
                  std::runtime_error);
}

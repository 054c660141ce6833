#include "chaoslab/chaos.hpp"
#include "chaoslab/rearrange.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace chaoslab;

namespace
{

std::mt19937_64 rng(7);

Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index m)
{
  std::uniform_real_distribution<double> u(-1, 1);
  return Eigen::MatrixXd::NullaryExpr(n, m, [&] { return u(rng); });
}

double sign_of(SignMask mask, Eigen::Index i) { return ((mask >> i) & 1) ? -1.0 : 1.0; }

// Σ a_ij ε_i δ_j term by term
double direct_decoupled(const Eigen::MatrixXd& a, SignMask e, SignMask d)
{
  double v = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      v += a(i, j) * sign_of(e, i) * sign_of(d, j);
  return v;
}

double direct_undecoupled(const Eigen::MatrixXd& b, SignMask e)
{
  double v = 0;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      if (i != j)
        v += b(i, j) * sign_of(e, i) * sign_of(e, j);
  return v;
}

std::map<double, double> law(const Eigen::MatrixXd& values, double weight)
{
  std::map<double, double> out;
  for (Eigen::Index k = 0; k < values.size(); ++k)
    out[values.reshaped()(k)] += weight;
  return out;
}

}  // namespace

TEST_CASE("eval_decoupled examples")
{
  const auto x = eval_decoupled(Eigen::MatrixXd::Ones(1, 1));
  CHECK(law(x.values(), x.weight()) == std::map<double, double>{{-1, 0.5}, {1, 0.5}});

  CHECK(eval_decoupled(Eigen::MatrixXd::Ones(2, 2))(0, 0) == 4);

  const auto id = eval_decoupled(Eigen::MatrixXd::Identity(2, 2));
  CHECK(law(id.values(), id.weight()) == std::map<double, double>{{-2, 0.25}, {0, 0.5}, {2, 0.25}});
}

TEST_CASE("eval_decoupled matches term-by-term evaluation")
{
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(1 + trial % 4, 1 + (trial / 4) % 4);
    const auto x = eval_decoupled(a);
    for (SignMask e = 0; e < (SignMask{1} << a.rows()); ++e)
      for (SignMask d = 0; d < (SignMask{1} << a.cols()); ++d)
        REQUIRE(x(e, d) == doctest::Approx(direct_decoupled(a, e, d)).epsilon(1e-14));
  }
}

TEST_CASE("eval_undecoupled examples")
{
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  b(0, 1) = 1;
  const auto y = eval_undecoupled(b);
  CHECK(law(y.values(), y.weight()) == std::map<double, double>{{-1, 0.5}, {1, 0.5}});

  b(0, 1) = b(1, 0) = 0.5;
  CHECK(equimeasurable(eval_undecoupled(b), y));

  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(3, 3);
  c.diagonal().setZero();
  const auto z = eval_undecoupled(c);
  CHECK(law(z.values(), z.weight()) == std::map<double, double>{{-2, 0.75}, {6, 0.25}});

  CHECK_THROWS_WITH_AS(eval_undecoupled(Eigen::MatrixXd::Ones(2, 2)), doctest::Contains("diagonal must vanish"),
                       std::invalid_argument);
  CHECK_THROWS_AS(eval_undecoupled(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("eval_undecoupled matches term-by-term evaluation")
{
  for (int n = 1; n <= 6; ++n) {
    Eigen::MatrixXd b = random_matrix(n, n);
    b.diagonal().setZero();
    const auto y = eval_undecoupled(b);
    for (SignMask e = 0; e < (SignMask{1} << n); ++e)
      REQUIRE(y(e) == doctest::Approx(direct_undecoupled(b, e)).epsilon(1e-14));
  }
}

TEST_CASE("decoupling identity")
{
  SUBCASE("single term")
  {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
    b(0, 1) = 1;
    CHECK(decouple_identity_rhs(b, 2).values() == eval_undecoupled(b).values());
  }
  SUBCASE("zero")
  {
    CHECK(decouple_identity_rhs(Eigen::MatrixXd::Zero(4, 4), 4).values().isZero());
  }
  SUBCASE("random, every N up to 8")
  {
    for (int N = 1; N <= 8; ++N)
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd b = random_matrix(N, N);
        b.diagonal().setZero();
        const auto lhs = eval_undecoupled(b);
        const auto rhs = decouple_identity_rhs(b, N);
        REQUIRE((lhs.values() - rhs.values()).cwiseAbs().maxCoeff() <= 1e-12);
      }
  }
  SUBCASE("N below n truncates to the leading block")
  {
    Eigen::MatrixXd b = random_matrix(5, 5);
    b.diagonal().setZero();
    const Eigen::MatrixXd head = b.topLeftCorner(3, 3);
    CHECK((decouple_identity_rhs(b, 3).values() - eval_undecoupled(head).values()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_THROWS_AS(decouple_identity_rhs(b, 6), std::invalid_argument);
  }
  SUBCASE("subset cap")
  {
    Caps caps;
    caps.subset_bits = 4;
    CHECK_THROWS_AS(decouple_identity_rhs(Eigen::MatrixXd::Zero(5, 5), 5, caps), cap_error);
  }
}

TEST_CASE("apply_signs")
{
  const auto a = random_matrix(3, 4);
  CHECK(apply_signs(a, SignMatrix::constant(3, 4)) == a);
  CHECK(apply_signs(a, SignMatrix::constant(3, 4, -1)) == -a);
  CHECK(equimeasurable(eval_decoupled(apply_signs(a, SignMatrix::constant(3, 4, -1))), eval_decoupled(a)));

  const std::uint64_t bits = 0b101101100110;
  const auto theta = SignMatrix::from_bits(3, 4, std::span(&bits, 1));
  CHECK(apply_signs(apply_signs(a, theta), theta) == a);
  CHECK_THROWS_AS(apply_signs(a, SignMatrix::constant(4, 3)), std::invalid_argument);
}

TEST_CASE("SignMatrix validation and masks")
{
  Eigen::MatrixXi bad(2, 2);
  bad << 1, 0, 1, 1;
  CHECK_THROWS_AS(static_cast<void>(SignMatrix(bad)), std::invalid_argument);
  Eigen::MatrixXi asym(2, 2);
  asym << 1, -1, 1, 1;
  CHECK_THROWS_AS(SignMatrix(asym, true), std::invalid_argument);
  const SignMatrix theta(asym);
  CHECK(theta.column_mask(1) == 0b01);
  CHECK(theta.row_mask(0) == 0b10);
  CHECK(theta.cast<double>()(0, 1) == -1);
}

TEST_CASE("chaos_coefficients recovers the coefficients")
{
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  a(0, 1) = 1;
  CHECK(chaos_coefficients(eval_decoupled(a), 2, 2) == a);

  const StepFunction2D<double> one(2, 3, Eigen::MatrixXd::Ones(4, 8));
  CHECK(chaos_coefficients(one, 2, 3).isZero());

  for (int trial = 0; trial < 10; ++trial) {
    const auto r = random_matrix(3, 3);
    REQUIRE((chaos_coefficients(eval_decoupled(r), 3, 3) - r).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // projection onto a smaller block
  const auto big = random_matrix(4, 3);
  CHECK((chaos_coefficients(eval_decoupled(big), 2, 2) - big.topLeftCorner(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(chaos_coefficients(eval_decoupled(big), 5, 2), std::invalid_argument);
}

TEST_CASE("shift_map equimeasurability")
{
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const auto b = shift_map(one);
  CHECK(b(0, 1) == 1);
  CHECK(b.sum() == 1);
  CHECK(equimeasurable(eval_undecoupled(b), eval_decoupled(one)));

  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(3, 3);
    REQUIRE(equimeasurable(eval_undecoupled(shift_map(a)), eval_decoupled(a)));
  }

  // all-ones 2 x 2: the value 4 needs every sign equal, which is 2 of the 16 sign patterns
  const auto ones = Eigen::MatrixXd::Ones(2, 2).eval();
  const auto y = eval_undecoupled(shift_map(ones));
  const auto x = eval_decoupled(ones);
  CHECK(law(y.values(), y.weight()) == law(x.values(), x.weight()));
  CHECK(law(y.values(), y.weight())[4] == 1.0 / 8);
  CHECK(y(0) == 4);
  CHECK(y.weight() == 1.0 / 16);
  const auto r = rearrangement(y);
  CHECK(r.max() == 4);
  CHECK(r.steps().front().mass == 1.0 / 4);
  CHECK(same_rearrangement(r, rearrangement(x)));
}

TEST_CASE("relabelling indices keeps the distribution")
{
  // index blocks up to 10: shifting rows and columns inside a 5 x 5 window
  for (int trial = 0; trial < 6; ++trial) {
    const auto a = random_matrix(2, 3);
    const auto x = eval_decoupled(a);
    for (Eigen::Index ro = 0; ro <= 3; ++ro)
      for (Eigen::Index co = 0; co <= 2; ++co)
        REQUIRE(equimeasurable(eval_decoupled(reindex(a, 5, 5, ro, co)), x));
  }
  // r_1(s) r_2(t) and r_3(s) r_1(t)
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3), q = p;
  p(0, 1) = 1;
  q(2, 0) = 1;
  CHECK(equimeasurable(eval_decoupled(p), eval_decoupled(q)));
  // a permutation of the rows keeps it too
  const auto a = random_matrix(4, 4);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
  perm.indices() << 2, 0, 3, 1;
  CHECK(equimeasurable(eval_decoupled((perm * a).eval()), eval_decoupled(a)));
}

TEST_CASE("materialization cap")
{
  Caps caps;
  caps.materialize_bits = 6;
  CHECK_NOTHROW(eval_decoupled(Eigen::MatrixXd::Ones(3, 3), caps));
  CHECK_THROWS_AS(eval_decoupled(Eigen::MatrixXd::Ones(3, 4), caps), cap_error);
  CHECK_THROWS_AS(eval_undecoupled(Eigen::MatrixXd::Zero(7, 7), caps), cap_error);
}

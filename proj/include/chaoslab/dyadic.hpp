#ifndef CHAOSLAB_DYADIC_HPP
#define CHAOSLAB_DYADIC_HPP

#include "chaoslab/common.hpp"

#include <cmath>
#include <concepts>
#include <span>

namespace chaoslab
{

/// Open dyadic cell of generation `precision`, identified by its binary digits.
///
/// Digit k (1-based, most significant first) is stored in bit k-1 of `digits()`,
/// which is the same packing as SignMask: the digits of a cell are exactly the
/// sign pattern of r_1..r_m on it. The cell covers
/// (sum s_k 2^-k, sum s_k 2^-k + 2^-m).
class DyadicPoint
{
public:
  static constexpr int max_precision = 63;

  DyadicPoint(std::uint64_t digits, int precision);

  /// Cell number `cell` (0-based, left to right) of generation `precision`.
  static DyadicPoint from_cell(std::uint64_t cell, int precision);
  static DyadicPoint from_digits(std::span<const int> digits);
  /// Cell of generation `precision` containing the (non-dyadic) point t in (0,1).
  static DyadicPoint containing(double t, int precision);

  int precision() const { return precision_; }
  std::uint64_t digits() const { return digits_; }
  int digit(int k) const;

  std::uint64_t cell() const;
  double left() const;
  double midpoint() const;

  bool operator==(const DyadicPoint&) const = default;

private:
  std::uint64_t digits_;
  int precision_;
};

/// r_k on the cell containing p: +1 if digit k is 0, -1 if it is 1.
int rademacher(int k, const DyadicPoint& p);

/// Walsh function w_j, w_1 = 1, w_{2^i + j} = r_{i+1} w_j (1 <= j <= 2^i).
///
/// This is the ordering w_1, w_2, ... used by the sign construction, written in
/// the library's Rademacher indexing (r_1 is the first non-constant function).
/// w_1..w_{2^k} only involve r_1..r_k, so they are constant on generation-k cells.
/// Bit b of (j-1) selects the factor r_{b+1}; this is the Paley ordering.
int walsh(std::uint64_t j, const DyadicPoint& p);

/// s ∔ u: digitwise addition mod 2.
DyadicPoint dyadic_add(const DyadicPoint& s, const DyadicPoint& u);

/// Bit reversal of the low `bits` bits; maps cell numbers to digit masks and back.
std::uint64_t reverse_bits(std::uint64_t x, int bits);

/// The 2^n x n table of all sign vectors, row = mask.
template <typename Scalar = double>
Matrix<Scalar> sign_table(int n)
{
  const Eigen::Index rows = Eigen::Index{1} << n;
  return Matrix<Scalar>::NullaryExpr(rows, n, [](Eigen::Index mask, Eigen::Index i) {
    return ((mask >> i) & 1) ? Scalar(-1) : Scalar(1);
  });
}

/// Step function on the interval, constant on generation-n cells.
/// values()(mask) is the value on every cell whose sign pattern is `mask`.
template <typename Scalar = double>
class StepFunction1D
{
public:
  using scalar_type = Scalar;

  StepFunction1D() = default;
  StepFunction1D(int generation, Vector<Scalar> values) : generation_(generation), values_(std::move(values))
  {
    if (values_.size() != (Eigen::Index{1} << generation_))
      throw std::invalid_argument("StepFunction1D: value count must be 2^generation");
  }

  int generation() const { return generation_; }
  int bits() const { return generation_; }
  Scalar weight() const { return std::ldexp(Scalar(1), -generation_); }
  const Vector<Scalar>& values() const { return values_; }
  Scalar operator()(SignMask eps) const { return values_(static_cast<Eigen::Index>(eps)); }

private:
  int generation_ = 0;
  Vector<Scalar> values_ = Vector<Scalar>::Zero(1);
};

/// Step function on the square; values()(eps, delta) with eps the s-pattern and
/// delta the t-pattern.
template <typename Scalar = double>
class StepFunction2D
{
public:
  using scalar_type = Scalar;

  StepFunction2D() = default;
  StepFunction2D(int n, int m, Matrix<Scalar> values) : n_(n), m_(m), values_(std::move(values))
  {
    if (values_.rows() != (Eigen::Index{1} << n_) || values_.cols() != (Eigen::Index{1} << m_))
      throw std::invalid_argument("StepFunction2D: value table must be 2^n x 2^m");
  }

  int rows_generation() const { return n_; }
  int cols_generation() const { return m_; }
  int bits() const { return n_ + m_; }
  Scalar weight() const { return std::ldexp(Scalar(1), -(n_ + m_)); }
  const Matrix<Scalar>& values() const { return values_; }
  Scalar operator()(SignMask eps, SignMask delta) const
  {
    return values_(static_cast<Eigen::Index>(eps), static_cast<Eigen::Index>(delta));
  }

private:
  int n_ = 0;
  int m_ = 0;
  Matrix<Scalar> values_ = Matrix<Scalar>::Zero(1, 1);
};

/// Anything with uniformly weighted values on a finite sample space.
template <typename F>
concept StepFunction = requires(const F& f) {
  typename F::scalar_type;
  { f.values() };
  { f.weight() } -> std::convertible_to<typename F::scalar_type>;
  { f.bits() } -> std::convertible_to<int>;
};

/// sum_i c_i r_i as a step function of generation c.size().
template <typename Derived>
StepFunction1D<typename Derived::Scalar> materialize_1d(const Eigen::MatrixBase<Derived>& coeffs,
                                                        const Caps& caps = {})
{
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(coeffs.size());
  if (n < 1)
    throw std::invalid_argument("materialize_1d: need at least one coefficient");
  require_bits(n, caps.materialize_bits, "materialize_1d");
  Vector<Scalar> values = sign_table<Scalar>(n) * coeffs.derived().reshaped();
  return StepFunction1D<Scalar>(n, std::move(values));
}

}  // namespace chaoslab

#endif  // CHAOSLAB_DYADIC_HPP

#ifndef CHAOSLAB_CHAOS_HPP
#define CHAOSLAB_CHAOS_HPP

#include "chaoslab/dyadic.hpp"

namespace chaoslab
{

/// Coefficients a_{i,j} of sum a_{i,j} r_i(s) r_j(t) (or b_{i,j} r_i(t) r_j(t)).
/// Row i, column j hold the coefficient of r_{i+1} ⊗ r_{j+1}.
template <typename Scalar = double>
using CoefficientMatrix = Matrix<Scalar>;

/// ±1 matrix θ. Symmetric arrangements carry the flag and are validated.
class SignMatrix
{
public:
  SignMatrix() = default;
  explicit SignMatrix(Eigen::MatrixXi entries, bool symmetric = false);

  static SignMatrix constant(Eigen::Index rows, Eigen::Index cols, int value = 1);
  /// Column-major bit layout: bit (j*rows + i) set <=> θ(i,j) = -1.
  static SignMatrix from_bits(Eigen::Index rows, Eigen::Index cols, std::span<const std::uint64_t> words);

  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  bool symmetric() const { return symmetric_; }
  int operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  const Eigen::MatrixXi& entries() const { return entries_; }

  template <typename Scalar = double>
  CoefficientMatrix<Scalar> cast() const
  {
    return entries_.cast<Scalar>();
  }

  /// bit i set <=> θ(i,j) = -1. Requires rows() <= 64.
  SignMask column_mask(Eigen::Index j) const;
  /// bit j set <=> θ(i,j) = -1. Requires cols() <= 64.
  SignMask row_mask(Eigen::Index i) const;

  bool operator==(const SignMatrix& other) const { return entries_ == other.entries_; }

private:
  Eigen::MatrixXi entries_ = Eigen::MatrixXi::Ones(1, 1);
  bool symmetric_ = false;
};

/// x(s,t) = sum a_{i,j} r_i(s) r_j(t) on all (eps, delta); value = eps^T A delta.
template <typename Derived>
StepFunction2D<typename Derived::Scalar> eval_decoupled(const Eigen::MatrixBase<Derived>& a, const Caps& caps = {})
{
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  if (n < 1 || m < 1)
    throw std::invalid_argument("eval_decoupled: empty coefficient matrix");
  require_bits(n + m, caps.materialize_bits, "eval_decoupled");
  Matrix<Scalar> values = sign_table<Scalar>(n) * a.derived() * sign_table<Scalar>(m).transpose();
  return StepFunction2D<Scalar>(n, m, std::move(values));
}

namespace detail
{
template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& b, const char* who)
{
  if (b.rows() != b.cols() || b.rows() < 1)
    throw std::invalid_argument(std::string(who) + ": coefficient matrix must be square");
}

/// eps^T B eps for every sign vector eps.
template <typename Derived>
Vector<typename Derived::Scalar> quadratic_form_values(const Eigen::MatrixBase<Derived>& b)
{
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> signs = sign_table<Scalar>(static_cast<int>(b.rows()));
  return ((signs * b.derived()).array() * signs.array()).rowwise().sum().matrix();
}
}  // namespace detail

/// y(t) = sum_{i != j} b_{i,j} r_i(t) r_j(t). The diagonal must be zero.
template <typename Derived>
StepFunction1D<typename Derived::Scalar> eval_undecoupled(const Eigen::MatrixBase<Derived>& b, const Caps& caps = {})
{
  using Scalar = typename Derived::Scalar;
  detail::require_square(b, "eval_undecoupled");
  if ((b.diagonal().array() != Scalar(0)).any())
    throw std::invalid_argument("diagonal must vanish");
  const int n = static_cast<int>(b.rows());
  require_bits(n, caps.materialize_bits, "eval_undecoupled");
  return StepFunction1D<Scalar>(n, detail::quadratic_form_values(b));
}

/// Right-hand side of the decoupling identity
///   y^N = 2^{1-N} sum_{D ⊂ {1..N}} sum_{i ∈ D, j ∉ D} a_{i,j} r_i r_j,  a = b + b^T,
/// evaluated term by term over every subset D. Uses the top-left N x N block of b.
template <typename Derived>
StepFunction1D<typename Derived::Scalar> decouple_identity_rhs(const Eigen::MatrixBase<Derived>& b, int N,
                                                               const Caps& caps = {})
{
  using Scalar = typename Derived::Scalar;
  detail::require_square(b, "decouple_identity_rhs");
  if (N < 1 || N > b.rows())
    throw std::invalid_argument("decouple_identity_rhs: need 1 <= N <= n");
  require_bits(N, caps.subset_bits, "decouple_identity_rhs subsets");
  require_bits(N, caps.materialize_bits, "decouple_identity_rhs");

  const Matrix<Scalar> head = b.derived().topLeftCorner(N, N);
  const Matrix<Scalar> a = head + head.transpose();
  const Matrix<Scalar> signs = sign_table<Scalar>(N);
  Vector<Scalar> sum = Vector<Scalar>::Zero(signs.rows());
  Matrix<Scalar> part(N, N);
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << N); ++subset) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        part(i, j) = (((subset >> i) & 1) && !((subset >> j) & 1)) ? a(i, j) : Scalar(0);
    sum += ((signs * part).array() * signs.array()).rowwise().sum().matrix();
  }
  sum *= std::ldexp(Scalar(1), 1 - N);
  return StepFunction1D<Scalar>(N, std::move(sum));
}

/// Coefficients of T_θ x: entrywise θ_{i,j} a_{i,j}.
template <typename Derived>
CoefficientMatrix<typename Derived::Scalar> apply_signs(const Eigen::MatrixBase<Derived>& a, const SignMatrix& theta)
{
  using Scalar = typename Derived::Scalar;
  if (a.rows() != theta.rows() || a.cols() != theta.cols())
    throw std::invalid_argument("apply_signs: dimension mismatch");
  return a.derived().cwiseProduct(theta.cast<Scalar>());
}

/// a_{i,j}(x) = ∫∫ x(s,t) r_i(s) r_j(t) ds dt for i <= n, j <= m.
/// eval_decoupled(chaos_coefficients(x, n, m)) is the orthogonal projection of x.
template <typename Scalar>
CoefficientMatrix<Scalar> chaos_coefficients(const StepFunction2D<Scalar>& x, int n, int m)
{
  if (n < 1 || m < 1)
    throw std::invalid_argument("chaos_coefficients: dimensions must be positive");
  if (n > x.rows_generation() || m > x.cols_generation())
    throw std::invalid_argument("chaos_coefficients: generation too small");
  const Matrix<Scalar> s = sign_table<Scalar>(x.rows_generation()).leftCols(n);
  const Matrix<Scalar> t = sign_table<Scalar>(x.cols_generation()).leftCols(m);
  return x.weight() * (s.transpose() * x.values() * t);
}

/// b_{i, j+n} = a_{i,j}: the interval polynomial sum a_{i,j} r_i(t) r_{j+n}(t), whose
/// modulus is equimeasurable with |sum a_{i,j} r_i(s) r_j(t)|.
template <typename Derived>
CoefficientMatrix<typename Derived::Scalar> shift_map(const Eigen::MatrixBase<Derived>& a)
{
  using Scalar = typename Derived::Scalar;
  detail::require_square(a, "shift_map");
  const Eigen::Index n = a.rows();
  CoefficientMatrix<Scalar> b = CoefficientMatrix<Scalar>::Zero(2 * n, 2 * n);
  b.topRightCorner(n, n) = a;
  return b;
}

/// Embeds a into a zero matrix of size rows x cols with a(0,0) at (row_offset, col_offset).
template <typename Derived>
CoefficientMatrix<typename Derived::Scalar> reindex(const Eigen::MatrixBase<Derived>& a, Eigen::Index rows,
                                                    Eigen::Index cols, Eigen::Index row_offset,
                                                    Eigen::Index col_offset)
{
  using Scalar = typename Derived::Scalar;
  if (row_offset + a.rows() > rows || col_offset + a.cols() > cols || row_offset < 0 || col_offset < 0)
    throw std::invalid_argument("reindex: block does not fit");
  CoefficientMatrix<Scalar> out = CoefficientMatrix<Scalar>::Zero(rows, cols);
  out.block(row_offset, col_offset, a.rows(), a.cols()) = a;
  return out;
}

}  // namespace chaoslab

#endif  // CHAOSLAB_CHAOS_HPP

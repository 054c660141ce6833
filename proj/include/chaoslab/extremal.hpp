#ifndef CHAOSLAB_EXTREMAL_HPP
#define CHAOSLAB_EXTREMAL_HPP

#include "chaoslab/chaos.hpp"
#include "chaoslab/parallel.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace chaoslab
{

// ---------------------------------------------------------------------------
// Exact L∞ norms
//
// ||sum a_{i,j} r_i(s) r_j(t)||_∞ = max_eps sum_j |sum_i a_{i,j} eps_i|: for a
// fixed eps the best delta takes the sign of every column sum. eps and -eps give
// the same value, so eps_1 = +1 is fixed and 2^{n-1} vectors are scanned.

/// Real coefficients. Column sums are split into a low and a high half of the
/// rows and tabulated once per half, so each sign vector costs one add per column.
template <typename Derived>
typename Derived::Scalar sup_norm_decoupled(const Eigen::MatrixBase<Derived>& a, const Caps& caps = {},
                                            Parallelism par = {})
{
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(a.rows());
  const Eigen::Index m = a.cols();
  if (n < 1 || m < 1)
    throw std::invalid_argument("sup_norm_decoupled: empty coefficient matrix");
  require_bits(n, caps.supnorm_bits, "sup_norm_decoupled");

  const int free = n - 1;
  const int n_lo = free / 2;
  const int n_hi = free - n_lo;
  RowMajorMatrix<Scalar> lo = sign_table<Scalar>(n_lo) * a.derived().middleRows(1, n_lo);
  lo.rowwise() += a.derived().row(0);
  const RowMajorMatrix<Scalar> hi = sign_table<Scalar>(n_hi) * a.derived().middleRows(1 + n_lo, n_hi);

  return parallel_reduce(
      static_cast<std::uint64_t>(hi.rows()), par.threads, Scalar(0),
      [&](std::uint64_t begin, std::uint64_t end) {
        Scalar best = 0;
        for (auto h = static_cast<Eigen::Index>(begin); h < static_cast<Eigen::Index>(end); ++h)
          for (Eigen::Index l = 0; l < lo.rows(); ++l)
            best = std::max(best, (lo.row(l) + hi.row(h)).cwiseAbs().sum());
        return best;
      },
      [](Scalar x, Scalar y) { return std::max(x, y); });
}

/// ||sum_{i,j} b_{i,j} r_i(t) r_j(t)||_∞ = max_eps |eps^T B eps|, diagonal included.
template <typename Derived>
typename Derived::Scalar sup_norm_undecoupled(const Eigen::MatrixBase<Derived>& b, const Caps& caps = {},
                                              Parallelism par = {})
{
  using Scalar = typename Derived::Scalar;
  detail::require_square(b, "sup_norm_undecoupled");
  const int n = static_cast<int>(b.rows());
  require_bits(n, caps.undecoupled_bits, "sup_norm_undecoupled");

  // eps^T B eps = q_lo(eps_lo) + q_hi(eps_hi) + eps_lo^T (B_lh + B_hl^T) eps_hi
  const int n_lo = (n + 1) / 2;
  const int n_hi = n - n_lo;
  const auto& B = b.derived();
  const Vector<Scalar> q_lo = detail::quadratic_form_values(B.topLeftCorner(n_lo, n_lo));
  const Vector<Scalar> q_hi = n_hi > 0 ? detail::quadratic_form_values(B.bottomRightCorner(n_hi, n_hi))
                                       : Vector<Scalar>::Zero(1).eval();
  const Matrix<Scalar> cross =
      B.topRightCorner(n_lo, n_hi) + B.bottomLeftCorner(n_hi, n_lo).transpose();
  const RowMajorMatrix<Scalar> lo_cross = sign_table<Scalar>(n_lo) * cross;
  const RowMajorMatrix<Scalar> hi_signs = sign_table<Scalar>(n_hi);

  // eps_1 = +1: even low masks only
  return parallel_reduce(
      static_cast<std::uint64_t>(lo_cross.rows() / 2), par.threads, Scalar(0),
      [&](std::uint64_t begin, std::uint64_t end) {
        Scalar best = 0;
        for (auto half = static_cast<Eigen::Index>(begin); half < static_cast<Eigen::Index>(end); ++half) {
          const Eigen::Index l = 2 * half;
          for (Eigen::Index h = 0; h < hi_signs.rows(); ++h)
            best = std::max(best, std::abs(q_lo(l) + q_hi(h) + lo_cross.row(l).dot(hi_signs.row(h))));
        }
        return best;
      },
      [](Scalar x, Scalar y) { return std::max(x, y); });
}

/// ±1 coefficients: sum_i θ_{i,j} eps_i = n - 2 popcount(col_j XOR eps).
long sup_norm_decoupled(const SignMatrix& theta, const Caps& caps = {}, Parallelism par = {});

/// ±1 coefficients, diagonal included: sum_i eps_i (n - 2 popcount(row_i XOR eps)).
long sup_norm_undecoupled(const SignMatrix& theta, const Caps& caps = {}, Parallelism par = {});

// ---------------------------------------------------------------------------
// Sign arrangements

/// θ_{i,j} = w_j on the cell Δ_i^k = ((i-1)2^-k, i 2^-k), 1 <= i, j <= 2^k.
/// Its decoupled sup norm is at most 2^{3k/2}. Requires k <= 5.
SignMatrix walsh_sign_arrangement(int k);

/// sup_norm_decoupled(walsh_sign_arrangement(k)) / 4^k: the ratio of the L∞ norm
/// to the ℓ1 norm of the coefficients, which a Sidon system keeps bounded below.
double sidon_defect(int k);

enum class SearchMode
{
  exhaustive,
  average,
  monte_carlo,
  walsh
};

std::string to_string(SearchMode mode);

struct SearchReport
{
  int n = 0;
  SearchMode mode = SearchMode::exhaustive;
  bool symmetric = false;
  double value = 0;   // inf, mean, or construction value
  double stddev = 0;  // sample standard deviation (monte_carlo, average)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string rng;
  double elapsed_ms = 0;
  std::optional<SignMatrix> witness;  // minimizer (exhaustive) or construction (walsh)
};

/// inf over sign matrices of φ_n (or, with symmetric, of the undecoupled φ̄_n over
/// symmetric arrangements). Decoupled: first row and column fixed to +1, 2^{(n-1)^2}
/// matrices; flipping row i is eps_i -> -eps_i and flipping column j is harmless
/// under |.|. Symmetric: θ_{1,j} = +1 for j >= 2 (flip eps_j), 2^{1 + n(n-1)/2} matrices.
/// Requires n <= 5.
SearchReport exhaustive_inf(int n, bool symmetric = false, Parallelism par = {});

/// 2^{-n^2} sum_θ φ_n(θ) over every sign matrix. Requires n^2 <= caps.average_bits.
SearchReport exhaustive_average(int n, const Caps& caps = {}, Parallelism par = {});

/// i.i.d. uniform θ from the counter-mode SplitMix64 stream of `seed`. Sample s
/// uses words [s W, (s+1) W), W = ceil(n^2 / 64), θ bits in column-major order.
/// Requires n <= 16.
SearchReport monte_carlo_average(int n, std::uint64_t samples, std::uint64_t seed, Parallelism par = {});

/// Word `counter` of the SplitMix64 sequence started at `seed`.
std::uint64_t splitmix64_word(std::uint64_t seed, std::uint64_t counter);

inline constexpr const char* rng_name = "splitmix64-counter";

// ---------------------------------------------------------------------------
// Blow-up of a sign change near L∞
//
// Block k lives on indices 2^k < i, j <= 2^{k+1}. x = sum_k 2^{-(3+ε)k/2} z_k with
// z_k the Walsh arrangement of size 2^k on block k; the signs θ that undo the
// Walsh signs map x to y = sum_k 2^{-(3+ε)k/2} y_k, y_k the all-ones block.

enum class WitnessMode
{
  full,    // materialize blocks and partial images (K <= 2)
  corner,  // corner values and sup norms only (K <= 4)
};

struct Theorem7Block
{
  int k = 0;
  long z_sup = 0;               // ||z_k||_∞
  double z_bound = 0;           // 2^{3k/2}
  double corner_value = 0;      // y_k at s, t in the corner cell
  double corner_expected = 0;   // 2^{2k}
  double u_k = 0;               // 2^{-2^{k+2}+1}
  double x_sup_partial = 0;     // ||sum_{l<=k} x_l||_∞
  double lower_bound = 0;       // 2^{εk/2 - 1}
  std::optional<double> rearranged_at_uk;       // y_k^*(u_k)
  std::optional<double> partial_quasinorm;      // quasinorm_phi_eps of sum_{l<=k} 2^{-(3+ε)l/2} y_l
  std::optional<double> partial_marcinkiewicz;  // M(φ_ε) norm of the same
  std::optional<double> block_marcinkiewicz;    // 2^{-(3+ε)k/2} ||y_k||_{M(φ_ε)}
};

struct Theorem7Report
{
  double eps = 0;
  int K = 0;
  WitnessMode mode = WitnessMode::full;
  std::vector<Theorem7Block> blocks;
  double z_constant = 0;        // max_k ||z_k||_∞ / 2^{3k/2}
  double x_sup_limit_bound = 0; // z_constant 2^{ε/2} / (2^{ε/2} - 1)
};

/// Sign arrangement on 2^{K+1} indices: Walsh signs on each block, +1 elsewhere.
SignMatrix theorem7_signs(int K);
/// Coefficients of x truncated to blocks 0..K.
CoefficientMatrix<double> theorem7_coefficients(double eps, int K);
/// All-ones block k as a 2^{k+1} x 2^{k+1} coefficient matrix.
CoefficientMatrix<double> theorem7_block(int k);

Theorem7Report theorem7_witness(double eps, int K, WitnessMode mode = WitnessMode::full, const Caps& caps = {});

}  // namespace chaoslab

#endif  // CHAOSLAB_EXTREMAL_HPP

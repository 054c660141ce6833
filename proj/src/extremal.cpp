#include "chaoslab/extremal.hpp"
#include "chaoslab/rearrange.hpp"
#include "chaoslab/spaces.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace chaoslab
{

namespace
{

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// φ for ±1 columns given as masks; eps_1 = +1 so only even masks are scanned.
long decoupled_from_columns(std::span<const SignMask> columns, int n)
{
  long best = 0;
  const SignMask count = SignMask{1} << (n - 1);
  for (SignMask e = 0; e < count; ++e) {
    const SignMask eps = e << 1;
    long total = 0;
    for (const SignMask c : columns)
      total += std::abs(n - 2 * std::popcount(c ^ eps));
    best = std::max(best, total);
  }
  return best;
}

long undecoupled_from_rows(std::span<const SignMask> rows, int n, SignMask begin, SignMask end)
{
  long best = 0;
  for (SignMask e = begin; e < end; ++e) {
    const SignMask eps = e << 1;
    long total = 0;
    for (int i = 0; i < n; ++i) {
      const long inner = n - 2 * std::popcount(rows[static_cast<std::size_t>(i)] ^ eps);
      total += ((eps >> i) & 1) ? -inner : inner;
    }
    best = std::max(best, std::abs(total));
  }
  return best;
}

std::uint64_t mix64(std::uint64_t z)
{
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SignMask extract_bits(std::span<const std::uint64_t> words, std::size_t offset, int count)
{
  SignMask out = 0;
  for (int b = 0; b < count; ++b) {
    const std::size_t bit = offset + static_cast<std::size_t>(b);
    out |= ((words[bit / 64] >> (bit % 64)) & 1) << b;
  }
  return out;
}

struct ArgMin
{
  long value = std::numeric_limits<long>::max();
  std::uint64_t index = 0;
};

ArgMin better(const ArgMin& x, const ArgMin& y)
{
  if (x.value != y.value)
    return x.value < y.value ? x : y;
  return x.index <= y.index ? x : y;
}

}  // namespace

long sup_norm_decoupled(const SignMatrix& theta, const Caps& caps, Parallelism par)
{
  const int n = static_cast<int>(theta.rows());
  require_bits(n, caps.supnorm_bits, "sup_norm_decoupled");
  std::vector<SignMask> columns;
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    columns.push_back(theta.column_mask(j));

  const SignMask count = SignMask{1} << (n - 1);
  return parallel_reduce(
      count, par.threads, 0L,
      [&](std::uint64_t begin, std::uint64_t end) {
        long best = 0;
        for (SignMask e = begin; e < end; ++e) {
          const SignMask eps = e << 1;
          long total = 0;
          for (const SignMask c : columns)
            total += std::abs(n - 2 * std::popcount(c ^ eps));
          best = std::max(best, total);
        }
        return best;
      },
      [](long x, long y) { return std::max(x, y); });
}

long sup_norm_undecoupled(const SignMatrix& theta, const Caps& caps, Parallelism par)
{
  if (theta.rows() != theta.cols())
    throw std::invalid_argument("sup_norm_undecoupled: sign matrix must be square");
  const int n = static_cast<int>(theta.rows());
  require_bits(n, caps.undecoupled_bits, "sup_norm_undecoupled");
  std::vector<SignMask> rows;
  for (Eigen::Index i = 0; i < n; ++i)
    rows.push_back(theta.row_mask(i));
  return parallel_reduce(
      SignMask{1} << (n - 1), par.threads, 0L,
      [&](std::uint64_t begin, std::uint64_t end) { return undecoupled_from_rows(rows, n, begin, end); },
      [](long x, long y) { return std::max(x, y); });
}

SignMatrix walsh_sign_arrangement(int k)
{
  if (k < 0)
    throw std::invalid_argument("walsh_sign_arrangement: k must be non-negative");
  require_bits(k, 5, "walsh_sign_arrangement");
  const Eigen::Index size = Eigen::Index{1} << k;
  Eigen::MatrixXi entries(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    // k = 0: the single cell (0,1); any precision works since w_1 = 1
    const DyadicPoint cell = DyadicPoint::from_cell(static_cast<std::uint64_t>(i), std::max(k, 1));
    for (Eigen::Index j = 0; j < size; ++j)
      entries(i, j) = walsh(static_cast<std::uint64_t>(j + 1), cell);
  }
  return SignMatrix(std::move(entries), k == 0);
}

double sidon_defect(int k)
{
  const long sup = sup_norm_decoupled(walsh_sign_arrangement(k));
  return std::ldexp(static_cast<double>(sup), -2 * k);
}

std::string to_string(SearchMode mode)
{
  switch (mode) {
  case SearchMode::exhaustive:
    return "exhaustive_inf";
  case SearchMode::average:
    return "average";
  case SearchMode::monte_carlo:
    return "monte_carlo";
  case SearchMode::walsh:
    return "walsh";
  }
  return "unknown";
}

SearchReport exhaustive_inf(int n, bool symmetric, Parallelism par)
{
  if (n < 1)
    throw std::invalid_argument("exhaustive_inf: n must be positive");
  if (n > 5)
    throw cap_error("enumeration too large: exhaustive_inf supports n <= 5");
  const auto start = Clock::now();

  SearchReport report;
  report.n = n;
  report.mode = SearchMode::exhaustive;
  report.symmetric = symmetric;

  if (!symmetric) {
    const int free = (n - 1) * (n - 1);
    const std::uint64_t count = std::uint64_t{1} << free;
    const auto columns_of = [n](std::uint64_t bits) {
      std::vector<SignMask> columns(static_cast<std::size_t>(n), 0);
      for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
          if ((bits >> ((i - 1) * (n - 1) + (j - 1))) & 1)
            columns[static_cast<std::size_t>(j)] |= SignMask{1} << i;
      return columns;
    };
    const ArgMin best = parallel_reduce(
        count, par.threads, ArgMin{},
        [&](std::uint64_t begin, std::uint64_t end) {
          ArgMin local;
          for (std::uint64_t bits = begin; bits < end; ++bits)
            local = better(local, {decoupled_from_columns(columns_of(bits), n), bits});
          return local;
        },
        better);
    Eigen::MatrixXi entries = Eigen::MatrixXi::Ones(n, n);
    const auto columns = columns_of(best.index);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if ((columns[static_cast<std::size_t>(j)] >> i) & 1)
          entries(i, j) = -1;
    report.value = static_cast<double>(best.value);
    report.samples = count;
    report.witness = SignMatrix(std::move(entries));
  } else {
    // bit 0: θ_{1,1}; then the upper triangle 2 <= i <= j <= n in row order
    const int free = 1 + n * (n - 1) / 2;
    const std::uint64_t count = std::uint64_t{1} << free;
    const auto entries_of = [n](std::uint64_t bits) {
      Eigen::MatrixXi entries = Eigen::MatrixXi::Ones(n, n);
      if (bits & 1)
        entries(0, 0) = -1;
      int b = 1;
      for (int i = 1; i < n; ++i)
        for (int j = i; j < n; ++j, ++b)
          if ((bits >> b) & 1)
            entries(i, j) = entries(j, i) = -1;
      return entries;
    };
    const auto rows_of = [n](const Eigen::MatrixXi& e) {
      std::vector<SignMask> rows(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (e(i, j) < 0)
            rows[static_cast<std::size_t>(i)] |= SignMask{1} << j;
      return rows;
    };
    const ArgMin best = parallel_reduce(
        count, par.threads, ArgMin{},
        [&](std::uint64_t begin, std::uint64_t end) {
          ArgMin local;
          for (std::uint64_t bits = begin; bits < end; ++bits) {
            const auto rows = rows_of(entries_of(bits));
            local = better(local, {undecoupled_from_rows(rows, n, 0, SignMask{1} << (n - 1)), bits});
          }
          return local;
        },
        better);
    report.value = static_cast<double>(best.value);
    report.samples = count;
    report.witness = SignMatrix(entries_of(best.index), true);
  }
  report.elapsed_ms = ms_since(start);
  return report;
}

SearchReport exhaustive_average(int n, const Caps& caps, Parallelism par)
{
  if (n < 1)
    throw std::invalid_argument("exhaustive_average: n must be positive");
  require_bits(n * n, caps.average_bits, "exhaustive_average");
  const auto start = Clock::now();
  const std::uint64_t count = std::uint64_t{1} << (n * n);

  std::vector<long> values(count);
  parallel_for(count, par.threads, [&](std::uint64_t bits) {
    std::vector<SignMask> columns(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      columns[static_cast<std::size_t>(j)] = (bits >> (j * n)) & ((SignMask{1} << n) - 1);
    values[bits] = decoupled_from_columns(columns, n);
  });

  // integer sums: exact and order-independent
  long double sum = 0, sum_sq = 0;
  for (const long v : values) {
    sum += v;
    sum_sq += static_cast<long double>(v) * v;
  }
  SearchReport report;
  report.n = n;
  report.mode = SearchMode::average;
  report.samples = count;
  report.value = static_cast<double>(sum / count);
  const long double var = count > 1 ? (sum_sq - sum * sum / count) / (count - 1) : 0;
  report.stddev = static_cast<double>(std::sqrt(std::max<long double>(var, 0)));
  report.elapsed_ms = ms_since(start);
  return report;
}

std::uint64_t splitmix64_word(std::uint64_t seed, std::uint64_t counter)
{
  return mix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

SearchReport monte_carlo_average(int n, std::uint64_t samples, std::uint64_t seed, Parallelism par)
{
  if (n < 1)
    throw std::invalid_argument("monte_carlo_average: n must be positive");
  if (n > 16)
    throw cap_error("enumeration too large: monte_carlo_average supports n <= 16");
  if (samples < 1)
    throw std::invalid_argument("monte_carlo_average: need at least one sample");
  const auto start = Clock::now();
  const std::size_t words_per_sample = (static_cast<std::size_t>(n * n) + 63) / 64;

  std::vector<long> values(samples);
  parallel_for(samples, par.threads, [&](std::uint64_t s) {
    std::vector<std::uint64_t> words(words_per_sample);
    for (std::size_t w = 0; w < words_per_sample; ++w)
      words[w] = splitmix64_word(seed, s * words_per_sample + w);
    std::vector<SignMask> columns(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      columns[static_cast<std::size_t>(j)] = extract_bits(words, static_cast<std::size_t>(j * n), n);
    values[s] = decoupled_from_columns(columns, n);
  });

  long double sum = 0, sum_sq = 0;
  for (const long v : values) {
    sum += v;
    sum_sq += static_cast<long double>(v) * v;
  }
  SearchReport report;
  report.n = n;
  report.mode = SearchMode::monte_carlo;
  report.samples = samples;
  report.seed = seed;
  report.rng = rng_name;
  report.value = static_cast<double>(sum / samples);
  const long double var = samples > 1 ? (sum_sq - sum * sum / samples) / (samples - 1) : 0;
  report.stddev = static_cast<double>(std::sqrt(std::max<long double>(var, 0)));
  report.elapsed_ms = ms_since(start);
  return report;
}

// ---------------------------------------------------------------------------

namespace
{

double block_scale(double eps, int k) { return std::exp2(-(3.0 + eps) * k / 2.0); }

void require_eps(double eps)
{
  if (!(eps > 0 && eps < 0.5))
    throw std::invalid_argument("theorem7: eps must lie in (0, 1/2)");
}

}  // namespace

SignMatrix theorem7_signs(int K)
{
  if (K < 0)
    throw std::invalid_argument("theorem7_signs: K must be non-negative");
  const Eigen::Index size = Eigen::Index{1} << (K + 1);
  Eigen::MatrixXi entries = Eigen::MatrixXi::Ones(size, size);
  for (int k = 0; k <= K; ++k) {
    const Eigen::Index w = Eigen::Index{1} << k;
    entries.block(w, w, w, w) = walsh_sign_arrangement(k).entries();
  }
  return SignMatrix(std::move(entries));
}

CoefficientMatrix<double> theorem7_coefficients(double eps, int K)
{
  require_eps(eps);
  const SignMatrix theta = theorem7_signs(K);
  CoefficientMatrix<double> x = CoefficientMatrix<double>::Zero(theta.rows(), theta.cols());
  for (int k = 0; k <= K; ++k) {
    const Eigen::Index w = Eigen::Index{1} << k;
    x.block(w, w, w, w) = block_scale(eps, k) * theta.cast<double>().block(w, w, w, w);
  }
  return x;
}

CoefficientMatrix<double> theorem7_block(int k)
{
  const Eigen::Index w = Eigen::Index{1} << k;
  CoefficientMatrix<double> y = CoefficientMatrix<double>::Zero(2 * w, 2 * w);
  y.block(w, w, w, w).setOnes();
  return y;
}

Theorem7Report theorem7_witness(double eps, int K, WitnessMode mode, const Caps& caps)
{
  require_eps(eps);
  if (K < 0)
    throw std::invalid_argument("theorem7_witness: K must be non-negative");
  if (mode == WitnessMode::full) {
    require_bits(2 * (1 << (K + 1)), caps.materialize_bits, "theorem7_witness full mode");
  } else if (K > 4) {
    throw cap_error("enumeration too large: theorem7_witness corner mode supports K <= 4");
  }

  Theorem7Report report;
  report.eps = eps;
  report.K = K;
  report.mode = mode;

  const CoefficientMatrix<double> x = theorem7_coefficients(eps, K);
  const SignMatrix theta = theorem7_signs(K);
  const CoefficientMatrix<double> y = apply_signs(x, theta);

  double x_sup_separable = 0;
  for (int k = 0; k <= K; ++k) {
    Theorem7Block block;
    block.k = k;
    const Eigen::Index w = Eigen::Index{1} << k;
    const Eigen::Index size = 2 * w;

    block.z_sup = sup_norm_decoupled(walsh_sign_arrangement(k), caps);
    block.z_bound = std::exp2(1.5 * k);
    report.z_constant = std::max(report.z_constant, block.z_sup / block.z_bound);

    // blocks are row- and column-disjoint, so sup norms add
    x_sup_separable += block_scale(eps, k) * static_cast<double>(block.z_sup);
    block.x_sup_partial = size <= caps.supnorm_bits
                              ? sup_norm_decoupled(x.topLeftCorner(size, size), caps)
                              : x_sup_separable;

    // every r_i is +1 on the corner cell, so y_k there is the sum of its coefficients
    const CoefficientMatrix<double> yk = theorem7_block(k);
    block.corner_value = yk.sum();
    block.corner_expected = std::exp2(2.0 * k);
    block.u_k = std::exp2(-std::exp2(k + 2.0) + 1.0);
    block.lower_bound = std::exp2(eps * k / 2.0 - 1.0);

    if (mode == WitnessMode::full) {
      const auto yk_fn = eval_decoupled(yk, caps);
      // the corner cell has all signs +1: mask 0 on both axes
      block.corner_value = yk_fn(0, 0);
      const auto yk_star = rearrangement(yk_fn);
      block.rearranged_at_uk = yk_star.value_at(block.u_k);
      block.block_marcinkiewicz = block_scale(eps, k) * marcinkiewicz_norm(yk_star, phi_eps(eps)).value;

      const auto partial = rearrangement(eval_decoupled(y.topLeftCorner(size, size), caps));
      block.partial_quasinorm = quasinorm_phi_eps(partial, eps);
      block.partial_marcinkiewicz = marcinkiewicz_norm(partial, phi_eps(eps)).value;
    }
    report.blocks.push_back(block);
  }
  const double g = std::exp2(eps / 2);
  report.x_sup_limit_bound = report.z_constant * g / (g - 1);
  return report;
}

}  // namespace chaoslab

#ifndef CHAOSLAB_COMMON_HPP
#define CHAOSLAB_COMMON_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chaoslab
{

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Sign vector packed as a bitmask: bit i-1 set <=> the i-th sign is -1.
using SignMask = std::uint64_t;

/// Thrown when an enumeration would exceed a configured size cap.
class cap_error : public std::length_error
{
public:
  explicit cap_error(const std::string& what) : std::length_error(what) {}
};

/// Enumeration limits, in bits (log2 of the number of enumerated objects).
struct Caps
{
  int materialize_bits = 24;  // total sign bits of a materialized step function
  int supnorm_bits = 30;      // rows of a decoupled sup-norm scan
  int undecoupled_bits = 24;  // size of an undecoupled sup-norm scan
  int subset_bits = 12;       // N in the subset average over D ⊂ {1..N}
  int average_bits = 16;      // n^2 for the exhaustive average over all sign matrices
};

inline void require_bits(int bits, int cap, const char* what)
{
  if (bits > cap)
    throw cap_error(std::string("enumeration too large: ") + what + " needs " + std::to_string(bits) +
                    " bits, cap is " + std::to_string(cap));
}

/// Threads used by enumeration kernels. Results never depend on this value.
struct Parallelism
{
  unsigned threads = 1;
};

}  // namespace chaoslab

#endif  // CHAOSLAB_COMMON_HPP

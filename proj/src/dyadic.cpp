#include "chaoslab/dyadic.hpp"

#include <bit>

namespace chaoslab
{

DyadicPoint::DyadicPoint(std::uint64_t digits, int precision) : digits_(digits), precision_(precision)
{
  if (precision < 1 || precision > max_precision)
    throw std::invalid_argument("DyadicPoint: precision must be in [1, 63]");
  if (digits >> precision)
    throw std::invalid_argument("DyadicPoint: digits beyond precision");
}

DyadicPoint DyadicPoint::from_cell(std::uint64_t cell, int precision)
{
  if (precision < 1 || precision > max_precision)
    throw std::invalid_argument("DyadicPoint: precision must be in [1, 63]");
  if (cell >> precision)
    throw std::invalid_argument("DyadicPoint: cell index out of range");
  return DyadicPoint(reverse_bits(cell, precision), precision);
}

DyadicPoint DyadicPoint::from_digits(std::span<const int> digits)
{
  std::uint64_t packed = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] != 0 && digits[k] != 1)
      throw std::invalid_argument("DyadicPoint: digits must be 0 or 1");
    packed |= std::uint64_t(digits[k]) << k;
  }
  return DyadicPoint(packed, static_cast<int>(digits.size()));
}

DyadicPoint DyadicPoint::containing(double t, int precision)
{
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("DyadicPoint: t must lie in (0,1)");
  const auto cell = static_cast<std::uint64_t>(std::ldexp(t, precision));
  return from_cell(cell, precision);
}

int DyadicPoint::digit(int k) const
{
  if (k < 1 || k > precision_)
    throw std::out_of_range("DyadicPoint: digit index");
  return static_cast<int>((digits_ >> (k - 1)) & 1);
}

std::uint64_t DyadicPoint::cell() const { return reverse_bits(digits_, precision_); }

double DyadicPoint::left() const { return std::ldexp(static_cast<double>(cell()), -precision_); }

double DyadicPoint::midpoint() const { return left() + std::ldexp(0.5, -precision_); }

std::uint64_t reverse_bits(std::uint64_t x, int bits)
{
  std::uint64_t r = 0;
  for (int i = 0; i < bits; ++i)
    r |= ((x >> i) & 1) << (bits - 1 - i);
  return r;
}

int rademacher(int k, const DyadicPoint& p)
{
  if (k < 1)
    throw std::invalid_argument("rademacher: index must be positive");
  if (k > p.precision())
    throw std::domain_error("insufficient precision");
  return p.digit(k) ? -1 : 1;
}

int walsh(std::uint64_t j, const DyadicPoint& p)
{
  if (j < 1)
    throw std::invalid_argument("walsh: index must be positive");
  int value = 1;
  while (j > 1) {
    // j = 2^i + j' with 1 <= j' <= 2^i
    const int i = std::bit_width(j - 1) - 1;
    value *= rademacher(i + 1, p);
    j -= std::uint64_t{1} << i;
  }
  return value;
}

DyadicPoint dyadic_add(const DyadicPoint& s, const DyadicPoint& u)
{
  if (s.precision() != u.precision())
    throw std::invalid_argument("dyadic_add: precision mismatch");
  return DyadicPoint(s.digits() ^ u.digits(), s.precision());
}

}  // namespace chaoslab

#include "chaoslab/chaos.hpp"

namespace chaoslab
{

SignMatrix::SignMatrix(Eigen::MatrixXi entries, bool symmetric) : entries_(std::move(entries)), symmetric_(symmetric)
{
  if (entries_.size() == 0)
    throw std::invalid_argument("SignMatrix: empty");
  if (((entries_.array() != 1) && (entries_.array() != -1)).any())
    throw std::invalid_argument("SignMatrix: entries must be +1 or -1");
  if (symmetric_ && (entries_.rows() != entries_.cols() || entries_ != entries_.transpose()))
    throw std::invalid_argument("SignMatrix: arrangement flagged symmetric is not symmetric");
}

SignMatrix SignMatrix::constant(Eigen::Index rows, Eigen::Index cols, int value)
{
  return SignMatrix(Eigen::MatrixXi::Constant(rows, cols, value), rows == cols);
}

SignMatrix SignMatrix::from_bits(Eigen::Index rows, Eigen::Index cols, std::span<const std::uint64_t> words)
{
  const auto total = static_cast<std::size_t>(rows * cols);
  if (words.size() * 64 < total)
    throw std::invalid_argument("SignMatrix::from_bits: not enough bits");
  Eigen::MatrixXi entries(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto bit = static_cast<std::size_t>(j * rows + i);
      entries(i, j) = ((words[bit / 64] >> (bit % 64)) & 1) ? -1 : 1;
    }
  return SignMatrix(std::move(entries));
}

SignMask SignMatrix::column_mask(Eigen::Index j) const
{
  if (rows() > 64)
    throw std::length_error("SignMatrix::column_mask: more than 64 rows");
  SignMask mask = 0;
  for (Eigen::Index i = 0; i < rows(); ++i)
    if (entries_(i, j) < 0)
      mask |= SignMask{1} << i;
  return mask;
}

SignMask SignMatrix::row_mask(Eigen::Index i) const
{
  if (cols() > 64)
    throw std::length_error("SignMatrix::row_mask: more than 64 columns");
  SignMask mask = 0;
  for (Eigen::Index j = 0; j < cols(); ++j)
    if (entries_(i, j) < 0)
      mask |= SignMask{1} << j;
  return mask;
}

}  // namespace chaoslab

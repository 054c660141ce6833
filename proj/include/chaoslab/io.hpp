#ifndef CHAOSLAB_IO_HPP
#define CHAOSLAB_IO_HPP

#include "chaoslab/chaos.hpp"
#include "chaoslab/extremal.hpp"
#include "chaoslab/rearrange.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace chaoslab
{

/// Malformed input. line and column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

enum class MatrixFormat
{
  text,  // "n m" then n rows of m whitespace-separated reals
  csv,   // "n,m" then n rows of m comma-separated reals
  json   // array of n arrays of m numbers
};

/// .csv -> csv, .json -> json, anything else -> text.
MatrixFormat format_for(const std::filesystem::path& path);

CoefficientMatrix<double> parse_matrix(const std::string& content, MatrixFormat format);
CoefficientMatrix<double> read_matrix(const std::filesystem::path& path);

/// Same formats; every entry must be exactly +1 or -1.
SignMatrix parse_sign_matrix(const std::string& content, MatrixFormat format, bool symmetric = false);
SignMatrix read_sign_matrix(const std::filesystem::path& path, bool symmetric = false);

void write_matrix(std::ostream& out, const CoefficientMatrix<double>& a, MatrixFormat format);
void write_matrix(std::ostream& out, const SignMatrix& theta, MatrixFormat format);

/// Shortest decimal that round-trips; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double value);

/// Header "value,cumulative_measure", one row per step, LF endings.
void write_rearrangement_csv(std::ostream& out, const Rearrangement<double>& r);

/// Keys sorted, two-space indent. elapsed_ms is written only when include_timing is set.
std::string search_report_json(const SearchReport& report, bool include_timing = false);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace chaoslab

#endif  // CHAOSLAB_IO_HPP

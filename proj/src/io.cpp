#include "chaoslab/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace chaoslab
{

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                        message
                                  : message),
      line_(line),
      column_(column)
{
}

MatrixFormat format_for(const std::filesystem::path& path)
{
  const auto ext = path.extension().string();
  if (ext == ".csv")
    return MatrixFormat::csv;
  if (ext == ".json")
    return MatrixFormat::json;
  return MatrixFormat::text;
}

namespace
{

struct Token
{
  std::string text;
  int line;
  int column;
};

/// Non-empty lines split on the separator (whitespace for text, ',' for csv).
std::vector<std::vector<Token>> tokenize(const std::string& content, bool csv)
{
  std::vector<std::vector<Token>> lines;
  int line_no = 0;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    std::vector<Token> tokens;
    if (csv) {
      std::size_t start = 0;
      while (true) {
        const auto comma = line.find(',', start);
        std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto first = field.find_first_not_of(" \t");
        const auto last = field.find_last_not_of(" \t");
        const int column = static_cast<int>(start + (first == std::string::npos ? 0 : first)) + 1;
        tokens.push_back({first == std::string::npos ? "" : field.substr(first, last - first + 1), line_no, column});
        if (comma == std::string::npos)
          break;
        start = comma + 1;
      }
      if (tokens.size() == 1 && tokens[0].text.empty())
        tokens.clear();
    } else {
      std::size_t pos = 0;
      while (true) {
        const auto begin = line.find_first_not_of(" \t", pos);
        if (begin == std::string::npos)
          break;
        const auto end = line.find_first_of(" \t", begin);
        tokens.push_back({line.substr(begin, end - begin), line_no, static_cast<int>(begin) + 1});
        if (end == std::string::npos)
          break;
        pos = end;
      }
    }
    if (!tokens.empty())
      lines.push_back(std::move(tokens));
  }
  return lines;
}

double parse_real(const Token& t)
{
  std::string_view s = t.text;
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (t.text.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("expected a real number, got '" + t.text + "'", t.line, t.column);
  if (!std::isfinite(value))
    throw ParseError("entry must be finite", t.line, t.column);
  return value;
}

Eigen::Index parse_dimension(const Token& t)
{
  long value = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (t.text.empty() || ec != std::errc() || ptr != t.text.data() + t.text.size() || value < 1)
    throw ParseError("expected a positive dimension, got '" + t.text + "'", t.line, t.column);
  return value;
}

CoefficientMatrix<double> parse_delimited(const std::string& content, bool csv)
{
  const auto lines = tokenize(content, csv);
  if (lines.empty())
    throw ParseError("empty matrix file", 1, 1);
  const auto& header = lines.front();
  if (header.size() != 2)
    throw ParseError(csv ? "header must be \"n,m\"" : "header must be \"n m\"", header[0].line, header[0].column);
  const Eigen::Index n = parse_dimension(header[0]);
  const Eigen::Index m = parse_dimension(header[1]);
  if (static_cast<Eigen::Index>(lines.size()) - 1 != n) {
    const auto& where = lines.back().back();
    throw ParseError("expected " + std::to_string(n) + " rows, found " + std::to_string(lines.size() - 1),
                     where.line, where.column);
  }
  CoefficientMatrix<double> a(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = lines[static_cast<std::size_t>(i + 1)];
    if (static_cast<Eigen::Index>(row.size()) != m)
      throw ParseError("expected " + std::to_string(m) + " entries, found " + std::to_string(row.size()),
                       row.front().line, row.front().column);
    for (Eigen::Index j = 0; j < m; ++j)
      a(i, j) = parse_real(row[static_cast<std::size_t>(j)]);
  }
  return a;
}

std::pair<int, int> line_column(const std::string& content, std::size_t offset)
{
  int line = 1, column = 1;
  for (std::size_t k = 0; k < std::min(offset, content.size()); ++k) {
    if (content[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

CoefficientMatrix<double> parse_json(const std::string& content)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character
    const auto [line, column] = line_column(content, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("invalid JSON", line, column);
  }
  if (!doc.is_array() || doc.empty())
    throw ParseError("JSON matrix must be a non-empty array of rows", 0, 0);
  const auto n = static_cast<Eigen::Index>(doc.size());
  const auto m = doc[0].is_array() ? static_cast<Eigen::Index>(doc[0].size()) : 0;
  if (m == 0)
    throw ParseError("JSON row 1 must be a non-empty array", 0, 0);
  CoefficientMatrix<double> a(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = doc[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m)
      throw ParseError("JSON row " + std::to_string(i + 1) + " must hold " + std::to_string(m) + " numbers", 0, 0);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number())
        throw ParseError("JSON entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is not a number",
                         0, 0);
      a(i, j) = v.get<double>();
    }
  }
  return a;
}

}  // namespace

CoefficientMatrix<double> parse_matrix(const std::string& content, MatrixFormat format)
{
  switch (format) {
  case MatrixFormat::text:
    return parse_delimited(content, false);
  case MatrixFormat::csv:
    return parse_delimited(content, true);
  case MatrixFormat::json:
    return parse_json(content);
  }
  throw std::logic_error("parse_matrix: unknown format");
}

CoefficientMatrix<double> read_matrix(const std::filesystem::path& path)
{
  return parse_matrix(read_file(path), format_for(path));
}

SignMatrix parse_sign_matrix(const std::string& content, MatrixFormat format, bool symmetric)
{
  const CoefficientMatrix<double> a = parse_matrix(content, format);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 1 && a(i, j) != -1)
        throw ParseError("sign matrix entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") is " + format_number(a(i, j)) + ", expected +1 or -1",
                         0, 0);
  if (symmetric && (a.rows() != a.cols() || a != a.transpose()))
    throw ParseError("sign matrix is not symmetric", 0, 0);
  return SignMatrix(a.cast<int>(), symmetric);
}

SignMatrix read_sign_matrix(const std::filesystem::path& path, bool symmetric)
{
  return parse_sign_matrix(read_file(path), format_for(path), symmetric);
}

void write_matrix(std::ostream& out, const CoefficientMatrix<double>& a, MatrixFormat format)
{
  if (format == MatrixFormat::json) {
    nlohmann::json doc = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        row.push_back(a(i, j));
      doc.push_back(std::move(row));
    }
    out << doc.dump() << '\n';
    return;
  }
  const char sep = format == MatrixFormat::csv ? ',' : ' ';
  out << a.rows() << sep << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j > 0)
        out << sep;
      out << format_number(a(i, j));
    }
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const SignMatrix& theta, MatrixFormat format)
{
  write_matrix(out, theta.cast<double>(), format);
}

std::string format_number(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

void write_rearrangement_csv(std::ostream& out, const Rearrangement<double>& r)
{
  out << "value,cumulative_measure\n";
  for (std::size_t k = 0; k < r.size(); ++k)
    out << format_number(r.steps()[k].value) << ',' << format_number(r.breakpoints()[k]) << '\n';
}

std::string search_report_json(const SearchReport& report, bool include_timing)
{
  nlohmann::json doc;
  doc["n"] = report.n;
  doc["mode"] = to_string(report.mode);
  doc["symmetric"] = report.symmetric;
  doc["value"] = report.value;
  doc["stddev"] = report.stddev;
  doc["samples"] = report.samples;
  doc["seed"] = report.seed;
  if (!report.rng.empty())
    doc["rng"] = report.rng;
  if (include_timing)
    doc["elapsed_ms"] = report.elapsed_ms;
  if (report.witness) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < report.witness->rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < report.witness->cols(); ++j)
        row.push_back((*report.witness)(i, j));
      rows.push_back(std::move(row));
    }
    doc["witness"] = std::move(rows);
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush())
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace chaoslab

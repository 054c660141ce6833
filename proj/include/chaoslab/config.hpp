#ifndef CHAOSLAB_CONFIG_HPP
#define CHAOSLAB_CONFIG_HPP

#include "chaoslab/common.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace chaoslab
{

/// Flat key=value settings grouped in [section]s, addressed as "section.key".
/// Only known keys are accepted; every key has a built-in default.
///
///   [theorem5]
///   exhaustive_n = 2,3,4,5   # comments start with '#'
class RunConfig
{
public:
  /// Built-in defaults. config/default.conf holds the same values.
  static RunConfig defaults();
  /// Defaults overridden by the file at `path`.
  static RunConfig load(const std::filesystem::path& path);
  /// Defaults overridden by `content`, in the file syntax.
  static RunConfig parse(const std::string& content);

  /// Throws std::invalid_argument for an unknown key or an invalid value.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.contains(key); }

  const std::string& text(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<long> integers(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;

  Caps caps() const;
  std::uint64_t seed() const { return unsigned_integer("run.seed"); }
  unsigned threads() const;

  /// "section.key=value" lines in key order, LF-terminated. Keys that only steer
  /// output (run.out_dir, run.format, run.threads, run.cache) are left out.
  std::string snapshot() const;
  /// FNV-1a 64 of snapshot(), as 16 hex digits.
  std::string hash() const;

  bool operator==(const RunConfig&) const = default;

private:
  std::map<std::string, std::string> values_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace chaoslab

#endif  // CHAOSLAB_CONFIG_HPP

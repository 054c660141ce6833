#ifndef CHAOSLAB_HARNESS_HPP
#define CHAOSLAB_HARNESS_HPP

#include "chaoslab/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chaoslab
{

enum class CheckStatus
{
  pass,
  fail,
  skip
};

std::string to_string(CheckStatus status);

/// One verified claim: `measured relation bound` up to `tolerance`.
struct Check
{
  std::string id;
  CheckStatus status = CheckStatus::skip;
  double measured = 0;
  double bound = 0;
  std::string relation;  // "<=", ">=", "==", "in" (bound .. upper)
  double tolerance = 0;
  double upper = 0;      // only for "in"
  std::string note;
};

Check check_le(std::string id, double measured, double bound, double tolerance = 0, std::string note = {});
Check check_ge(std::string id, double measured, double bound, double tolerance = 0, std::string note = {});
Check check_eq(std::string id, double measured, double expected, double tolerance = 0, std::string note = {});
Check check_in(std::string id, double measured, double lower, double upper, std::string note = {});
Check check_skip(std::string id, std::string note);

struct SuiteResult
{
  std::string suite;
  std::vector<Check> checks;
  std::string config_snapshot;
  std::uint64_t seed = 0;
  double wall_ms = 0;

  /// All non-skipped checks pass. A suite with no executed check does not pass.
  bool passed() const;
  std::size_t count(CheckStatus status) const;
};

/// khinchin, decoupling, lemma2, lemma3, theorem5, proposition, theorem6,
/// theorem7, orlicz, clt ("all" is not listed).
const std::vector<std::string>& suite_names();

/// Runs one named suite. Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const RunConfig& config);

/// "all" expands to every suite. Suites run concurrently; results come back in
/// the order of `names` (or of suite_names()).
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const RunConfig& config);

/// One line per check plus a summary line.
std::string suite_text(const SuiteResult& result);
std::string suite_json(const SuiteResult& result, bool include_timing);
std::string suite_csv(const SuiteResult& result, bool include_timing);

/// Distances between the exact law of v_n = n^{-1/2} sum_{i<=n} r_i and a
/// standard Gaussian g, from exact binomial counts.
struct CltDistance
{
  double kolmogorov;  // sup_x |P(v_n <= x) - P(g <= x)|
  double tail;        // sup_{z>=0} |P(|v_n| > z) - P(|g| > z)|
};

/// Requires 1 <= n <= 67 (binomial coefficients fit in 64 bits).
CltDistance clt_distance(int n);

/// Rows per n: the mean of φ_n (monte_carlo, or the exact average when the
/// sample count is "all"), the Walsh construction when n is a power of two,
/// and the exhaustive infimum when n <= 5. Rows beyond a cap are written with
/// value "skip". The config snapshot heads the table as '#' comment lines.
/// elapsed_ms is "-" unless run.timing is set, so equal configs give equal bytes.
std::string scaling_csv(const RunConfig& config);

/// Files under <dir>/<key><suffix>, written atomically.
class ArtifactCache
{
public:
  explicit ArtifactCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<std::string> lookup(const std::string& key, const std::string& suffix) const;
  void store(const std::string& key, const std::string& suffix, const std::string& content) const;

private:
  std::filesystem::path dir_;
};

}  // namespace chaoslab

#endif  // CHAOSLAB_HARNESS_HPP

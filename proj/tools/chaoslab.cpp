// chaoslab: norms and verification suites for degree-2 Rademacher chaos.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or parse error, 3 enumeration cap exceeded.

#include "chaoslab/extremal.hpp"
#include "chaoslab/harness.hpp"
#include "chaoslab/io.hpp"
#include "chaoslab/spaces.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace
{

using namespace chaoslab;

enum Exit
{
  ok = 0,
  check_failed = 1,
  usage = 2,
  cap = 3
};

struct Globals
{
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<unsigned> threads;
  std::vector<std::string> overrides;
  bool no_cache = false;
  bool timing = false;
};

RunConfig load_config(const Globals& g)
{
  RunConfig config = g.config_path.empty() ? RunConfig::defaults() : RunConfig::load(g.config_path);
  if (g.seed)
    config.set("run.seed", std::to_string(*g.seed));
  if (g.out)
    config.set("run.out_dir", *g.out);
  if (g.format)
    config.set("run.format", *g.format);
  if (g.threads)
    config.set("run.threads", std::to_string(*g.threads));
  if (g.no_cache)
    config.set("run.cache", "false");
  if (g.timing)
    config.set("run.timing", "true");
  for (const auto& item : g.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects section.key=value, got '" + item + "'");
    config.set(item.substr(0, eq), item.substr(eq + 1));
  }
  return config;
}

bool wants(const RunConfig& config, const char* kind)
{
  const auto& f = config.text("run.format");
  return f == "both" || f == kind;
}

std::filesystem::path out_dir(const RunConfig& config) { return config.text("run.out_dir"); }

int cmd_supnorm(const RunConfig& config, const std::string& file, const std::string& mode, bool signs, bool json)
{
  const Caps caps = config.caps();
  const Parallelism par{config.threads()};
  const bool decoupled = mode == "decoupled";
  Eigen::Index rows = 0, cols = 0;
  double value = 0;
  if (signs) {
    const SignMatrix theta = read_sign_matrix(file);
    rows = theta.rows();
    cols = theta.cols();
    value = static_cast<double>(decoupled ? sup_norm_decoupled(theta, caps, par) : sup_norm_undecoupled(theta, caps, par));
  } else {
    const auto a = read_matrix(file);
    rows = a.rows();
    cols = a.cols();
    value = decoupled ? sup_norm_decoupled(a, caps, par) : sup_norm_undecoupled(a, caps, par);
  }
  if (json) {
    std::cout << "{\"cols\": " << cols << ", \"mode\": \"" << mode << "\", \"rows\": " << rows
              << ", \"value\": " << format_number(value) << "}\n";
  } else {
    std::cout << rows << 'x' << cols << ' ' << mode << " sup norm: " << format_number(value) << '\n';
  }
  return ok;
}

int cmd_norm(const RunConfig& config, const std::string& file, const std::string& space_text,
             const std::string& mode, const std::string& rearrangement_csv)
{
  const SpaceSpec space = SpaceSpec::parse(space_text);
  const auto a = read_matrix(file);
  const Caps caps = config.caps();
  const Rearrangement<double> r =
      mode == "decoupled" ? rearrangement(eval_decoupled(a, caps)) : rearrangement(eval_undecoupled(a, caps));
  std::cout << a.rows() << 'x' << a.cols() << ' ' << mode << ' ' << space.to_string() << ": "
            << format_number(norm(r, space)) << '\n';
  if (!rearrangement_csv.empty()) {
    std::ostringstream csv;
    write_rearrangement_csv(csv, r);
    write_file_atomic(rearrangement_csv, csv.str());
  }
  return ok;
}

int cmd_walsh(const RunConfig& config, int k, const std::string& format)
{
  const SignMatrix theta = walsh_sign_arrangement(k);
  const MatrixFormat f = format == "csv" ? MatrixFormat::csv : format == "json" ? MatrixFormat::json : MatrixFormat::text;
  write_matrix(std::cout, theta, f);
  std::cerr << "sup norm " << sup_norm_decoupled(theta, config.caps(), {config.threads()}) << " <= 2^{3k/2} = "
            << format_number(std::exp2(1.5 * k)) << '\n';
  return ok;
}

int cmd_verify(const RunConfig& config, const std::vector<std::string>& suites, bool quiet)
{
  const bool timing = config.flag("run.timing");
  const auto results = run_suites(suites, config);
  const auto dir = out_dir(config) / "verify";
  bool all_passed = true;
  for (const auto& result : results) {
    if (!quiet)
      std::cout << suite_text(result);
    if (wants(config, "json"))
      write_file_atomic(dir / (result.suite + ".json"), suite_json(result, timing));
    if (wants(config, "csv"))
      write_file_atomic(dir / (result.suite + ".csv"), suite_csv(result, timing));
    all_passed = all_passed && result.passed();
  }
  if (results.size() > 1)
    std::cout << "overall: " << (all_passed ? "PASS" : "FAIL") << '\n';
  return all_passed ? ok : check_failed;
}

int cmd_scaling(RunConfig config, const std::vector<long>& ns, const std::string& samples, bool print)
{
  if (!ns.empty()) {
    std::string list;
    for (const long n : ns)
      list += (list.empty() ? "" : ",") + std::to_string(n);
    config.set("scaling.n", list);
  }
  if (!samples.empty())
    config.set("scaling.samples", samples);

  const ArtifactCache cache(out_dir(config) / ".cache");
  const std::string key = "scaling-" + config.hash();
  std::optional<std::string> csv;
  if (config.flag("run.cache") && !config.flag("run.timing"))
    csv = cache.lookup(key, ".csv");
  if (!csv) {
    csv = scaling_csv(config);
    if (config.flag("run.cache") && !config.flag("run.timing"))
      cache.store(key, ".csv", *csv);
  }
  const auto path = out_dir(config) / "scaling.csv";
  write_file_atomic(path, *csv);
  if (print)
    std::cout << *csv;
  else
    std::cout << "wrote " << path.string() << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Exact norms and verification suites for degree-2 Rademacher chaos"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration file (key = value with [sections])")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Monte-Carlo seed");
  app.add_option("--out", g.out, "Output directory for artifacts");
  app.add_option("--format", g.format, "Artifact format")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)");
  app.add_option("--set", g.overrides, "Override a config key: section.key=value (repeatable)");
  app.add_flag("--no-cache", g.no_cache, "Ignore and do not write the artifact cache");
  app.add_flag("--timing", g.timing, "Record wall times in artifacts");

  std::string file, mode = "decoupled", space, rearr_csv, walsh_format = "text", samples;
  bool signs = false, json = false, quiet = false, print = false;
  int k = 0;
  std::vector<std::string> suites;
  std::vector<long> ns;
  const auto modes = CLI::IsMember({"decoupled", "undecoupled"});

  auto* supnorm = app.add_subcommand("supnorm", "Exact L∞ norm of a chaos polynomial");
  supnorm->add_option("file", file, "Matrix file (.txt, .csv or .json)")->required()->check(CLI::ExistingFile);
  supnorm->add_option("--mode", mode, "decoupled (square) or undecoupled (interval)")->check(modes);
  supnorm->add_flag("--signs", signs, "Require a ±1 matrix and use the popcount kernel");
  supnorm->add_flag("--json", json, "Print a JSON object");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("suite", suites, "Suite names, or all")->required()->check([](const std::string& s) {
    if (s == "all")
      return std::string();
    const auto& names = suite_names();
    return std::find(names.begin(), names.end(), s) != names.end() ? std::string() : "unknown suite '" + s + "'";
  });
  verify->add_flag("--quiet", quiet, "Only write artifacts and set the exit code");

  auto* scaling = app.add_subcommand("scaling", "Table of φ_n statistics against n^{3/2}");
  scaling->add_option("--n", ns, "Sizes (comma separated)")->delimiter(',');
  scaling->add_option("--samples", samples, "Monte-Carlo samples per n, or all for the exact average");
  scaling->add_flag("--print", print, "Print the table to stdout");

  auto* norm_cmd = app.add_subcommand("norm", "Symmetric-space norm of a chaos polynomial");
  norm_cmd->add_option("file", file, "Matrix file")->required()->check(CLI::ExistingFile);
  norm_cmd->add_option("--space", space, "lp:P, lp:inf, orlicz-exp, orlicz-exp:unit, marc:EPS, lorentz:P")
      ->required();
  norm_cmd->add_option("--mode", mode, "decoupled or undecoupled")->check(modes);
  norm_cmd->add_option("--rearrangement", rearr_csv, "Also write the rearrangement as CSV to this path");

  auto* walsh_cmd = app.add_subcommand("walsh", "Print the Walsh sign arrangement of size 2^k");
  walsh_cmd->add_option("k", k, "Generation, 0..5")->required()->check(CLI::Range(0, 5));
  walsh_cmd->add_option("--format", walsh_format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    const RunConfig config = load_config(g);
    if (*supnorm)
      return cmd_supnorm(config, file, mode, signs, json);
    if (*verify)
      return cmd_verify(config, suites, quiet);
    if (*scaling)
      return cmd_scaling(config, ns, samples, print);
    if (*norm_cmd)
      return cmd_norm(config, file, space, mode, rearr_csv);
    if (*walsh_cmd)
      return cmd_walsh(config, k, walsh_format);
  } catch (const cap_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cap;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return check_failed;
  }
  return usage;
}

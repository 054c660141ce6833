#include "chaoslab/harness.hpp"

#include "chaoslab/extremal.hpp"
#include "chaoslab/io.hpp"
#include "chaoslab/spaces.hpp"

#include <json.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <numbers>
#include <sstream>

namespace chaoslab
{

std::string to_string(CheckStatus status)
{
  switch (status) {
  case CheckStatus::pass:
    return "pass";
  case CheckStatus::fail:
    return "fail";
  case CheckStatus::skip:
    return "skip";
  }
  return "unknown";
}

namespace
{

CheckStatus status_of(bool ok) { return ok ? CheckStatus::pass : CheckStatus::fail; }

}  // namespace

Check check_le(std::string id, double measured, double bound, double tolerance, std::string note)
{
  return {std::move(id), status_of(measured <= bound + tolerance), measured, bound, "<=", tolerance, 0,
          std::move(note)};
}

Check check_ge(std::string id, double measured, double bound, double tolerance, std::string note)
{
  return {std::move(id), status_of(measured >= bound - tolerance), measured, bound, ">=", tolerance, 0,
          std::move(note)};
}

Check check_eq(std::string id, double measured, double expected, double tolerance, std::string note)
{
  return {std::move(id), status_of(std::abs(measured - expected) <= tolerance), measured, expected, "==",
          tolerance, 0, std::move(note)};
}

Check check_in(std::string id, double measured, double lower, double upper, std::string note)
{
  return {std::move(id), status_of(measured >= lower && measured <= upper), measured, lower, "in", 0, upper,
          std::move(note)};
}

Check check_skip(std::string id, std::string note)
{
  return {std::move(id), CheckStatus::skip, 0, 0, "", 0, 0, std::move(note)};
}

bool SuiteResult::passed() const
{
  return count(CheckStatus::fail) == 0 && count(CheckStatus::pass) > 0;
}

std::size_t SuiteResult::count(CheckStatus status) const
{
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [status](const Check& c) { return c.status == status; }));
}

namespace
{

/// Deterministic uniforms drawn from the counter-mode SplitMix64 stream.
class Stream
{
public:
  Stream(std::uint64_t seed, const std::string& salt) : seed_(seed ^ fnv1a64(salt)) {}

  std::uint64_t word() { return splitmix64_word(seed_, counter_++); }
  /// Uniform on [-1, 1).
  double symmetric() { return std::ldexp(static_cast<double>(word() >> 11), -52) - 1.0; }
  std::uint64_t below(std::uint64_t bound) { return word() % bound; }

  CoefficientMatrix<double> matrix(Eigen::Index rows, Eigen::Index cols)
  {
    CoefficientMatrix<double> a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i)
        a(i, j) = symmetric();
    return a;
  }

  SignMatrix symmetric_signs(Eigen::Index n)
  {
    Eigen::MatrixXi e(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j)
        e(i, j) = e(j, i) = (word() & 1) ? -1 : 1;
    return SignMatrix(std::move(e), true);
  }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::string tag(const std::string& prefix, double value) { return prefix + "=" + format_number(value); }

/// max over all (eps, delta) of |eps^T A delta|, straight from the definition.
double brute_force_sup(const CoefficientMatrix<double>& a)
{
  double best = 0;
  const auto n = a.rows(), m = a.cols();
  for (SignMask e = 0; e < (SignMask{1} << n); ++e)
    for (SignMask d = 0; d < (SignMask{1} << m); ++d) {
      double v = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          v += a(i, j) * (((e >> i) & 1) ? -1 : 1) * (((d >> j) & 1) ? -1 : 1);
      best = std::max(best, std::abs(v));
    }
  return best;
}

using Suite = std::function<void(const RunConfig&, std::vector<Check>&)>;

void suite_khinchin(const RunConfig& cfg, std::vector<Check>& out)
{
  Stream rng(cfg.seed(), "khinchin");
  const long trials = cfg.integer("khinchin.trials");
  const long max_n = cfg.integer("khinchin.max_n");
  const auto qs = cfg.reals("khinchin.q");
  const double u = cfg.real("khinchin.exp_u");
  const Caps caps = cfg.caps();

  std::vector<double> worst_moment(qs.size(), 0);
  double worst_l2 = 0, min_l1 = infinity, max_exp = 0;
  for (long t = 0; t < trials; ++t) {
    const long n = 1 + t % max_n;
    CoefficientMatrix<double> a = rng.matrix(n, n);
    a /= a.norm();
    const auto x = eval_decoupled(a, caps);
    for (std::size_t k = 0; k < qs.size(); ++k)
      worst_moment[k] = std::max(worst_moment[k], lp_norm(x, qs[k]) / qs[k]);
    worst_l2 = std::max(worst_l2, std::abs(lp_norm(x, 2) - 1));
    min_l1 = std::min(min_l1, lp_norm(x, 1));
    max_exp = std::max(max_exp, exp_moment(x, u));
  }
  for (std::size_t k = 0; k < qs.size(); ++k)
    out.push_back(check_le(tag("moment.q", qs[k]), worst_moment[k], 1, 0, "max ||x||_q / (q ||a||_2)"));
  out.push_back(check_le("parseval", worst_l2, 0, 1e-12, "max | ||x||_2 - ||a||_2 |"));
  out.push_back(check_ge("l1_lower", min_l1, 0.5, 0, "min ||x||_1 / ||a||_2"));
  out.push_back(check_le("exp_u_admissible", u, 1 / (2 * std::numbers::e), 0, "u < 1/(2e)"));
  out.push_back(check_le("exp_moment", max_exp, 1, 0, "max ∫(e^{u|x|} - 1)"));
}

void suite_decoupling(const RunConfig& cfg, std::vector<Check>& out)
{
  Stream rng(cfg.seed(), "decoupling");
  const long trials = cfg.integer("decoupling.trials");
  const int N = static_cast<int>(cfg.integer("decoupling.N"));
  const Caps caps = cfg.caps();
  if (N > caps.subset_bits) {
    out.push_back(check_skip("identity", "N above caps.subset_bits"));
    return;
  }
  double worst = 0;
  for (long t = 0; t < trials; ++t) {
    CoefficientMatrix<double> b = rng.matrix(N, N);
    b.diagonal().setZero();
    const auto lhs = eval_undecoupled(b, caps);
    const auto rhs = decouple_identity_rhs(b, N, caps);
    worst = std::max(worst, (lhs.values() - rhs.values()).cwiseAbs().maxCoeff());
  }
  out.push_back(check_le("identity", worst, 0, cfg.real("decoupling.tolerance"), "max pointwise |lhs - rhs|"));
}

void suite_lemma2(const RunConfig& cfg, std::vector<Check>& out)
{
  const double tol = cfg.real("run.quad_tol");
  double previous = infinity;
  bool decreasing = true;
  for (const double z : cfg.reals("lemma2.z")) {
    if (z < 1) {
      out.push_back(check_skip(tag("z", z), "L(z) is defined for z >= 1 only"));
      continue;
    }
    const double L = log_distribution_L(z, tol);
    const auto [lower, upper] = log_distribution_bounds(z);
    out.push_back(check_ge(tag("z", z) + ".lower", L, lower));
    out.push_back(check_le(tag("z", z) + ".upper", L, upper));
    decreasing = decreasing && L < previous;
    previous = L;
  }
  out.push_back(check_eq("total_mass", log_distribution_L(1, tol), 1, 10 * tol, "L(1) = μ(I×I)"));
  out.push_back(check_eq("decreasing", decreasing ? 1 : 0, 1, 0, "L strictly decreasing on the grid"));
}

void suite_lemma3(const RunConfig& cfg, std::vector<Check>& out)
{
  Stream rng(cfg.seed(), "lemma3");
  const long trials = cfg.integer("lemma3.trials");
  const long n = cfg.integer("lemma3.n");
  const Caps caps = cfg.caps();
  long shift_mismatch = 0, reindex_mismatch = 0;
  for (long t = 0; t < trials; ++t) {
    const CoefficientMatrix<double> a = rng.matrix(n, n);
    const auto x = eval_decoupled(a, caps);
    if (!equimeasurable(eval_undecoupled(shift_map(a), caps), x))
      ++shift_mismatch;
    const Eigen::Index size = 2 * n;
    const auto ro = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(size - n + 1)));
    const auto co = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(size - n + 1)));
    if (!equimeasurable(eval_decoupled(reindex(a, size, size, ro, co), caps), x))
      ++reindex_mismatch;
  }
  out.push_back(check_eq("shift_map", static_cast<double>(shift_mismatch), 0, 0, "mismatching distributions"));
  out.push_back(check_eq("reindex", static_cast<double>(reindex_mismatch), 0, 0, "mismatching distributions"));

  // r_1(s) r_2(t) against r_3(s) r_1(t)
  CoefficientMatrix<double> p = CoefficientMatrix<double>::Zero(3, 3), q = p;
  p(0, 1) = 1;
  q(2, 0) = 1;
  out.push_back(check_eq("relabel", equimeasurable(eval_decoupled(p, caps), eval_decoupled(q, caps)) ? 1 : 0, 1));
}

void suite_theorem5(const RunConfig& cfg, std::vector<Check>& out)
{
  Stream rng(cfg.seed(), "theorem5");
  const Caps caps = cfg.caps();
  const Parallelism par{cfg.threads()};

  const long oracle_n = cfg.integer("theorem5.oracle_n");
  double worst = 0;
  for (long t = 0; t < cfg.integer("theorem5.oracle_trials"); ++t) {
    const auto a = rng.matrix(oracle_n, oracle_n);
    worst = std::max(worst, std::abs(sup_norm_decoupled(a, caps, par) - brute_force_sup(a)));
  }
  out.push_back(check_le("supnorm_oracle", worst, 0, 1e-12, "max |scan - brute force|"));

  for (const long n : cfg.integers("theorem5.exhaustive_n")) {
    const std::string id = "inf.n=" + std::to_string(n);
    if (n < 1 || n > 5) {
      out.push_back(check_skip(id, "exhaustive search covers n <= 5"));
      continue;
    }
    const auto report = exhaustive_inf(static_cast<int>(n), false, par);
    out.push_back(check_ge(id, report.value, std::pow(n, 1.5) / std::numbers::sqrt2, 0, "inf φ_n >= n^{3/2}/√2"));
    if (n == 2)
      out.push_back(check_eq("inf.n=2.exact", report.value, 2));
  }

  if (caps.average_bits >= 4)
    out.push_back(check_eq("average.n=2.exact", exhaustive_average(2, caps, par).value, 3));
  else
    out.push_back(check_skip("average.n=2.exact", "caps.average_bits < 4"));

  const auto samples = static_cast<std::uint64_t>(cfg.integer("theorem5.samples"));
  for (const long n : cfg.integers("theorem5.mc_n")) {
    const std::string id = "mean.n=" + std::to_string(n);
    if (n < 1 || n > 16) {
      out.push_back(check_skip(id, "Monte-Carlo covers n <= 16"));
      continue;
    }
    const auto report = monte_carlo_average(static_cast<int>(n), samples, cfg.seed(), par);
    out.push_back(check_in(id, report.value / std::pow(n, 1.5), 1 / std::numbers::sqrt2, 9 * std::numbers::sqrt2,
                           "mean φ_n / n^{3/2}"));
  }
}

void suite_proposition(const RunConfig& cfg, std::vector<Check>& out)
{
  const Caps caps = cfg.caps();
  const Parallelism par{cfg.threads()};
  const long k_max = cfg.integer("proposition.k_max");
  for (long k = 0; k <= k_max; ++k) {
    const std::string id = "walsh.k=" + std::to_string(k);
    if (k > 5 || (1L << k) > caps.supnorm_bits) {
      out.push_back(check_skip(id, "beyond the Walsh or sup-norm cap"));
      continue;
    }
    const long phi = sup_norm_decoupled(walsh_sign_arrangement(static_cast<int>(k)), caps, par);
    out.push_back(check_le(id, static_cast<double>(phi), std::exp2(1.5 * k), 0, "φ_{2^k}(θ) <= 2^{3k/2}"));
    if (k == 1)
      out.push_back(check_eq("walsh.k=1.exact", static_cast<double>(phi), 2));
    if (k == 2)
      out.push_back(check_eq("walsh.k=2.exact", static_cast<double>(phi), 8));
    out.push_back(check_le("sidon_defect.k=" + std::to_string(k), std::ldexp(static_cast<double>(phi), -2 * static_cast<int>(k)),
                           std::exp2(-0.5 * k), 0, "φ / 4^k <= 2^{-k/2}"));
  }
}

void suite_theorem6(const RunConfig& cfg, std::vector<Check>& out)
{
  Stream rng(cfg.seed(), "theorem6");
  const Caps caps = cfg.caps();
  const long max_n = cfg.integer("theorem6.max_n");
  double worst = -infinity;
  for (long t = 0; t < cfg.integer("theorem6.trials"); ++t) {
    const long n = 1 + t % max_n;
    const SignMatrix theta = rng.symmetric_signs(n);
    worst = std::max(worst, static_cast<double>(sup_norm_undecoupled(theta, caps) - sup_norm_decoupled(theta, caps)));
  }
  out.push_back(check_le("undecoupled_le_decoupled", worst, 0, 0, "max φ̄(θ) - φ(θ)"));
}

void suite_theorem7(const RunConfig& cfg, std::vector<Check>& out)
{
  const Caps caps = cfg.caps();
  const double eps = cfg.real("theorem7.eps");
  const int full_K = static_cast<int>(cfg.integer("theorem7.full_K"));
  const int corner_K = static_cast<int>(cfg.integer("theorem7.corner_K"));

  const auto full = theorem7_witness(eps, full_K, WitnessMode::full, caps);
  const double growth = std::exp2(eps / 2);
  for (const auto& b : full.blocks) {
    const std::string k = "k=" + std::to_string(b.k);
    out.push_back(check_eq(k + ".corner", b.corner_value, b.corner_expected, 0, "y_k at the corner cell"));
    out.push_back(check_ge(k + ".rearranged_at_u", *b.rearranged_at_uk, b.corner_expected, 0, "y_k*(u_k) >= 2^{2k}"));
    out.push_back(check_le(k + ".z_sup", static_cast<double>(b.z_sup), b.z_bound, 0, "||z_k||_∞ <= 2^{3k/2}"));
    out.push_back(check_ge(k + ".quasinorm_lower", *b.partial_quasinorm, b.lower_bound, 0,
                           "partial image quasi-norm >= 2^{εk/2 - 1}"));
    out.push_back(check_in(k + ".marc_over_quasi", *b.partial_marcinkiewicz / *b.partial_quasinorm, 1 - 1e-12, 2,
                           "M(φ_ε) norm / quasi-norm"));
    if (b.k > 0) {
      const double ratio = *b.partial_quasinorm / *full.blocks[static_cast<std::size_t>(b.k - 1)].partial_quasinorm;
      out.push_back(check_ge(k + ".growth", ratio, growth, 0, "quasi-norm ratio to block k-1 >= 2^{ε/2}"));
    }
  }
  const auto corner = theorem7_witness(eps, corner_K, WitnessMode::corner, caps);
  for (const auto& b : corner.blocks) {
    if (b.k <= full_K)
      continue;
    const std::string k = "k=" + std::to_string(b.k);
    out.push_back(check_eq(k + ".corner", b.corner_value, b.corner_expected, 0, "corner mode"));
    out.push_back(check_le(k + ".z_sup", static_cast<double>(b.z_sup), b.z_bound, 0, "corner mode"));
  }
  out.push_back(check_le("z_constant", corner.z_constant, 1, 0, "max_k ||z_k||_∞ / 2^{3k/2}"));
  const auto& last = corner.blocks.back();
  out.push_back(check_le("x_sup_bounded", last.x_sup_partial, corner.x_sup_limit_bound, 1e-12,
                         "||sum_{k<=K} x_k||_∞ <= C 2^{ε/2}/(2^{ε/2}-1)"));
}

void suite_orlicz(const RunConfig& cfg, std::vector<Check>& out)
{
  const double tol = cfg.real("orlicz.tolerance");
  for (const double t : cfg.reals("orlicz.t")) {
    if (t > 1) {
      out.push_back(check_skip(tag("t", t), "t must lie in (0, 1]"));
      continue;
    }
    const Rearrangement<double> chi({{1.0, t}, {0.0, 1 - t}});
    const double unit = orlicz_exp_norm(chi, 1e-12, ExpYoung::unit) * std::log1p((std::numbers::e - 1) / t);
    out.push_back(check_eq(tag("t", t) + ".unit", unit, 1, tol, "||χ|| ln(1 + (e-1)/t), M = (e^u-1)/(e-1)"));
    const double plain = orlicz_exp_norm(chi, 1e-12, ExpYoung::plain) * std::log1p(1 / t);
    out.push_back(check_eq(tag("t", t) + ".plain", plain, 1, tol, "||χ|| ln(1 + 1/t), M = e^u-1"));
  }
  const Rearrangement<double> one({{1.0, 1.0}});
  out.push_back(check_eq("constant_one", orlicz_exp_norm(one, 1e-12), 1 / std::numbers::ln2, tol, "1/ln 2"));
}

void suite_clt(const RunConfig& cfg, std::vector<Check>& out)
{
  const int n = static_cast<int>(cfg.integer("clt.n"));
  if (n > 67) {
    out.push_back(check_skip("kolmogorov", "n above 67"));
    return;
  }
  const auto d = clt_distance(n);
  const double bound = cfg.real("clt.max_distance");
  out.push_back(check_le("kolmogorov", d.kolmogorov, bound, 0, "sup_x |P(v_n <= x) - P(g <= x)|"));
  out.push_back(check_le("tail", d.tail, bound, 0, "sup_z |P(|v_n| > z) - P(|g| > z)|"));
}

const std::map<std::string, Suite>& registry()
{
  static const std::map<std::string, Suite> suites = {
      {"khinchin", suite_khinchin},       {"decoupling", suite_decoupling}, {"lemma2", suite_lemma2},
      {"lemma3", suite_lemma3},           {"theorem5", suite_theorem5},     {"proposition", suite_proposition},
      {"theorem6", suite_theorem6},       {"theorem7", suite_theorem7},     {"orlicz", suite_orlicz},
      {"clt", suite_clt},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names()
{
  static const std::vector<std::string> names = {"khinchin", "decoupling",  "lemma2",   "lemma3",   "theorem5",
                                                 "proposition", "theorem6", "theorem7", "orlicz", "clt"};
  return names;
}

SuiteResult run_suite(const std::string& name, const RunConfig& config)
{
  const auto it = registry().find(name);
  if (it == registry().end())
    throw std::invalid_argument("unknown suite '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  SuiteResult result;
  result.suite = name;
  result.config_snapshot = config.snapshot();
  result.seed = config.seed();
  try {
    it->second(config, result.checks);
  } catch (const cap_error& e) {
    result.checks.push_back(check_skip("cap", e.what()));
  }
  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const RunConfig& config)
{
  std::vector<std::string> expanded;
  for (const auto& name : names) {
    if (name == "all")
      expanded.insert(expanded.end(), suite_names().begin(), suite_names().end());
    else if (registry().contains(name))
      expanded.push_back(name);
    else
      throw std::invalid_argument("unknown suite '" + name + "'");
  }
  std::vector<std::future<SuiteResult>> pending;
  for (const auto& name : expanded)
    pending.push_back(std::async(std::launch::async, [&config, name] { return run_suite(name, config); }));
  std::vector<SuiteResult> results;
  for (auto& f : pending)
    results.push_back(f.get());
  return results;
}

namespace
{

std::string bound_text(const Check& c)
{
  if (c.status == CheckStatus::skip)
    return "";
  if (c.relation == "in")
    return "in [" + format_number(c.bound) + ", " + format_number(c.upper) + "]";
  std::string s = c.relation + " " + format_number(c.bound);
  if (c.tolerance > 0)
    s += " ± " + format_number(c.tolerance);
  return s;
}

}  // namespace

std::string suite_text(const SuiteResult& result)
{
  std::ostringstream out;
  for (const auto& c : result.checks) {
    out << result.suite << '/' << c.id << ": " << to_string(c.status);
    if (c.status != CheckStatus::skip)
      out << "  " << format_number(c.measured) << ' ' << bound_text(c);
    if (!c.note.empty())
      out << "  (" << c.note << ')';
    out << '\n';
  }
  out << result.suite << ": " << (result.passed() ? "PASS" : "FAIL") << " (" << result.count(CheckStatus::pass)
      << " pass, " << result.count(CheckStatus::fail) << " fail, " << result.count(CheckStatus::skip) << " skip)\n";
  return out.str();
}

namespace
{

nlohmann::json config_json(const std::string& snapshot)
{
  nlohmann::json doc = nlohmann::json::object();
  std::istringstream in(snapshot);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    doc[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return doc;
}

nlohmann::json number_json(double v)
{
  if (std::isfinite(v))
    return v;
  return format_number(v);
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string quoted = "\"";
  for (const char c : s) {
    if (c == '"')
      quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void snapshot_comments(std::ostream& out, const std::string& snapshot)
{
  std::istringstream in(snapshot);
  std::string line;
  while (std::getline(in, line))
    out << "# " << line << '\n';
}

}  // namespace

std::string suite_json(const SuiteResult& result, bool include_timing)
{
  nlohmann::json doc;
  doc["suite"] = result.suite;
  doc["passed"] = result.passed();
  doc["seed"] = result.seed;
  doc["config"] = config_json(result.config_snapshot);
  if (include_timing)
    doc["wall_ms"] = result.wall_ms;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : result.checks) {
    nlohmann::json item;
    item["id"] = c.id;
    item["status"] = to_string(c.status);
    if (c.status != CheckStatus::skip) {
      item["measured"] = number_json(c.measured);
      item["relation"] = c.relation;
      item["bound"] = number_json(c.bound);
      item["tolerance"] = c.tolerance;
      if (c.relation == "in")
        item["upper"] = number_json(c.upper);
    }
    if (!c.note.empty())
      item["note"] = c.note;
    checks.push_back(std::move(item));
  }
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

std::string suite_csv(const SuiteResult& result, bool include_timing)
{
  std::ostringstream out;
  out << "# suite " << result.suite << '\n';
  snapshot_comments(out, result.config_snapshot);
  if (include_timing)
    out << "# wall_ms " << format_number(result.wall_ms) << '\n';
  out << "check,status,measured,relation,bound,upper,tolerance,note\n";
  for (const auto& c : result.checks) {
    const bool skip = c.status == CheckStatus::skip;
    out << csv_field(c.id) << ',' << to_string(c.status) << ',' << (skip ? "" : format_number(c.measured)) << ','
        << c.relation << ',' << (skip ? "" : format_number(c.bound)) << ','
        << (c.relation == "in" ? format_number(c.upper) : "") << ',' << (skip ? "" : format_number(c.tolerance))
        << ',' << csv_field(c.note) << '\n';
  }
  return out.str();
}

CltDistance clt_distance(int n)
{
  if (n < 1 || n > 67)
    throw std::invalid_argument("clt_distance: need 1 <= n <= 67");
  // row[k] = C(n, k): the number of sign vectors with k minus signs
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int k = i; k > 0; --k)
      row[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k - 1)];

  const long double total = std::ldexp(1.0L, n);
  const long double root = std::sqrt(static_cast<long double>(n));
  const auto gauss_cdf = [](long double x) { return 0.5L * std::erfc(-x / std::sqrt(2.0L)); };
  const auto gauss_tail = [](long double z) { return std::erfc(z / std::sqrt(2.0L)); };

  // atoms of v_n in increasing order: k minus signs gives (n - 2k)/√n, so k runs down
  long double kolmogorov = 0;
  unsigned __int128 below = 0;  // count of atoms strictly below the current one
  for (int k = n; k >= 0; --k) {
    const long double x = (n - 2.0L * k) / root;
    const long double left = static_cast<long double>(below) / total;
    below += row[static_cast<std::size_t>(k)];
    const long double right = static_cast<long double>(below) / total;
    kolmogorov = std::max({kolmogorov, std::abs(left - gauss_cdf(x)), std::abs(right - gauss_cdf(x))});
  }

  // |v_n| takes the values |n - 2k|/√n; walk them upward from z = 0
  std::map<int, unsigned __int128> by_modulus;
  for (int k = 0; k <= n; ++k)
    by_modulus[std::abs(n - 2 * k)] += row[static_cast<std::size_t>(k)];
  unsigned __int128 above = 0;
  for (const auto& [m, count] : by_modulus)
    above += count;
  long double tail = 0;
  long double z = 0;
  for (auto it = by_modulus.begin(); it != by_modulus.end(); ++it) {
    const long double atom = it->first / root;
    // on [z, atom) the tail P(|v| > .) equals above/total
    const long double p = static_cast<long double>(above) / total;
    if (atom > z)
      tail = std::max({tail, std::abs(p - gauss_tail(z)), std::abs(p - gauss_tail(atom))});
    above -= it->second;
    z = atom;
    tail = std::max(tail, std::abs(static_cast<long double>(above) / total - gauss_tail(atom)));
  }
  tail = std::max(tail, gauss_tail(z));  // beyond the largest atom the tail of v_n is 0
  return {static_cast<double>(kolmogorov), static_cast<double>(tail)};
}

std::string scaling_csv(const RunConfig& config)
{
  const Caps caps = config.caps();
  const Parallelism par{config.threads()};
  const bool timing = config.flag("run.timing");
  const std::string samples_text = config.text("scaling.samples");
  const bool exact = samples_text == "all";
  const std::uint64_t seed = config.seed();

  std::ostringstream out;
  out << "# chaoslab scaling\n";
  snapshot_comments(out, config.snapshot());
  out << "n,mode,value,value/n^1.5,samples,seed,elapsed_ms\n";

  const auto row = [&](long n, const std::string& mode, std::optional<double> value, std::uint64_t samples,
                       bool seeded, double elapsed) {
    out << n << ',' << mode << ',';
    if (value)
      out << format_number(*value) << ',' << format_number(*value / std::pow(static_cast<double>(n), 1.5));
    else
      out << "skip,skip";
    out << ',' << (value ? std::to_string(samples) : "-") << ',' << (seeded ? std::to_string(seed) : "-") << ','
        << (timing && value ? format_number(elapsed) : "-") << '\n';
  };

  for (const long n : config.integers("scaling.n")) {
    if (n < 1) {
      row(n, exact ? "average" : "monte_carlo", std::nullopt, 0, false, 0);
      continue;
    }
    try {
      const auto r = exact ? exhaustive_average(static_cast<int>(n), caps, par)
                           : monte_carlo_average(static_cast<int>(n), std::stoull(samples_text), seed, par);
      row(n, to_string(r.mode), r.value, r.samples, !exact, r.elapsed_ms);
    } catch (const cap_error&) {
      row(n, exact ? "average" : "monte_carlo", std::nullopt, 0, !exact, 0);
    }

    if (std::has_single_bit(static_cast<unsigned long>(n))) {
      const int k = std::countr_zero(static_cast<unsigned long>(n));
      try {
        const auto start = std::chrono::steady_clock::now();
        const SignMatrix theta = walsh_sign_arrangement(k);
        const long value = sup_norm_decoupled(theta, caps, par);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        row(n, "walsh", static_cast<double>(value), 1, false, ms);
      } catch (const cap_error&) {
        row(n, "walsh", std::nullopt, 0, false, 0);
      }
    }

    if (n <= 5) {
      const auto r = exhaustive_inf(static_cast<int>(n), false, par);
      row(n, to_string(r.mode), r.value, r.samples, false, r.elapsed_ms);
    }
  }
  return out.str();
}

std::optional<std::string> ArtifactCache::lookup(const std::string& key, const std::string& suffix) const
{
  const auto path = dir_ / (key + suffix);
  if (!std::filesystem::exists(path))
    return std::nullopt;
  return read_file(path);
}

void ArtifactCache::store(const std::string& key, const std::string& suffix, const std::string& content) const
{
  write_file_atomic(dir_ / (key + suffix), content);
}

}  // namespace chaoslab

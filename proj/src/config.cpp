#include "chaoslab/config.hpp"

#include "chaoslab/io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <thread>

namespace chaoslab
{

namespace
{

enum class Kind
{
  positive_int,
  non_negative_int,
  u64,
  positive_real,
  text,
  format,
  boolean,
  int_list,
  real_list,
  samples
};

struct Key
{
  const char* name;
  Kind kind;
  const char* value;
};

// Keep in sync with config/default.conf; a unit test compares the two.
constexpr Key known_keys[] = {
    {"caps.materialize_bits", Kind::positive_int, "24"},
    {"caps.supnorm_bits", Kind::positive_int, "30"},
    {"caps.undecoupled_bits", Kind::positive_int, "24"},
    {"caps.subset_bits", Kind::positive_int, "12"},
    {"caps.average_bits", Kind::positive_int, "16"},
    {"run.seed", Kind::u64, "20240917"},
    {"run.quad_tol", Kind::positive_real, "1e-9"},
    {"run.out_dir", Kind::text, "out"},
    {"run.format", Kind::format, "both"},
    {"run.threads", Kind::non_negative_int, "0"},
    {"run.timing", Kind::boolean, "false"},
    {"run.cache", Kind::boolean, "true"},
    {"khinchin.trials", Kind::positive_int, "100"},
    {"khinchin.max_n", Kind::positive_int, "6"},
    {"khinchin.q", Kind::real_list, "2,3,4,6"},
    {"khinchin.exp_u", Kind::positive_real, "0.18"},
    {"decoupling.trials", Kind::positive_int, "50"},
    {"decoupling.N", Kind::positive_int, "5"},
    {"decoupling.tolerance", Kind::positive_real, "1e-12"},
    {"lemma2.z", Kind::real_list, "1,4,9,16,25"},
    {"lemma3.trials", Kind::positive_int, "50"},
    {"lemma3.n", Kind::positive_int, "3"},
    {"theorem5.oracle_trials", Kind::positive_int, "200"},
    {"theorem5.oracle_n", Kind::positive_int, "4"},
    {"theorem5.exhaustive_n", Kind::int_list, "2,3,4,5"},
    {"theorem5.mc_n", Kind::int_list, "4,8,12"},
    {"theorem5.samples", Kind::positive_int, "2000"},
    {"proposition.k_max", Kind::non_negative_int, "4"},
    {"theorem6.trials", Kind::positive_int, "100"},
    {"theorem6.max_n", Kind::positive_int, "8"},
    {"theorem7.eps", Kind::positive_real, "0.25"},
    {"theorem7.full_K", Kind::non_negative_int, "2"},
    {"theorem7.corner_K", Kind::non_negative_int, "4"},
    {"orlicz.t", Kind::real_list, "1,0.5,0.25,0.0625"},
    {"orlicz.tolerance", Kind::positive_real, "1e-8"},
    {"clt.n", Kind::positive_int, "64"},
    {"clt.max_distance", Kind::positive_real, "0.1"},
    {"scaling.n", Kind::int_list, "1,2,3,4,5,8,12,16"},
    {"scaling.samples", Kind::samples, "2000"},
};

const Key* find_key(const std::string& name)
{
  for (const auto& k : known_keys)
    if (name == k.name)
      return &k;
  return nullptr;
}

std::string trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out)
{
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return !text.empty() && ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string> split_list(const std::string& text)
{
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    items.push_back(trim(item));
  return items;
}

bool valid(Kind kind, const std::string& value)
{
  long i = 0;
  std::uint64_t u = 0;
  double r = 0;
  switch (kind) {
  case Kind::positive_int:
    return parse_number(value, i) && i > 0;
  case Kind::non_negative_int:
    return parse_number(value, i) && i >= 0;
  case Kind::u64:
    return parse_number(value, u);
  case Kind::positive_real:
    return parse_number(value, r) && r > 0 && std::isfinite(r);
  case Kind::text:
    return !value.empty();
  case Kind::format:
    return value == "csv" || value == "json" || value == "both";
  case Kind::boolean:
    return value == "true" || value == "false";
  case Kind::samples:
    return value == "all" || (parse_number(value, i) && i > 0);
  case Kind::int_list:
    for (const auto& item : split_list(value))
      if (!parse_number(item, i) || i < 0)
        return false;
    return !value.empty();
  case Kind::real_list:
    for (const auto& item : split_list(value))
      if (!parse_number(item, r) || !(r > 0))
        return false;
    return !value.empty();
  }
  return false;
}

// where and how results are written, never what they are
bool operational(const std::string& key)
{
  return key == "run.out_dir" || key == "run.format" || key == "run.threads" || key == "run.cache";
}

}  // namespace

RunConfig RunConfig::defaults()
{
  RunConfig config;
  for (const auto& k : known_keys)
    config.values_[k.name] = k.value;
  return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path)
{
  return parse(read_file(path));
}

RunConfig RunConfig::parse(const std::string& content)
{
  RunConfig config = defaults();
  std::istringstream in(content);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ParseError("malformed section header", line_no, 1);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key = value", line_no, 1);
    if (section.empty())
      throw ParseError("key outside of any [section]", line_no, 1);
    const std::string key = section + "." + trim(line.substr(0, eq));
    try {
      config.set(key, trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no, static_cast<int>(raw.find_first_not_of(" \t")) + 1);
    }
  }
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value)
{
  const Key* k = find_key(key);
  if (!k)
    throw std::invalid_argument("unknown config key '" + key + "'");
  if (!valid(k->kind, value))
    throw std::invalid_argument("invalid value '" + value + "' for config key '" + key + "'");
  values_[key] = value;
}

const std::string& RunConfig::text(const std::string& key) const
{
  const auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("unknown config key '" + key + "'");
  return it->second;
}

long RunConfig::integer(const std::string& key) const
{
  long value = 0;
  if (!parse_number(text(key), value))
    throw std::invalid_argument("config key '" + key + "' is not an integer");
  return value;
}

std::uint64_t RunConfig::unsigned_integer(const std::string& key) const
{
  std::uint64_t value = 0;
  if (!parse_number(text(key), value))
    throw std::invalid_argument("config key '" + key + "' is not an unsigned integer");
  return value;
}

double RunConfig::real(const std::string& key) const
{
  double value = 0;
  if (!parse_number(text(key), value))
    throw std::invalid_argument("config key '" + key + "' is not a real number");
  return value;
}

bool RunConfig::flag(const std::string& key) const
{
  return text(key) == "true";
}

std::vector<long> RunConfig::integers(const std::string& key) const
{
  std::vector<long> out;
  for (const auto& item : split_list(text(key))) {
    long value = 0;
    if (!parse_number(item, value))
      throw std::invalid_argument("config key '" + key + "' is not an integer list");
    out.push_back(value);
  }
  return out;
}

std::vector<double> RunConfig::reals(const std::string& key) const
{
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) {
    double value = 0;
    if (!parse_number(item, value))
      throw std::invalid_argument("config key '" + key + "' is not a real list");
    out.push_back(value);
  }
  return out;
}

Caps RunConfig::caps() const
{
  Caps caps;
  caps.materialize_bits = static_cast<int>(integer("caps.materialize_bits"));
  caps.supnorm_bits = static_cast<int>(integer("caps.supnorm_bits"));
  caps.undecoupled_bits = static_cast<int>(integer("caps.undecoupled_bits"));
  caps.subset_bits = static_cast<int>(integer("caps.subset_bits"));
  caps.average_bits = static_cast<int>(integer("caps.average_bits"));
  return caps;
}

unsigned RunConfig::threads() const
{
  const long requested = integer("run.threads");
  if (requested > 0)
    return static_cast<unsigned>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string RunConfig::snapshot() const
{
  std::string out;
  for (const auto& [key, value] : values_)
    if (!operational(key))
      out += key + "=" + value + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash() const
{
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a64(snapshot())));
  return buffer;
}

}  // namespace chaoslab

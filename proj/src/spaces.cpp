#include "chaoslab/spaces.hpp"

#include <charconv>
#include <sstream>

namespace chaoslab
{

namespace
{

double parse_parameter(const std::string& text, const std::string& spec)
{
  if (text == "inf")
    return infinity;
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("space '" + spec + "': bad parameter '" + text + "'");
  return value;
}

}  // namespace

SpaceSpec SpaceSpec::parse(const std::string& text)
{
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);

  SpaceSpec spec;
  if (head == "lp") {
    spec.kind = Kind::lp;
    spec.parameter = parse_parameter(tail, text);
    if (!(spec.parameter >= 1))
      throw std::invalid_argument("space '" + text + "': p must lie in [1, inf]");
  } else if (head == "orlicz-exp") {
    spec.kind = Kind::orlicz_exp;
    spec.parameter = 0;
    if (tail == "unit")
      spec.young = ExpYoung::unit;
    else if (!tail.empty())
      throw std::invalid_argument("space '" + text + "': expected orlicz-exp or orlicz-exp:unit");
  } else if (head == "marc") {
    spec.kind = Kind::marcinkiewicz;
    spec.parameter = parse_parameter(tail, text);
    if (!(spec.parameter > 0 && spec.parameter < 0.5))
      throw std::invalid_argument("space '" + text + "': epsilon must lie in (0, 1/2)");
  } else if (head == "lorentz") {
    spec.kind = Kind::lorentz;
    spec.parameter = parse_parameter(tail, text);
    if (!(spec.parameter > 1 && spec.parameter < 2))
      throw std::invalid_argument("space '" + text + "': p must lie in (1, 2)");
  } else {
    throw std::invalid_argument("unknown space '" + text + "'");
  }
  return spec;
}

std::string SpaceSpec::to_string() const
{
  std::ostringstream out;
  switch (kind) {
  case Kind::lp:
    out << "lp:";
    if (std::isinf(parameter))
      out << "inf";
    else
      out << parameter;
    break;
  case Kind::orlicz_exp:
    out << (young == ExpYoung::unit ? "orlicz-exp:unit" : "orlicz-exp");
    break;
  case Kind::marcinkiewicz:
    out << "marc:" << parameter;
    break;
  case Kind::lorentz:
    out << "lorentz:" << parameter;
    break;
  }
  return out.str();
}

}  // namespace chaoslab

#include "chaoslab/rearrange.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace chaoslab
{

namespace
{

struct SimpsonState
{
  const std::function<double(double)>& f;
  int max_depth;
  long evaluations = 0;
  double error = 0;
  bool converged = true;

  double eval(double x)
  {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth)
  {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15 * tol) {
      error += std::abs(delta) / 15;
      return left + right + delta / 15;
    }
    if (depth >= max_depth) {
      converged = false;
      error += std::abs(delta) / 15;
      return left + right + delta / 15;
    }
    return recurse(a, m, fa, flm, fm, left, tol / 2, depth + 1) + recurse(m, b, fm, frm, fb, right, tol / 2, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                  int max_depth)
{
  if (!(rel_tol > 0))
    throw std::invalid_argument("adaptive_simpson: rel_tol must be positive");
  if (a == b)
    return {0.0, 0.0, 0};

  SimpsonState state{f, max_depth};

  // composite Simpson estimate sets the absolute scale of the tolerance
  constexpr int panels = 64;
  const double h = (b - a) / panels;
  std::vector<double> fx(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i)
    fx[static_cast<std::size_t>(i)] = state.eval(a + 0.5 * h * i);
  double rough = 0;
  for (int p = 0; p < panels; ++p)
    rough += h / 6 * (fx[2 * p] + 4 * fx[2 * p + 1] + fx[2 * p + 2]);
  const double tol = rel_tol * std::abs(rough) / panels;

  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + h * p;
    const double whole = h / 6 * (fx[2 * p] + 4 * fx[2 * p + 1] + fx[2 * p + 2]);
    total += state.recurse(pa, pa + h, fx[2 * p], fx[2 * p + 1], fx[2 * p + 2], whole, tol, 0);
  }

  if (!state.converged) {
    std::ostringstream msg;
    msg << "adaptive_simpson: no convergence, achieved relative error " << state.error / std::abs(total);
    throw std::runtime_error(msg.str());
  }
  return {total, state.error, state.evaluations};
}

namespace
{

void require_z(double z)
{
  if (!(z >= 1.0) || !std::isfinite(z))
    throw std::invalid_argument("log_distribution_L: z must be >= 1");
}

}  // namespace

double log_distribution_L(double z, double rel_tol)
{
  require_z(z);
  const auto integrand = [z](double u) { return std::exp(-u - z / u); };
  const double e2 = std::exp(2.0);
  double inner = 0;
  if (z > 1) {
    // peak at u = sqrt z
    const double peak = std::sqrt(z);
    inner = adaptive_simpson(integrand, 1.0, peak, rel_tol).value + adaptive_simpson(integrand, peak, z, rel_tol).value;
  }
  return std::exp(1.0 - z) + e2 * inner;
}

double log_distribution_integral_form(double z, double rel_tol)
{
  require_z(z);
  const auto integrand = [z](double u) { return std::exp(-u - z / u); };
  const double upper = z + 60.0;
  const double peak = std::sqrt(z);
  const double body =
      adaptive_simpson(integrand, 1.0, peak, rel_tol).value + adaptive_simpson(integrand, peak, upper, rel_tol).value;
  // ∫_U^∞ e^{-u - z/u} du lies in [e^{-U - z/U}, e^{-U}]
  const double tail = std::exp(-upper - z / upper);
  return std::exp(2.0) * (body + tail);
}

std::pair<double, double> log_distribution_bounds(double z)
{
  require_z(z);
  const double r = std::sqrt(z);
  return {0.5 * std::exp(-2 * r + 2), 2 * std::exp(-r + 2)};
}

}  // namespace chaoslab

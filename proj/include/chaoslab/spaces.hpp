#ifndef CHAOSLAB_SPACES_HPP
#define CHAOSLAB_SPACES_HPP

#include "chaoslab/rearrange.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace chaoslab
{

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// L_p

template <StepFunction F>
typename F::scalar_type lp_norm(const F& x, double q)
{
  using Scalar = typename F::scalar_type;
  if (!(q >= 1))
    throw std::invalid_argument("lp_norm: q must be >= 1");
  const auto abs = x.values().array().abs();
  if (std::isinf(q))
    return abs.maxCoeff();
  const Scalar mean = abs.pow(Scalar(q)).sum() * x.weight();
  return std::pow(mean, Scalar(1) / Scalar(q));
}

template <typename Scalar>
Scalar lp_norm(const Rearrangement<Scalar>& r, double q)
{
  if (!(q >= 1))
    throw std::invalid_argument("lp_norm: q must be >= 1");
  if (std::isinf(q))
    return r.max();
  Scalar mean = 0;
  for (const auto& s : r.steps())
    mean += std::pow(s.value, Scalar(q)) * s.mass;
  return std::pow(mean, Scalar(1) / Scalar(q));
}

// ---------------------------------------------------------------------------
// Exponential Orlicz space

/// Young function of the exponential class.
/// plain: M(t) = e^t - 1.  unit: M(t) = (e^t - 1)/(e - 1), so that M(1) = 1
/// and the fundamental function is 1/ln(1 + (e-1)/t).
enum class ExpYoung
{
  plain,
  unit
};

/// ∫ (e^{u|x|} - 1) dμ. Switches to log-space when u·max|x| > 700 (the result may then be +inf).
template <StepFunction F>
typename F::scalar_type exp_moment(const F& x, double u)
{
  using Scalar = typename F::scalar_type;
  if (!(u > 0))
    throw std::invalid_argument("exp_moment: u must be positive");
  const auto abs = x.values().array().abs();
  const Scalar top = abs.maxCoeff();
  if (u * top <= 700)
    return (Scalar(u) * abs).unaryExpr([](Scalar v) { return std::expm1(v); }).sum() * x.weight();
  const Scalar log_sum = Scalar(u) * top + std::log(((Scalar(u) * (abs - top))).exp().sum() * x.weight());
  return std::exp(log_sum) - Scalar(1);
}

/// Luxemburg norm inf{u > 0 : ∫ M(|x|/u) <= 1} by bracketing and bisection.
/// The zero function has norm 0.
template <typename Scalar>
Scalar orlicz_exp_norm(const Rearrangement<Scalar>& r, double rel_tol = 1e-10, ExpYoung young = ExpYoung::plain)
{
  if (!(rel_tol > 0))
    throw std::invalid_argument("orlicz_exp_norm: rel_tol must be positive");
  if (r.max() == 0)
    return Scalar(0);
  const Scalar scale = young == ExpYoung::plain ? Scalar(1) : Scalar(1) / std::expm1(Scalar(1));
  // decreasing in u
  const auto modular = [&](Scalar u) {
    Scalar acc = 0;
    for (const auto& s : r.steps())
      acc += s.mass * std::expm1(s.value / u);
    return acc * scale;
  };

  constexpr int max_iterations = 200;
  Scalar hi = r.max() / std::log(Scalar(2));
  Scalar lo = hi;
  int guard = 0;
  while (modular(hi) > 1) {
    hi *= 2;
    if (++guard > max_iterations)
      throw std::runtime_error("orlicz_exp_norm: cannot bracket from above");
  }
  while (modular(lo) <= 1) {
    lo /= 2;
    if (++guard > 2 * max_iterations)
      throw std::runtime_error("orlicz_exp_norm: cannot bracket from below");
  }
  for (int it = 0; it < max_iterations; ++it) {
    if (hi - lo <= Scalar(rel_tol) * hi)
      return hi;
    const Scalar mid = 0.5 * (lo + hi);
    (modular(mid) > 1 ? lo : hi) = mid;
  }
  throw std::runtime_error("orlicz_exp_norm: bisection did not reach tolerance");
}

// ---------------------------------------------------------------------------
// Marcinkiewicz and Lorentz spaces

/// φ_ε(t) = t · log2^{1/2 - ε}(2/t).
inline auto phi_eps(double eps)
{
  return [eps](double t) { return t * std::pow(std::log2(2.0 / t), 0.5 - eps); };
}

/// φ(t) = log2^{1-p}(2/t), the Lorentz weight for p in (1,2).
inline auto lorentz_phi(double p)
{
  return [p](double t) { return t <= 0 ? 0.0 : std::pow(std::log2(2.0 / t), 1.0 - p); };
}

template <typename Scalar = double>
struct MarcinkiewiczResult
{
  Scalar value;
  Scalar argmax;
  std::size_t grid_points;
};

/// sup_{0<t<=1} (1/φ(t)) ∫_0^t x*. Evaluated on every breakpoint of x* plus
/// `refine` geometrically spaced points inside each step interval (the first
/// interval (0, t_1] is sampled down to t_1 · 2^{-refine/4}). The returned value
/// is a lower bound for the supremum, exact when the sup sits on the grid.
template <typename Scalar, typename Phi>
MarcinkiewiczResult<Scalar> marcinkiewicz_norm(const Rearrangement<Scalar>& r, Phi&& phi, int refine = 64)
{
  MarcinkiewiczResult<Scalar> best{0, 1, 0};
  const auto visit = [&](Scalar t) {
    ++best.grid_points;
    const Scalar ratio = r.integral(t) / phi(t);
    if (ratio > best.value) {
      best.value = ratio;
      best.argmax = t;
    }
  };
  Scalar prev = 0;
  for (const Scalar t : r.breakpoints()) {
    for (int j = 1; j < refine; ++j) {
      if (prev > 0)
        visit(prev * std::pow(t / prev, Scalar(j) / refine));
      else
        visit(t * std::exp2(-Scalar(j) / 4));
    }
    visit(t);
    prev = t;
  }
  return best;
}

/// sup_u x*(u) · log2^{ε-1/2}(2/u). x* is a decreasing step and the weight is
/// increasing, so the sup is attained at the right endpoints of the steps.
template <typename Scalar>
Scalar quasinorm_phi_eps(const Rearrangement<Scalar>& r, double eps)
{
  if (!(eps > 0 && eps < 0.5))
    throw std::invalid_argument("quasinorm_phi_eps: eps must lie in (0, 1/2)");
  Scalar best = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Scalar u = r.breakpoints()[k];
    best = std::max(best, r.steps()[k].value * std::pow(std::log2(Scalar(2) / u), Scalar(eps - 0.5)));
  }
  return best;
}

/// (∫_0^1 (x*)^p dφ)^{1/p} with φ(t) = log2^{1-p}(2/t), φ(0+) = 0, as an exact Stieltjes sum.
template <typename Scalar>
Scalar lorentz_norm(const Rearrangement<Scalar>& r, double p)
{
  if (!(p > 1 && p < 2))
    throw std::invalid_argument("lorentz_norm: p must lie in (1, 2)");
  const auto phi = lorentz_phi(p);
  Scalar acc = 0;
  Scalar prev_phi = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Scalar cur = phi(r.breakpoints()[k]);
    acc += std::pow(r.steps()[k].value, Scalar(p)) * (cur - prev_phi);
    prev_phi = cur;
  }
  return std::pow(acc, Scalar(1) / Scalar(p));
}

// ---------------------------------------------------------------------------

/// Tagged symmetric-space norm: "lp:3", "lp:inf", "orlicz-exp", "orlicz-exp:unit",
/// "marc:0.25", "lorentz:1.5".
struct SpaceSpec
{
  enum class Kind
  {
    lp,
    orlicz_exp,
    marcinkiewicz,
    lorentz
  };

  Kind kind = Kind::lp;
  double parameter = 2;
  ExpYoung young = ExpYoung::plain;

  static SpaceSpec parse(const std::string& text);
  std::string to_string() const;
};

template <typename Scalar>
Scalar norm(const Rearrangement<Scalar>& r, const SpaceSpec& space)
{
  switch (space.kind) {
  case SpaceSpec::Kind::lp:
    return lp_norm(r, space.parameter);
  case SpaceSpec::Kind::orlicz_exp:
    return orlicz_exp_norm(r, 1e-10, space.young);
  case SpaceSpec::Kind::marcinkiewicz:
    return marcinkiewicz_norm(r, phi_eps(space.parameter)).value;
  case SpaceSpec::Kind::lorentz:
    return lorentz_norm(r, space.parameter);
  }
  throw std::logic_error("norm: unknown space");
}

}  // namespace chaoslab

#endif  // CHAOSLAB_SPACES_HPP

#ifndef CHAOSLAB_REARRANGE_HPP
#define CHAOSLAB_REARRANGE_HPP

#include "chaoslab/dyadic.hpp"

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

namespace chaoslab
{

/// Values closer than this are treated as one value when forming distributions.
inline constexpr double value_snap = 1e-12;

template <typename Scalar = double>
struct Step
{
  Scalar value;
  Scalar mass;
};

/// Decreasing rearrangement x* of |x| on (0, total]: x*(t) = steps[k].value for
/// t in (t_{k-1}, t_k], t_k the cumulative mass. Left-continuous.
/// Values are strictly decreasing and masses positive.
template <typename Scalar = double>
class Rearrangement
{
public:
  Rearrangement() = default;

  /// Canonicalizes arbitrary (value, mass) pairs: takes |value|, sorts
  /// decreasingly, merges values within `snap`, drops empty masses.
  explicit Rearrangement(std::vector<Step<Scalar>> steps, Scalar snap = Scalar(value_snap))
  {
    for (auto& s : steps) {
      if (s.mass < 0)
        throw std::invalid_argument("Rearrangement: negative mass");
      s.value = std::abs(s.value);
    }
    std::sort(steps.begin(), steps.end(), [](const auto& l, const auto& r) { return l.value > r.value; });
    for (const auto& s : steps) {
      if (s.mass == 0)
        continue;
      if (!steps_.empty() && steps_.back().value - s.value <= snap)
        steps_.back().mass += s.mass;
      else
        steps_.push_back(s);
    }
    rebuild();
  }

  const std::vector<Step<Scalar>>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  /// Cumulative masses t_1 < t_2 < ... (right endpoints of the steps).
  const std::vector<Scalar>& breakpoints() const { return cumulative_; }
  Scalar total_mass() const { return cumulative_.empty() ? Scalar(0) : cumulative_.back(); }

  Scalar max() const { return steps_.empty() ? Scalar(0) : steps_.front().value; }

  /// x*(t) for t in (0, total]; 0 beyond the total mass.
  Scalar value_at(Scalar t) const
  {
    if (t <= 0)
      throw std::invalid_argument("Rearrangement::value_at: t must be positive");
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), t);
    if (it == cumulative_.end())
      return Scalar(0);
    return steps_[static_cast<std::size_t>(it - cumulative_.begin())].value;
  }

  /// ∫_0^t x*(u) du.
  Scalar integral(Scalar t) const
  {
    Scalar acc = 0;
    Scalar prev = 0;
    for (std::size_t k = 0; k < steps_.size(); ++k) {
      if (t <= cumulative_[k])
        return acc + steps_[k].value * (t - prev);
      acc += steps_[k].value * steps_[k].mass;
      prev = cumulative_[k];
    }
    return acc;
  }

  /// Multiplies every value by |c|.
  Rearrangement scaled(Scalar c) const
  {
    std::vector<Step<Scalar>> out = steps_;
    for (auto& s : out)
      s.value *= std::abs(c);
    return Rearrangement(std::move(out));
  }

private:
  void rebuild()
  {
    cumulative_.clear();
    Scalar acc = 0;
    for (const auto& s : steps_)
      cumulative_.push_back(acc += s.mass);
  }

  std::vector<Step<Scalar>> steps_;
  std::vector<Scalar> cumulative_;
};

/// n_x(z) = μ{|x| > z}, stored at the distinct values of |x|.
template <typename Scalar = double>
class Distribution
{
public:
  struct Threshold
  {
    Scalar z;
    Scalar measure_above;
  };

  explicit Distribution(const Rearrangement<Scalar>& r) : total_(r.total_mass())
  {
    const auto& steps = r.steps();
    const auto& cum = r.breakpoints();
    for (std::size_t k = 0; k < steps.size(); ++k)
      thresholds_.push_back({steps[k].value, k == 0 ? Scalar(0) : cum[k - 1]});
    std::reverse(thresholds_.begin(), thresholds_.end());
  }

  /// Increasing z; measure_above non-increasing.
  const std::vector<Threshold>& thresholds() const { return thresholds_; }

  Scalar measure_above(Scalar z) const
  {
    const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), z,
                                     [](Scalar v, const Threshold& t) { return v < t.z; });
    if (it == thresholds_.begin())
      return total_;
    return (it - 1)->measure_above;
  }

private:
  std::vector<Threshold> thresholds_;
  Scalar total_ = 0;
};

template <StepFunction F>
Rearrangement<typename F::scalar_type> rearrangement(const F& x)
{
  using Scalar = typename F::scalar_type;
  const auto& values = x.values();
  std::vector<Scalar> v(static_cast<std::size_t>(values.size()));
  Eigen::Map<Vector<Scalar>>(v.data(), values.size()) = values.reshaped().cwiseAbs();
  std::sort(v.begin(), v.end(), std::greater<>());

  // counts are integers, so masses count * 2^-bits are exact
  std::vector<Step<Scalar>> steps;
  std::size_t begin = 0;
  while (begin < v.size()) {
    std::size_t end = begin + 1;
    while (end < v.size() && v[begin] - v[end] <= Scalar(value_snap))
      ++end;
    steps.push_back({v[begin], static_cast<Scalar>(end - begin) * x.weight()});
    begin = end;
  }
  return Rearrangement<Scalar>(std::move(steps));
}

template <StepFunction F>
Distribution<typename F::scalar_type> distribution(const F& x)
{
  return Distribution<typename F::scalar_type>(rearrangement(x));
}

/// Equality of rearrangements: same step count, values within `snap`, masses within `mass_tol`.
template <typename Scalar>
bool same_rearrangement(const Rearrangement<Scalar>& x, const Rearrangement<Scalar>& y, Scalar snap = value_snap,
                        Scalar mass_tol = 1e-14)
{
  if (x.size() != y.size())
    return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (std::abs(x.steps()[k].value - y.steps()[k].value) > snap)
      return false;
    if (std::abs(x.steps()[k].mass - y.steps()[k].mass) > mass_tol)
      return false;
  }
  return true;
}

/// True iff |x| and |y| have the same distribution function.
template <StepFunction F, StepFunction G>
bool equimeasurable(const F& x, const G& y)
{
  return same_rearrangement(rearrangement(x), rearrangement(y));
}

/// L(z) = μ{(s,t) ∈ I×I : ln(e/s) ln(e/t) > z} for z >= 1, computed exactly as
///   e^{1-z} + e^2 ∫_1^z exp(-u - z/u) du
/// (the set s < e^{1-z} contributes its full measure). Adaptive Simpson with
/// relative tolerance rel_tol; throws std::runtime_error if it does not converge.
double log_distribution_L(double z, double rel_tol = 1e-9);

/// e^2 ∫_1^∞ exp(-u - z/u) du: the integral form of L(z) without the
/// correction on s < e^{1-z}. An upper bound for L(z); equal up to O(e^{-z}).
/// Simpson on [1, z + 60] plus the tail term e^{2 - U - z/U}.
double log_distribution_integral_form(double z, double rel_tol = 1e-9);

/// Bracket (1/2) e^{-2√z+2} <= L(z) <= 2 e^{-√z+2}.
std::pair<double, double> log_distribution_bounds(double z);

struct QuadratureResult
{
  double value;
  double error_estimate;
  long evaluations;
};

/// Adaptive Simpson on [a, b] with tolerance rel_tol * |∫|. Throws on non-convergence.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                  int max_depth = 50);

}  // namespace chaoslab

#endif  // CHAOSLAB_REARRANGE_HPP

#ifndef CHAOSLAB_PARALLEL_HPP
#define CHAOSLAB_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <vector>

namespace chaoslab
{

/// Splits [0, count) into `threads` contiguous ranges, runs body(begin, end) on
/// each and folds the partial results left to right with `combine`.
/// Callers only pass order-independent reductions (max, min with index tie-break).
template <typename T, typename Body, typename Combine>
T parallel_reduce(std::uint64_t count, unsigned threads, T identity, Body body, Combine combine)
{
  if (threads <= 1 || count < 2 * std::uint64_t(threads))
    return combine(identity, body(std::uint64_t{0}, count));

  std::vector<T> partial(threads, identity);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t begin = count * w / threads;
      const std::uint64_t end = count * (w + 1) / threads;
      pool.emplace_back([&, w, begin, end] { partial[w] = body(begin, end); });
    }
  }
  T acc = identity;
  for (const auto& p : partial)
    acc = combine(acc, p);
  return acc;
}

/// Runs body(i) for every i in [0, count), split across threads.
template <typename Body>
void parallel_for(std::uint64_t count, unsigned threads, Body body)
{
  parallel_reduce(
      count, threads, 0,
      [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i)
          body(i);
        return 0;
      },
      [](int, int) { return 0; });
}

}  // namespace chaoslab

#endif  // CHAOSLAB_PARALLEL_HPP

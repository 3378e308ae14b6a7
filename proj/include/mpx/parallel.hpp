#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace mpx {

/// Number of worker threads used when the caller passes 0.
inline unsigned default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Runs fn(k) for k in [begin, end) split into contiguous chunks, one per
/// thread. fn must only write state owned by index k.
template <typename Fn>
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = default_threads();
  const std::ptrdiff_t count = end - begin;
  if (count <= 0) return;
  if (threads == 1 || count == 1) {
    for (std::ptrdiff_t k = begin; k < end; ++k) fn(k);
    return;
  }
  const auto workers = static_cast<std::ptrdiff_t>(std::min<std::ptrdiff_t>(threads, count));
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    const std::ptrdiff_t lo = begin + count * w / workers;
    const std::ptrdiff_t hi = begin + count * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (std::ptrdiff_t k = lo; k < hi; ++k) fn(k);
    });
  }
}

}  // namespace mpx

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace sgmorph {

/// Static chunked parallel loop. Work item i always lands in the same chunk,
/// so results written into slot i are deterministic regardless of timing.
template <typename F>
void parallel_for(std::size_t n, F&& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace sgmorph

#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hjreach {

/// Worker count: HJREACH_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline unsigned worker_count()
{
  if (const char * env = std::getenv("HJREACH_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) { return static_cast<unsigned>(n); }
    } catch (...) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Splits [0, n) into contiguous chunks and runs `body(begin, end)` on each.
template<typename Body>
void parallel_for(std::size_t n, Body && body, std::size_t min_chunk = 4096)
{
  const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / min_chunk));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b < e) { pool.emplace_back([&body, b, e] { body(b, e); }); }
  }
  body(std::size_t{0}, std::min(n, chunk));
}

}  // namespace hjreach

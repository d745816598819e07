#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace divcorr {

unsigned worker_count();

// Calls fn(i) for every i in [0, n). Indices are handed out dynamically in
// blocks; fn must only write to storage owned by index i.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t block = 64) {
  const unsigned workers = std::min<std::size_t>(worker_count(), (n + block - 1) / block);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (;;) {
      const std::size_t start = next.fetch_add(block);
      if (start >= n) return;
      const std::size_t stop = std::min(n, start + block);
      for (std::size_t i = start; i < stop; ++i) fn(i);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
}

// Fixed-shape pairwise reduction: the result depends only on the input order,
// never on how the inputs were produced.
template <class T>
T pairwise_sum(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T acc = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

}  // namespace divcorr

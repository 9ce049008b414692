#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "spinekit/stats/rng.hpp"

namespace spinekit {

/// Runs body(rng, index) -> double for index in [0, replicates), each on its
/// own stream make_stream(seed, index), across `workers` threads. Results come
/// back in index order, so the output is identical for any worker count. If
/// bodies throw, the exception of the lowest failing index is rethrown.
template <class Body>
std::vector<double> run_replicates(std::size_t replicates, std::uint64_t seed, unsigned workers,
                                   Body&& body) {
  std::vector<double> out(replicates);
  std::vector<std::exception_ptr> errors(replicates);
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= replicates) {
        return;
      }
      const std::size_t end = std::min(replicates, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          Rng rng = make_stream(seed, i);
          out[i] = body(rng, i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    }
  };
  workers = std::max(1U, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

/// out[i] = body(i) for i in [0, count) across `workers` threads, in index order.
template <class T, class Body>
std::vector<T> parallel_map(std::size_t count, unsigned workers, Body&& body) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        out[i] = body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max(1U, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

}  // namespace spinekit

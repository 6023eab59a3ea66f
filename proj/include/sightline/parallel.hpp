#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace sightline {

inline int effective_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? int(hc) : 1;
}

/// Runs `n_batches` independent jobs over a worker pool and merges the
/// results in batch order. Results must be integer-style aggregates
/// supporting +=, which makes the total identical for any worker count.
template <class Counts, class Fn>
Counts run_batches(std::int64_t n_batches, int threads, Fn&& fn) {
  threads = effective_threads(threads);
  std::vector<Counts> out(size_t(n_batches));
  if (threads <= 1 || n_batches <= 1) {
    for (std::int64_t b = 0; b < n_batches; ++b) out[size_t(b)] = fn(b);
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
      for (;;) {
        std::int64_t b = next.fetch_add(1);
        if (b >= n_batches || failed.load()) break;
        try {
          out[size_t(b)] = fn(b);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          break;
        }
      }
    };
    std::vector<std::thread> pool;
    int nw = int(std::min<std::int64_t>(threads, n_batches));
    pool.reserve(size_t(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
  }
  Counts total{};
  for (auto& c : out) total += c;
  return total;
}

struct BatchRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  std::int64_t size() const { return end - begin; }
};

inline std::int64_t batch_count(std::int64_t n, std::int64_t batch_size) {
  return (n + batch_size - 1) / batch_size;
}

inline BatchRange batch_range(std::int64_t n, std::int64_t batch_size, std::int64_t b) {
  BatchRange r;
  r.begin = b * batch_size;
  r.end = std::min(n, r.begin + batch_size);
  return r;
}

}  // namespace sightline

// parallel.hpp — minimal deterministic work-sharing helpers.
#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace srpt::parallel {

// Worker count resolution: explicit request wins, then the SRPT_WORKERS
// environment variable, then hardware concurrency (at least 1).
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SRPT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs body(i) for i in [begin, end) on contiguous chunks. The partition
// depends only on (end - begin, workers), so results that are written to
// disjoint slots are deterministic. The first exception is rethrown.
inline void parallel_for(int begin, int end, int workers,
                         const std::function<void(int)>& body) {
  const int n = end - begin;
  if (n <= 0) return;
  workers = std::min(resolve_workers(workers), n);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  auto run_chunk = [&](int lo, int hi, std::exception_ptr& slot) {
    try {
      for (int i = lo; i < hi; ++i) body(i);
    } catch (...) {
      slot = std::current_exception();
    }
  };

  std::vector<std::exception_ptr> errors(workers);
  const int base = n / workers, extra = n % workers;
  int lo = begin;
  for (int w = 0; w < workers; ++w) {
    const int hi = lo + base + (w < extra ? 1 : 0);
    if (w + 1 == workers)
      run_chunk(lo, hi, errors[w]);
    else
      pool.emplace_back(run_chunk, lo, hi, std::ref(errors[w]));
    lo = hi;
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Pairwise (cascade) summation: deterministic and O(log n) error growth.
inline double pairwise_sum(const double* v, size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace srpt::parallel

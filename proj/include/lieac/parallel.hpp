#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lieac::par {

// Global switch between the OpenMP kernels and their serial reference
// implementations. Deterministic CLI mode and the reference legs of the
// serial-vs-parallel tests turn it off. All parallel kernels store
// per-index partial results and reduce in a fixed order, so enabling
// parallelism never changes results bitwise.
inline std::atomic<bool>& parallel_flag() {
  static std::atomic<bool> flag{true};
  return flag;
}

inline bool enabled() {
#ifdef _OPENMP
  return parallel_flag().load(std::memory_order_relaxed);
#else
  return false;
#endif
}

inline void set_enabled(bool on) {
  parallel_flag().store(on, std::memory_order_relaxed);
}

struct ScopedSerial {
  bool prev;
  ScopedSerial() : prev(parallel_flag().load()) { set_enabled(false); }
  ~ScopedSerial() { set_enabled(prev); }
};

// Runs body(i) for i in [0, n). Parallel when enabled, serial otherwise.
// body must be safe to run concurrently for distinct i. Exceptions cannot
// cross the worker boundary: the first one is captured and rethrown after
// the loop joins.
template <typename Body>
void parallel_for(int n, Body&& body) {
#ifdef _OPENMP
  if (enabled() && n > 1) {
    std::exception_ptr err;
    std::mutex err_mu;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace lieac::par

#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace plsys {

/// Selects the serial reference path or the OpenMP path of a kernel. Both
/// produce identical results.
enum class Exec { serial, parallel };

/// Threads the parallel path will use; 1 when built without OpenMP.
int max_threads();
/// Pins the OpenMP thread count (0 restores the runtime default).
void set_threads(int n);

/// Runs body(i) for i in [0, n). On the parallel path iterations are
/// dynamically scheduled; the first exception thrown by any iteration is
/// rethrown after the loop. Results must be written to per-index slots.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex lock;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> guard(lock);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace plsys

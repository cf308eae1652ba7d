#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace qhj {

/// Selects between the serial reference loop and the OpenMP kernel. Both
/// paths run the same per-index body, so results are bitwise identical.
enum class Execution { Serial, Parallel };

/// Runs body(i) for i in [0, n). The first exception thrown by any index is
/// rethrown on the calling thread after the loop.
template <class Body>
void for_each_index(Execution exec, std::size_t n, Body&& body) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

int max_threads();

}  // namespace qhj

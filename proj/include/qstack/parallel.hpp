#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace qstack {

// Runs body(i) for i in [0, n). The OpenMP path and the serial path give
// identical results for bodies that only write slot i of their output.
// The first exception by index is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body, bool parallel = true) {
  std::vector<std::exception_ptr> errors(n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int worker_threads();

}  // namespace qstack

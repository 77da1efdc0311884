#include "npsl/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace npsl {

int thread_count() {
  if (const char* env = std::getenv("NPSL_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return omp_get_max_threads();
}

namespace detail {

void parallel_for(std::ptrdiff_t n, void (*body)(void*, std::ptrdiff_t), void* ctx) {
  const int threads = thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) body(ctx, i);
}

}  // namespace detail
}  // namespace npsl

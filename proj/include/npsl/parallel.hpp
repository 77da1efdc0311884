#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace npsl {

enum class Execution { serial, parallel };

/// Thread budget: NPSL_THREADS if set to a positive integer, else the OpenMP default.
int thread_count();

namespace detail {
void parallel_for(std::ptrdiff_t n, void (*body)(void*, std::ptrdiff_t), void* ctx);
}

/// Runs f(i) for i in [0, n). Iterations must write to disjoint outputs.
/// The first exception thrown by any iteration is rethrown after the loop.
template <class F>
void for_each_index(std::size_t n, Execution exec, F&& f) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  struct Ctx {
    F* fn;
    std::exception_ptr error;
    std::mutex lock;
  } ctx{&f, nullptr, {}};
  detail::parallel_for(
      static_cast<std::ptrdiff_t>(n),
      [](void* raw, std::ptrdiff_t i) {
        auto* c = static_cast<Ctx*>(raw);
        try {
          (*c->fn)(static_cast<std::size_t>(i));
        } catch (...) {
          std::lock_guard<std::mutex> g(c->lock);
          if (!c->error) c->error = std::current_exception();
        }
      },
      &ctx);
  if (ctx.error) std::rethrow_exception(ctx.error);
}

}  // namespace npsl

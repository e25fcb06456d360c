#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qexp {

namespace detail {

/// Keeps the first exception thrown inside a parallel region so it can be
/// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) {
    try {
      fn();
    } catch (...) {
#pragma omp critical(qexp_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace detail

/// Runs `body(i, out_i)` for i in [0, n) in parallel and concatenates the
/// per-index outputs in index order, so the result matches a serial loop.
template <class T, class Body>
std::vector<T> parallel_collect(std::size_t n, Body&& body) {
  std::vector<std::vector<T>> parts(n);
  const auto count = static_cast<std::int64_t>(n);
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    slot.run([&] {
      body(static_cast<std::size_t>(i), parts[static_cast<std::size_t>(i)]);
    });
  }
  slot.rethrow();
  std::vector<T> out;
  for (auto& p : parts) {
    out.insert(out.end(), std::make_move_iterator(p.begin()),
               std::make_move_iterator(p.end()));
  }
  return out;
}

/// Smallest i in [0, n) with pred(i), evaluating the predicate in parallel.
template <class Pred>
std::optional<std::uint64_t> parallel_first_index(std::uint64_t n, Pred&& pred) {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  const auto count = static_cast<std::int64_t>(n);
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 64) reduction(min : best)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::uint64_t>(i);
    if (k < best) {
      slot.run([&] {
        if (pred(k)) best = std::min(best, k);
      });
    }
  }
  slot.rethrow();
  if (best == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return best;
}

/// Applies `fn(i)` for i in [0, n) in parallel, storing results by index.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  const auto count = static_cast<std::int64_t>(n);
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    slot.run([&] { out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i)); });
  }
  slot.rethrow();
  return out;
}

inline int worker_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qexp

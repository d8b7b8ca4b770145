#pragma once

// Data-parallel kernels. Every OpenMP kernel has a `_serial` twin with the
// same contract; the serial versions are the reference used by the tests and
// the benchmark. Reductions resolve ties by the lowest index so results do
// not depend on the thread schedule.

#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <utility>
#include <vector>

#include <omp.h>

namespace urt {

struct grid_point {
  std::size_t index{0};
  double x{0.0};
  double value{-std::numeric_limits<double>::infinity()};
};

// n evenly spaced points on [lo, hi], endpoints included (n >= 2).
inline double grid_x(double lo, double hi, std::size_t n, std::size_t i) {
  if (i + 1 == n) {
    return hi;
  }
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

namespace detail {

// Larger value wins; equal values go to the smaller index. NaN never wins.
inline bool better(grid_point const& a, grid_point const& b) {
  if (std::isnan(a.value)) {
    return false;
  }
  if (std::isnan(b.value)) {
    return true;
  }
  return a.value > b.value || (a.value == b.value && a.index < b.index);
}

}  // namespace detail

template <typename Fn>
grid_point grid_argmax_serial(double lo, double hi, std::size_t n, Fn&& fn) {
  grid_point best;
  for (std::size_t i = 0; i < n; ++i) {
    auto const x = grid_x(lo, hi, n, i);
    grid_point const p{i, x, fn(x)};
    if (i == 0 || detail::better(p, best)) {
      best = p;
    }
  }
  return best;
}

template <typename Fn>
grid_point grid_argmax(double lo, double hi, std::size_t n, Fn&& fn) {
  auto const threads = static_cast<std::size_t>(omp_get_max_threads());
  if (threads == 1 || n < 4096) {
    return grid_argmax_serial(lo, hi, n, fn);
  }
  std::vector<grid_point> partial(threads);
  std::vector<char> seen(threads, 0);
#pragma omp parallel num_threads(static_cast<int>(threads))
  {
    auto const t = static_cast<std::size_t>(omp_get_thread_num());
    grid_point local;
    bool any = false;
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      auto const x = grid_x(lo, hi, n, i);
      grid_point const p{i, x, fn(x)};
      if (!any || detail::better(p, local)) {
        local = p;
        any = true;
      }
    }
    partial[t] = local;
    seen[t] = any ? 1 : 0;
  }
  grid_point best;
  bool any = false;
  for (std::size_t t = 0; t < threads; ++t) {
    if (seen[t] && (!any || detail::better(partial[t], best))) {
      best = partial[t];
      any = true;
    }
  }
  return best;
}

// out[i] = fn(i), computed in parallel; output order is by index.
template <typename T, typename Fn>
std::vector<T> parallel_map_serial(std::size_t n, Fn&& fn) {
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(fn(i));
  }
  return out;
}

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> failures(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(i);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  // Same exception the serial loop would have raised first.
  for (auto const& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }
  return out;
}

}  // namespace urt

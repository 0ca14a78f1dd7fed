#pragma once

// Data-parallel kernels. Every kernel has a serial reference path that the
// tests compare against the OpenMP path; results are merged in index order
// so both paths are bit-identical.

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#include <omp.h>

namespace winfree {

enum class Exec { Serial, Parallel };

/// Number of OpenMP workers used by Exec::Parallel. Initialized from the
/// WINFREE_WORKERS environment variable when set.
int worker_count();
void set_worker_count(int workers);

/// out[i] = f(i) for i in [0, count).
template <class T, class F>
std::vector<T> map_indexed(std::size_t count, F&& f, Exec exec = Exec::Parallel) {
  std::vector<T> out(count);
  if (exec == Exec::Serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Samples g on the uniform grid s_i = lo + i*(hi-lo)/count, i in [0, count).
template <class G>
std::vector<double> sample_grid(G&& g, double lo, double hi, std::size_t count,
                                Exec exec = Exec::Parallel) {
  const double h = (hi - lo) / static_cast<double>(count);
  std::vector<double> out(count);
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = g(lo + static_cast<double>(i) * h);
    return out;
  }
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = g(lo + static_cast<double>(i) * h);
  return out;
}

struct GridMax {
  std::size_t index = 0;
  double value = 0.0;
};

/// Largest sample and its first index. Max is exact, so the reduction order
/// does not matter.
GridMax grid_max(const std::vector<double>& values, Exec exec = Exec::Parallel);

}  // namespace winfree

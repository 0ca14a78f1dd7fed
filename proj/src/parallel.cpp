#include "winfree/parallel.hpp"

#include <cstdlib>
#include <string>

namespace winfree {

namespace {

int initial_workers() {
  if (const char* env = std::getenv("WINFREE_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (...) {
    }
  }
  return omp_get_max_threads();
}

int& workers() {
  static int value = initial_workers();
  return value;
}

}  // namespace

int worker_count() { return workers(); }

void set_worker_count(int w) { workers() = w > 0 ? w : omp_get_max_threads(); }

GridMax grid_max(const std::vector<double>& values, Exec exec) {
  GridMax best{0, values.empty() ? 0.0 : values[0]};
  const auto n = static_cast<long long>(values.size());
  if (exec == Exec::Serial) {
    for (long long i = 1; i < n; ++i) {
      if (values[i] > best.value) best = {static_cast<std::size_t>(i), values[i]};
    }
    return best;
  }
  const GridMax seed = best;
#pragma omp parallel num_threads(worker_count())
  {
    GridMax local = seed;
#pragma omp for schedule(static) nowait
    for (long long i = 1; i < n; ++i) {
      if (values[i] > local.value) local = {static_cast<std::size_t>(i), values[i]};
    }
#pragma omp critical
    {
      if (local.value > best.value || (local.value == best.value && local.index < best.index)) best = local;
    }
  }
  return best;
}

}  // namespace winfree

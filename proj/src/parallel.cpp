#include "solitonlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace solitonlab {

int thread_budget() {
  int budget = 1;
#ifdef _OPENMP
  budget = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("SOLITON_LAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) budget = std::min<long>(budget, cap);
  }
  return std::max(budget, 1);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
#ifdef _OPENMP
  int threads = thread_budget();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

void serial_for(int count, const std::function<void(int)>& fn) {
  for (int i = 0; i < count; ++i) fn(i);
}

}  // namespace solitonlab

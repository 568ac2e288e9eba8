#pragma once

#include <functional>

namespace solitonlab {

/// Number of worker threads: min(omp_get_max_threads, SOLITON_LAB_THREADS)
/// when the environment variable is set, at least 1.
int thread_budget();

/// Runs fn(0), ..., fn(count-1) on the OpenMP thread pool.  Exceptions
/// are captured per index and the lowest-index one is rethrown, so the
/// behaviour matches serial_for.
void parallel_for(int count, const std::function<void(int)>& fn);

/// Reference implementation of the same contract, for testing and
/// benchmarking against parallel_for.
void serial_for(int count, const std::function<void(int)>& fn);

}  // namespace solitonlab

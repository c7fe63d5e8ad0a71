#pragma once

#include <cstddef>
#include <functional>

namespace bbem {

/// Worker count used by parallel loops. Initialized from BBEM_THREADS (absent
/// or invalid: hardware concurrency); set_thread_count overrides it.
int thread_count();
void set_thread_count(int n);

/// Calls body(i) for i in [0, n). Each index runs exactly once; iterations
/// must not write shared state, which keeps results independent of the
/// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bbem

#pragma once

#include <cstddef>
#include <functional>

namespace dyndist {

/// Thread budget: DYNDIST_THREADS when set (minimum 1), otherwise the
/// hardware concurrency.
unsigned thread_cap();

/// Runs fn(0..n-1), possibly on several threads. Callers are responsible
/// for writing results by index so the outcome is order-independent; the
/// first exception thrown by any iteration is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dyndist

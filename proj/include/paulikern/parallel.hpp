#pragma once

#include <cstddef>
#include <functional>

namespace paulikern {

/// Worker count used by parallel_for. Defaults to PAULIKERN_THREADS when set,
/// otherwise 1. Results never depend on this value.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Calls body(i) for i in [0, n). Iterations must write to disjoint outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace paulikern

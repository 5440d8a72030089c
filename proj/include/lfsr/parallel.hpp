#pragma once

#include <cstddef>
#include <functional>

namespace lfsr {

// Worker count used by parallel_for. 0 means hardware concurrency. Results of every
// operator in this library are independent of this setting.
void set_thread_count(unsigned count);
unsigned thread_count();

// Runs task(i) for i in [0, n). Tasks must write to disjoint outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace lfsr

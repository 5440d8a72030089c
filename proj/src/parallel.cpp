#include "lfsr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lfsr {

namespace {
std::atomic<unsigned> g_threads{1};
thread_local bool t_in_parallel = false;
}

void set_thread_count(unsigned count) {
  if (count == 0) count = std::max(1u, std::thread::hardware_concurrency());
  g_threads.store(count);
}

unsigned thread_count() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1 || t_in_parallel) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    t_in_parallel = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    t_in_parallel = false;
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace lfsr

#ifndef SPCONF_PARALLEL_HPP
#define SPCONF_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace spconf {

// Worker count: SPCONF_WORKERS if set, otherwise the hardware concurrency
// (capped). Tasks write into their own result slot, so scheduling never
// affects output.
inline int worker_count() {
  if (const char* env = std::getenv("SPCONF_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw > 16 ? 16 : hw);
}

inline void parallel_for(int n_tasks, const std::function<void(int)>& task) {
  const int workers = std::min(worker_count(), n_tasks);
  if (workers <= 1) {
    for (int i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace spconf

#endif

#include "wicknls/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wicknls {

int default_workers() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(int count, int workers, const std::function<void(int, int)>& fn) {
  if (count <= 0) return;
  if (workers <= 0) workers = default_workers();
  if (workers > count) workers = count;

  if (workers == 1) {
    for (int t = 0; t < count; ++t) fn(t, 0);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto body = [&](int worker) {
    for (;;) {
      int t = next.fetch_add(1);
      if (t >= count) return;
      try {
        fn(t, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int wkr = 0; wkr < workers; ++wkr) pool.emplace_back(body, wkr);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wicknls

#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace foghorn {

/// Process-wide worker degree. 0 selects the hardware concurrency.
void set_parallelism(int degree);
int parallelism();

namespace detail {
bool& in_worker();
}

/// Splits [0,n) into one contiguous chunk per worker and runs
/// fn(begin, end) on each. Output must be written to disjoint locations
/// (or be pure gathers) so results are identical for every degree.
/// Nested invocations run inline; the loop structure never depends on
/// the degree, only the thread assignment does.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  if (n <= 0) return;
  const int degree = static_cast<int>(std::min<std::int64_t>(parallelism(), n));
  if (degree <= 1 || detail::in_worker()) {
    fn(std::int64_t{0}, n);
    return;
  }
  const std::int64_t chunk = (n + degree - 1) / degree;
  std::vector<std::thread> workers;
  workers.reserve(degree - 1);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&](std::int64_t begin, std::int64_t end) {
    struct Guard {
      bool& flag;
      bool previous;
      explicit Guard(bool& f) : flag(f), previous(f) { f = true; }
      ~Guard() { flag = previous; }
    } guard(detail::in_worker());
    try {
      fn(begin, end);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  for (int i = 1; i < degree; ++i) {
    const std::int64_t begin = i * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
    if (begin >= end) break;
    workers.emplace_back(run, begin, end);
  }
  run(0, std::min<std::int64_t>(chunk, n));
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace foghorn

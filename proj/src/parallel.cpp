#include "foghorn/parallel.hpp"

#include <atomic>

namespace foghorn {

namespace {
std::atomic<int> g_degree{0};
}

namespace detail {
bool& in_worker() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

void set_parallelism(int degree) { g_degree.store(degree < 0 ? 0 : degree); }

int parallelism() {
  int d = g_degree.load();
  if (d <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    d = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return d;
}

}  // namespace foghorn

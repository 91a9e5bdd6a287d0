#include "hpwe/parallel.hpp"

#include <atomic>

namespace hpwe {
namespace {

unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<unsigned>& workers_slot() {
  static std::atomic<unsigned> workers{default_workers()};
  return workers;
}

}  // namespace

unsigned num_workers() { return workers_slot().load(std::memory_order_relaxed); }

void set_num_workers(unsigned workers) {
  workers_slot().store(workers == 0 ? default_workers() : workers, std::memory_order_relaxed);
}

}  // namespace hpwe

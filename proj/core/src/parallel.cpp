#include "samossa/parallel.hpp"

namespace samossa {

namespace {
std::atomic<unsigned> g_threads{0};
}  // namespace

void set_num_threads(unsigned n) { g_threads = n; }

unsigned num_threads() {
  const unsigned n = g_threads;
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace samossa

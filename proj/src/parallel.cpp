#include "dxg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace dxg {

unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_blocks(std::size_t n, std::size_t block, unsigned workers,
                     const std::function<void(unsigned, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  block = std::max<std::size_t>(block, 1);
  const std::size_t blocks = (n + block - 1) / block;
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, blocks));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(0, b * block, std::min(n, (b + 1) * block));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
          fn(t, b * block, std::min(n, (b + 1) * block));
        }
      } catch (...) {
        errors[t] = std::current_exception();
        next.store(blocks);
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace dxg

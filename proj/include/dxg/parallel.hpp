#pragma once

#include <cstddef>
#include <functional>

namespace dxg {

// Runs fn(worker, begin, end) over [0, n) in contiguous blocks of `block`
// items, handed out dynamically to `workers` threads. Callers write results
// by index, so the outcome does not depend on scheduling.
void parallel_blocks(std::size_t n, std::size_t block, unsigned workers,
                     const std::function<void(unsigned, std::size_t, std::size_t)>& fn);

unsigned default_workers();

}  // namespace dxg

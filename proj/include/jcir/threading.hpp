#pragma once

#include <cstdint>
#include <functional>

namespace jcir {

// Worker-count cap for parallel_chunks; 0 restores the hardware default.
void set_max_threads(int n);
int max_threads();

// Runs fn over a static partition of [0, n) into one contiguous chunk per
// worker.  The partition depends only on n and the worker count, so callers
// that derive per-index random streams and write results by index get
// schedule-independent output.
void parallel_chunks(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace jcir

#pragma once

#include "uos/types.hpp"

#include <functional>

namespace uos {

// Worker-pool width: UOS_THREADS when set (>=1), hardware concurrency
// otherwise.  Re-read on every call so tests can flip the env var.
Index worker_count();

// Runs fn(i) for i in [0, n).  Work items must be independent; results keyed
// by i so the outcome is identical for any thread count.  threads == 0 means
// worker_count().
void parallel_for(Index n, const std::function<void(Index)>& fn,
                  Index threads = 0);

}  // namespace uos

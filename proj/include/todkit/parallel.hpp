#pragma once

#include <cstddef>
#include <functional>

namespace todkit {

// TODKIT_THREADS, else hardware concurrency
unsigned thread_count();

// fn(i) for i in [0, n); results must be written to per-index slots
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace todkit

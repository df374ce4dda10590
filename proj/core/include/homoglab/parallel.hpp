#pragma once

#include <cstddef>
#include <functional>

namespace homoglab {

/// Worker count: HOMOGLAB_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int worker_threads();

/// Splits [0, count) into fixed-size chunks and runs `body(chunk, begin, end)`
/// on up to worker_threads() threads. Chunk boundaries depend only on
/// `count` and `chunk_size`, so callers that merge per-chunk results in chunk
/// order get output independent of the thread count.
void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t count, std::size_t chunk_size) {
  return (count + chunk_size - 1) / chunk_size;
}

}  // namespace homoglab

#pragma once

#include <cstdint>
#include <functional>

namespace kakeya {

/// Worker count used by parallel_for. 0 means hardware_concurrency.
void set_worker_count(unsigned n);
unsigned worker_count();

/// Runs fn(begin, end) over a fixed partition of [0, n) into chunks, one
/// chunk per worker. Chunk boundaries depend only on n and the configured
/// worker count, so reductions that merge per-chunk partials in chunk order
/// are deterministic. With one worker this is a plain function call.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t, unsigned)>& fn);

} // namespace kakeya

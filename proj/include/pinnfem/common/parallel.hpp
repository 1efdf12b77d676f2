#pragma once

#include <cstddef>
#include <functional>

namespace pinnfem {

/// Worker count: PINNFEM_THREADS if set and positive, otherwise hardware parallelism.
[[nodiscard]] unsigned worker_count();

/// Runs body(chunk, begin, end) over [0, n) split into `chunks` fixed ranges.
/// The split depends only on n and chunks, so callers that reduce per-chunk
/// partials in chunk order get bitwise-identical results for any thread count.
void for_chunks(std::size_t n, std::size_t chunks,
                const std::function<void(std::size_t chunk, std::size_t begin, std::size_t end)>& body);

} // namespace pinnfem

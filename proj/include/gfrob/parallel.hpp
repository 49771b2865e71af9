#pragma once

#include <cstddef>
#include <vector>

#ifdef GFROB_HAVE_OPENMP
#include <omp.h>
#endif

namespace gfrob::parallel {

/// Caps the number of OpenMP workers; 0 restores the runtime default.
void set_thread_count(int n);
int thread_count();

/// Fixed block size for per-sample reductions. Results depend on this value,
/// never on the number of workers.
inline constexpr std::size_t kReductionBlock = 256;

inline std::size_t block_count(std::size_t items, std::size_t block) {
    return (items + block - 1) / block;
}

/// Evaluates body(block_index) for every block, possibly concurrently, and
/// returns the partial results in block order. Merging the partials serially
/// in that order makes the reduction independent of the worker count.
template <class Partial, class Body>
std::vector<Partial> map_blocks(std::size_t nblocks, const Partial& init, Body&& body) {
    std::vector<Partial> out(nblocks, init);
    const auto n = static_cast<long long>(nblocks);
#ifdef GFROB_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < n; ++b) {
        out[static_cast<std::size_t>(b)] = body(static_cast<std::size_t>(b));
    }
    return out;
}

}  // namespace gfrob::parallel

#pragma once

#include <cstdint>
#include <vector>

#include <omp.h>

namespace nasolv {

// Thread count honouring the NASOLV_THREADS cap.
int max_threads();

enum class Exec { Serial, Parallel };

// Evaluates body(shard) for shard = 0..n-1 and returns the results in shard order.
// Shard boundaries never depend on the thread count, so reductions over the
// returned vector are bit-identical between Serial and Parallel execution.
template <class T, class F>
std::vector<T> run_shards(int n, Exec exec, F&& body) {
    std::vector<T> out(n);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
        for (int s = 0; s < n; ++s) out[s] = body(s);
    } else {
        for (int s = 0; s < n; ++s) out[s] = body(s);
    }
    return out;
}

template <class F>
double sharded_sum(int n, Exec exec, F&& body) {
    const auto parts = run_shards<double>(n, exec, body);
    double acc = 0.0;
    for (double p : parts) acc += p;
    return acc;
}

// SplitMix64-derived seed for shard s, so shard streams are independent of scheduling.
std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard);

}  // namespace nasolv

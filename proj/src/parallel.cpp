#include "nasolv/parallel.hpp"

#include <cstdlib>
#include <string>

namespace nasolv {

int max_threads() {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("NASOLV_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (const std::exception&) {
        }
    }
    return n < 1 ? 1 : n;
}

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (shard + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace nasolv

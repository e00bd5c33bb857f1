#pragma once

#include <cstdint>

namespace medf {

// splitmix64 finalizer (Steele/Lea/Flood constants). This exact function is
// part of the CLI contract: seeded branch sampling is defined in terms of it,
// so reports stay byte-identical across platforms and runs.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Bit `step` of the sampled branch on coordinate `coord`:
// splitmix64(splitmix64(seed ^ 0x9E3779B97F4A7C15 * (coord+1)) + step) mod 2.
inline int branch_bit(std::uint64_t seed, std::uint64_t coord, std::uint64_t step) {
    std::uint64_t s = splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (coord + 1)));
    return static_cast<int>(splitmix64(s + step) & 1ULL);
}

} // namespace medf

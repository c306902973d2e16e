#pragma once

#include <cstdint>
#include <vector>

namespace flowtop {

// Fixed default seed table: six sketch rows, the queue array, and the
// ground-truth hash. All runs are reproducible unless overridden.
inline constexpr uint32_t default_row_seeds[6] = {
    0x9e3779b9u, 0x85ebca6bu, 0xc2b2ae35u, 0x27d4eb2fu, 0x165667b1u, 0xfd7046c5u,
};
inline constexpr uint32_t default_pqa_seed = 0xb55a4f09u;
inline constexpr uint32_t default_ground_truth_seed = 0x94d049bbu;

inline constexpr uint32_t mix32(uint32_t x) {
    x ^= x >> 16;
    x *= 0x7feb352du;
    x ^= x >> 15;
    x *= 0x846ca68bu;
    x ^= x >> 16;
    return x;
}

// Row seeds beyond the published six are derived deterministically.
inline uint32_t row_seed(size_t i) {
    if (i < 6) return default_row_seeds[i];
    return mix32(default_row_seeds[5] + uint32_t(i) * 0x9e3779b9u);
}

inline std::vector<uint32_t> row_seeds(size_t n) {
    std::vector<uint32_t> s(n);
    for (size_t i = 0; i < n; ++i) s[i] = row_seed(i);
    return s;
}

// Per-row sign seeds for CountSketch, independent of the index seeds.
inline uint32_t sign_seed(size_t i) { return mix32(row_seed(i) ^ 0x5bf03635u); }

inline std::vector<uint32_t> sign_seeds(size_t n) {
    std::vector<uint32_t> s(n);
    for (size_t i = 0; i < n; ++i) s[i] = sign_seed(i);
    return s;
}

} // namespace flowtop

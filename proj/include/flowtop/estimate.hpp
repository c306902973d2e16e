#pragma once

#include <cstdint>

namespace flowtop {

// Estimate returned when every bucket of a flow has overflowed.
inline constexpr uint32_t saturated_sentinel = 0xffffffffu;

struct estimate {
    uint32_t value = 0;
    bool saturated = false; // true iff value == saturated_sentinel

    bool operator==(const estimate&) const = default;

    static estimate of(uint32_t v) { return {v, v == saturated_sentinel}; }
};

} // namespace flowtop

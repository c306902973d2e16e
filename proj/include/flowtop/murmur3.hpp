#pragma once

#include <cstddef>
#include <cstdint>

namespace flowtop {

// MurmurHash3 x86 32-bit (Austin Appleby, public domain). Blocks are read
// byte-wise as little-endian words so the digest is the same on any host.
inline uint32_t murmur3_x86_32(const uint8_t* data, size_t len, uint32_t seed) {
    constexpr uint32_t c1 = 0xcc9e2d51u;
    constexpr uint32_t c2 = 0x1b873593u;
    auto rotl = [](uint32_t x, int r) { return (x << r) | (x >> (32 - r)); };

    uint32_t h1 = seed;
    const size_t nblocks = len / 4;

    for (size_t i = 0; i < nblocks; ++i) {
        const uint8_t* p = data + i * 4;
        uint32_t k1 = uint32_t(p[0]) | uint32_t(p[1]) << 8 |
                      uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
        k1 *= c1;
        k1 = rotl(k1, 15);
        k1 *= c2;
        h1 ^= k1;
        h1 = rotl(h1, 13);
        h1 = h1 * 5 + 0xe6546b64u;
    }

    const uint8_t* tail = data + nblocks * 4;
    uint32_t k1 = 0;
    switch (len & 3) {
    case 3: k1 ^= uint32_t(tail[2]) << 16; [[fallthrough]];
    case 2: k1 ^= uint32_t(tail[1]) << 8; [[fallthrough]];
    case 1:
        k1 ^= uint32_t(tail[0]);
        k1 *= c1;
        k1 = rotl(k1, 15);
        k1 *= c2;
        h1 ^= k1;
    }

    h1 ^= uint32_t(len);
    h1 ^= h1 >> 16;
    h1 *= 0x85ebca6bu;
    h1 ^= h1 >> 13;
    h1 *= 0xc2b2ae35u;
    h1 ^= h1 >> 16;
    return h1;
}

} // namespace flowtop

#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "flowtop/murmur3.hpp"

namespace flowtop {

// IPv4 5-tuple. Canonical wire form is 13 bytes, all fields big-endian,
// in the order src_ip, dst_ip, src_port, dst_port, protocol.
struct flow_id {
    uint32_t src_ip = 0;
    uint32_t dst_ip = 0;
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint8_t protocol = 0;

    bool operator==(const flow_id&) const = default;

    std::array<uint8_t, 13> to_bytes() const {
        return {uint8_t(src_ip >> 24),  uint8_t(src_ip >> 16),
                uint8_t(src_ip >> 8),   uint8_t(src_ip),
                uint8_t(dst_ip >> 24),  uint8_t(dst_ip >> 16),
                uint8_t(dst_ip >> 8),   uint8_t(dst_ip),
                uint8_t(src_port >> 8), uint8_t(src_port),
                uint8_t(dst_port >> 8), uint8_t(dst_port),
                protocol};
    }

    static flow_id from_bytes(const std::array<uint8_t, 13>& b) {
        flow_id f;
        f.src_ip = uint32_t(b[0]) << 24 | uint32_t(b[1]) << 16 | uint32_t(b[2]) << 8 | b[3];
        f.dst_ip = uint32_t(b[4]) << 24 | uint32_t(b[5]) << 16 | uint32_t(b[6]) << 8 | b[7];
        f.src_port = uint16_t(uint16_t(b[8]) << 8 | b[9]);
        f.dst_port = uint16_t(uint16_t(b[10]) << 8 | b[11]);
        f.protocol = b[12];
        return f;
    }
};

inline uint32_t hash32(const flow_id& f, uint32_t seed) {
    const auto bytes = f.to_bytes();
    return murmur3_x86_32(bytes.data(), bytes.size(), seed);
}

// Hash/equality adaptors for unordered containers.
struct flow_id_hash {
    size_t operator()(const flow_id& f) const { return hash32(f, 0x94d049bbu); }
};

inline std::string ipv4_to_string(uint32_t ip) {
    std::string s;
    s.reserve(15);
    for (int shift = 24; shift >= 0; shift -= 8) {
        s += std::to_string((ip >> shift) & 0xff);
        if (shift) s += '.';
    }
    return s;
}

inline std::optional<uint32_t> parse_ipv4(std::string_view text) {
    uint32_t ip = 0;
    for (int octet = 0; octet < 4; ++octet) {
        size_t dot = octet < 3 ? text.find('.') : text.size();
        if (dot == std::string_view::npos || dot == 0) return std::nullopt;
        unsigned value = 0;
        auto piece = text.substr(0, dot);
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
        if (ec != std::errc{} || ptr != piece.data() + piece.size() || value > 255)
            return std::nullopt;
        ip = ip << 8 | value;
        text.remove_prefix(octet < 3 ? dot + 1 : dot);
    }
    return text.empty() ? std::optional<uint32_t>(ip) : std::nullopt;
}

inline std::string to_string(const flow_id& f) {
    return ipv4_to_string(f.src_ip) + ',' + ipv4_to_string(f.dst_ip) + ',' +
           std::to_string(f.src_port) + ',' + std::to_string(f.dst_port) + ',' +
           std::to_string(f.protocol);
}

} // namespace flowtop

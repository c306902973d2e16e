#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "flowtop/flow_id.hpp"

using namespace flowtop;

TEST_CASE("canonical serialization is 13 bytes, big-endian, fixed field order") {
    const flow_id f{0x0a000001u, 0x0a000002u, 80, 443, 6};
    const auto bytes = f.to_bytes();
    const uint8_t expected[13] = {0x0a, 0x00, 0x00, 0x01, 0x0a, 0x00, 0x00,
                                  0x02, 0x00, 0x50, 0x01, 0xbb, 0x06};
    REQUIRE(bytes.size() == 13);
    for (size_t i = 0; i < 13; ++i) CHECK(bytes[i] == expected[i]);
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        flow_id f;
        f.src_ip = uint32_t(rng());
        f.dst_ip = uint32_t(rng());
        f.src_port = uint16_t(rng());
        f.dst_port = uint16_t(rng());
        f.protocol = uint8_t(rng());
        CHECK(flow_id::from_bytes(f.to_bytes()) == f);
    }
}

TEST_CASE("equality needs all five fields equal") {
    const flow_id a{1, 2, 3, 4, 5};
    CHECK(a == flow_id{1, 2, 3, 4, 5});
    CHECK(a != flow_id{9, 2, 3, 4, 5});
    CHECK(a != flow_id{1, 9, 3, 4, 5});
    CHECK(a != flow_id{1, 2, 9, 4, 5});
    CHECK(a != flow_id{1, 2, 3, 9, 5});
    CHECK(a != flow_id{1, 2, 3, 4, 9});
}

TEST_CASE("ipv4 text round-trip") {
    CHECK(ipv4_to_string(0x0a000001u) == "10.0.0.1");
    CHECK(parse_ipv4("10.0.0.1") == 0x0a000001u);
    CHECK(parse_ipv4("255.255.255.255") == 0xffffffffu);
    CHECK(parse_ipv4("0.0.0.0") == 0u);
    CHECK_FALSE(parse_ipv4("10.0.0"));
    CHECK_FALSE(parse_ipv4("10.0.0.256"));
    CHECK_FALSE(parse_ipv4("10.0.0.1.2"));
    CHECK_FALSE(parse_ipv4("a.b.c.d"));
    CHECK_FALSE(parse_ipv4(""));
}

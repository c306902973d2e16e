#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flowtop/estimate.hpp"
#include "flowtop/flow_id.hpp"
#include "flowtop/seeds.hpp"

namespace flowtop {

// (counter width in bits, number of rows with that width)
using tower_layout = std::vector<std::pair<uint8_t, uint32_t>>;

// Six rows: three of 8-bit counters, two of 16-bit, one of 32-bit.
inline tower_layout tower6_layout() { return {{8, 3}, {16, 2}, {32, 1}}; }
// One row per width, the original three-row arrangement.
inline tower_layout tower3_layout() { return {{8, 1}, {16, 1}, {32, 1}}; }

inline constexpr uint64_t tower6_default_bits_per_row = uint64_t(1) << 21;
inline constexpr uint64_t tower3_default_bits_per_row = uint64_t(1) << 22;

// Counting sketch with conservative updates over rows of heterogeneous
// counter widths. Every row spends the same bit budget, so narrow-counter
// rows are wide and absorb the many small flows while the single wide row
// keeps counting the few large ones. A counter stuck at 2^width - 1 is
// overflowed: it reads as +inf and is never written again.
class tower_sketch {
public:
    struct row {
        uint8_t bits;          // counter width: 8, 16 or 32
        uint32_t width;        // counters in the row, power of two
        uint32_t index_mask;   // width - 1
        uint32_t seed;
        std::vector<uint8_t> lanes; // width * bits/8 bytes, little-endian lanes
    };

    tower_sketch(uint64_t bits_per_row, const tower_layout& layout,
                 std::span<const uint32_t> seeds) {
        bits_per_row_ = bits_per_row;
        size_t total_rows = 0;
        for (auto [bits, count] : layout) total_rows += count;
        if (total_rows == 0)
            throw std::invalid_argument("tower_sketch: layout has no rows");
        if (seeds.size() != total_rows)
            throw std::invalid_argument("tower_sketch: need one seed per row, got " +
                                        std::to_string(seeds.size()) + " for " +
                                        std::to_string(total_rows) + " rows");
        rows_.reserve(total_rows);
        size_t seed_idx = 0;
        for (auto [bits, count] : layout) {
            if (bits != 8 && bits != 16 && bits != 32)
                throw std::invalid_argument("tower_sketch: counter width must be 8, 16 or 32");
            const uint64_t width = bits_per_row / bits;
            if (width * bits != bits_per_row || width < 2 || !std::has_single_bit(width) ||
                width > (uint64_t(1) << 31))
                throw std::invalid_argument(
                    "tower_sketch: bits_per_row / width must give a power-of-two row of >= 2 counters");
            for (uint32_t r = 0; r < count; ++r) {
                row rw;
                rw.bits = bits;
                rw.width = uint32_t(width);
                rw.index_mask = uint32_t(width - 1);
                rw.seed = seeds[seed_idx++];
                rw.lanes.assign(size_t(width) * (bits / 8), 0);
                rows_.push_back(std::move(rw));
            }
        }
        scratch_idx_.resize(rows_.size());
        scratch_bucket_.resize(rows_.size());
    }

    static tower_sketch tower6(uint64_t bits_per_row = tower6_default_bits_per_row) {
        return tower_sketch(bits_per_row, tower6_layout(), row_seeds(6));
    }
    static tower_sketch tower3(uint64_t bits_per_row = tower3_default_bits_per_row) {
        return tower_sketch(bits_per_row, tower3_layout(), row_seeds(3));
    }

    // Insert one packet of flow f and return the updated frequency estimate.
    // Two passes over the d buckets: find the minimum among non-overflowed
    // buckets, increment exactly those equal to it, then return the new
    // minimum. If every bucket has overflowed the estimate is the sentinel.
    estimate insert(const flow_id& f) {
        const size_t d = rows_.size();
        uint32_t minval = saturated_sentinel;
        for (size_t i = 0; i < d; ++i) {
            const row& rw = rows_[i];
            scratch_idx_[i] = hash32(f, rw.seed) & rw.index_mask;
            const uint32_t b = read_counter(rw, scratch_idx_[i]);
            scratch_bucket_[i] = b;
            if (b < minval && b != saturation_value(rw.bits)) minval = b;
        }
        uint32_t minval2 = saturated_sentinel;
        for (size_t i = 0; i < d; ++i) {
            row& rw = rows_[i];
            uint32_t b = scratch_bucket_[i];
            if (b == minval && b != saturation_value(rw.bits)) {
                ++b;
                write_counter(rw, scratch_idx_[i], b);
            }
            if (b < minval2 && b != saturation_value(rw.bits)) minval2 = b;
        }
        return estimate::of(minval2);
    }

    // Read-only estimate: the minimum over non-overflowed buckets.
    estimate query(const flow_id& f) const {
        uint32_t minval = saturated_sentinel;
        for (const row& rw : rows_) {
            const uint32_t b = read_counter(rw, hash32(f, rw.seed) & rw.index_mask);
            if (b < minval && b != saturation_value(rw.bits)) minval = b;
        }
        return estimate::of(minval);
    }

    void reset() {
        for (row& rw : rows_) std::fill(rw.lanes.begin(), rw.lanes.end(), 0);
    }

    size_t depth() const { return rows_.size(); }
    uint64_t bits_per_row() const { return bits_per_row_; }
    uint64_t storage_bits() const { return bits_per_row_ * rows_.size(); }
    const row& row_at(size_t i) const { return rows_.at(i); }
    uint32_t row_seed_at(size_t i) const { return rows_.at(i).seed; }

    uint32_t counter(size_t r, uint32_t idx) const {
        const row& rw = rows_.at(r);
        if (idx >= rw.width) throw std::out_of_range("tower_sketch: counter index");
        return read_counter(rw, idx);
    }

    static constexpr uint32_t saturation_value(uint8_t bits) {
        return bits == 32 ? 0xffffffffu : (uint32_t(1) << bits) - 1;
    }

    // Debug snapshot: header with the layout, then raw row lanes.
    void write_snapshot(std::ostream& out) const {
        const char magic[4] = {'T', 'W', 'R', '1'};
        out.write(magic, 4);
        write_u64(out, bits_per_row_);
        write_u64(out, rows_.size());
        for (const row& rw : rows_) {
            out.put(char(rw.bits));
            write_u64(out, rw.width);
            write_u64(out, rw.seed);
        }
        for (const row& rw : rows_)
            out.write(reinterpret_cast<const char*>(rw.lanes.data()),
                      std::streamsize(rw.lanes.size()));
    }

    static tower_sketch read_snapshot(std::istream& in) {
        char magic[4];
        in.read(magic, 4);
        if (!in || std::memcmp(magic, "TWR1", 4) != 0)
            throw std::runtime_error("tower snapshot: bad magic");
        const uint64_t bits_per_row = read_u64(in);
        const uint64_t nrows = read_u64(in);
        tower_layout layout;
        std::vector<uint32_t> seeds;
        for (uint64_t i = 0; i < nrows; ++i) {
            const uint8_t bits = uint8_t(in.get());
            read_u64(in); // width, implied by bits_per_row
            seeds.push_back(uint32_t(read_u64(in)));
            layout.push_back({bits, 1});
        }
        tower_sketch t(bits_per_row, layout, seeds);
        for (row& rw : t.rows_)
            in.read(reinterpret_cast<char*>(rw.lanes.data()), std::streamsize(rw.lanes.size()));
        if (!in) throw std::runtime_error("tower snapshot: truncated");
        return t;
    }

private:
    static uint32_t read_counter(const row& rw, uint32_t idx) {
        const uint8_t* p = rw.lanes.data() + size_t(idx) * (rw.bits / 8);
        switch (rw.bits) {
        case 8: return p[0];
        case 16: return uint32_t(p[0]) | uint32_t(p[1]) << 8;
        default: return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
                        uint32_t(p[3]) << 24;
        }
    }

    static void write_counter(row& rw, uint32_t idx, uint32_t value) {
        uint8_t* p = rw.lanes.data() + size_t(idx) * (rw.bits / 8);
        switch (rw.bits) {
        case 8:
            p[0] = uint8_t(value);
            break;
        case 16:
            p[0] = uint8_t(value);
            p[1] = uint8_t(value >> 8);
            break;
        default:
            p[0] = uint8_t(value);
            p[1] = uint8_t(value >> 8);
            p[2] = uint8_t(value >> 16);
            p[3] = uint8_t(value >> 24);
        }
    }

    static void write_u64(std::ostream& out, uint64_t v) {
        uint8_t b[8];
        for (int i = 0; i < 8; ++i) b[i] = uint8_t(v >> (8 * i));
        out.write(reinterpret_cast<const char*>(b), 8);
    }
    static uint64_t read_u64(std::istream& in) {
        uint8_t b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
        return v;
    }

    uint64_t bits_per_row_ = 0;
    std::vector<row> rows_;
    // insert-only scratch; queries stay read-only so frozen sketches can be
    // queried from several threads
    std::vector<uint32_t> scratch_idx_;
    std::vector<uint32_t> scratch_bucket_;
};

} // namespace flowtop

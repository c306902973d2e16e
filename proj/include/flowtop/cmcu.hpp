#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "flowtop/estimate.hpp"
#include "flowtop/flow_id.hpp"
#include "flowtop/seeds.hpp"

namespace flowtop {

// CountMin with conservative updates: d rows of w 32-bit counters, only the
// minimum counters are incremented. No overflow handling; 32-bit counters do
// not wrap on the stream sizes this is meant for.
class cmcu_sketch {
public:
    cmcu_sketch(uint32_t rows, uint32_t width, std::span<const uint32_t> seeds) {
        if (rows == 0 || width < 2 || !std::has_single_bit(width))
            throw std::invalid_argument("cmcu_sketch: width must be a power of two >= 2");
        if (seeds.size() != rows)
            throw std::invalid_argument("cmcu_sketch: need one seed per row");
        rows_ = rows;
        width_ = width;
        seeds_.assign(seeds.begin(), seeds.end());
        counters_.assign(size_t(rows) * width, 0);
        scratch_idx_.resize(rows);
    }

    static cmcu_sketch paper_config() {
        // 12 rows of 2^15 counters, the memory-parity baseline setup
        return cmcu_sketch(12, uint32_t(1) << 15, row_seeds(12));
    }

    estimate insert(const flow_id& f) {
        uint32_t minval = saturated_sentinel;
        for (uint32_t i = 0; i < rows_; ++i) {
            scratch_idx_[i] = size_t(i) * width_ + (hash32(f, seeds_[i]) & (width_ - 1));
            minval = std::min(minval, counters_[scratch_idx_[i]]);
        }
        for (uint32_t i = 0; i < rows_; ++i)
            if (counters_[scratch_idx_[i]] == minval) ++counters_[scratch_idx_[i]];
        return estimate::of(minval + 1);
    }

    estimate query(const flow_id& f) const {
        uint32_t minval = saturated_sentinel;
        for (uint32_t i = 0; i < rows_; ++i) {
            const uint32_t c = counters_[size_t(i) * width_ + (hash32(f, seeds_[i]) & (width_ - 1))];
            minval = std::min(minval, c);
        }
        return estimate::of(minval);
    }

    void reset() { std::fill(counters_.begin(), counters_.end(), 0); }

    uint32_t depth() const { return rows_; }
    uint32_t width() const { return width_; }
    uint64_t storage_bits() const { return uint64_t(rows_) * width_ * 32; }

private:
    uint32_t rows_ = 0;
    uint32_t width_ = 0;
    std::vector<uint32_t> seeds_;
    std::vector<uint32_t> counters_;
    std::vector<size_t> scratch_idx_;
};

} // namespace flowtop

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

// CountSketch: d rows of w signed counters. Each row adds the flow's sign to
// one counter; the estimate is the median across rows of sign * counter,
// clamped below at zero.
class count_sketch {
public:
    count_sketch(uint32_t rows, uint32_t width, std::span<const uint32_t> index_seeds,
                 std::span<const uint32_t> sign_seed_values) {
        if (rows == 0 || width < 2 || !std::has_single_bit(width))
            throw std::invalid_argument("count_sketch: width must be a power of two >= 2");
        if (index_seeds.size() != rows || sign_seed_values.size() != rows)
            throw std::invalid_argument("count_sketch: need an index and a sign seed per row");
        rows_ = rows;
        width_ = width;
        index_seeds_.assign(index_seeds.begin(), index_seeds.end());
        sign_seeds_.assign(sign_seed_values.begin(), sign_seed_values.end());
        counters_.assign(size_t(rows) * width, 0);
        scratch_.resize(rows);
    }

    static count_sketch paper_config() {
        return count_sketch(12, uint32_t(1) << 15, row_seeds(12), sign_seeds(12));
    }

    estimate insert(const flow_id& f) {
        for (uint32_t i = 0; i < rows_; ++i) {
            const int64_t sign = row_sign(f, i);
            int32_t& c = counters_[size_t(i) * width_ + row_index(f, i)];
            c = int32_t(c + sign);
            scratch_[i] = sign * c;
        }
        return estimate::of(clamp_to_u32(median(scratch_)));
    }

    estimate query(const flow_id& f) const {
        std::vector<int64_t> values(rows_);
        for (uint32_t i = 0; i < rows_; ++i) {
            const int32_t c = counters_[size_t(i) * width_ + row_index(f, i)];
            values[i] = row_sign(f, i) * int64_t(c);
        }
        return estimate::of(clamp_to_u32(median(values)));
    }

    // Median of a copy; even counts take the mean of the two middle values
    // rounded toward zero.
    static int64_t median(std::vector<int64_t> v) {
        const size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + mid, v.end());
        if (v.size() % 2 == 1) return v[mid];
        const int64_t hi = v[mid];
        const int64_t lo = *std::max_element(v.begin(), v.begin() + mid);
        return (lo + hi) / 2;
    }

    void reset() { std::fill(counters_.begin(), counters_.end(), 0); }

    uint32_t depth() const { return rows_; }
    uint32_t width() const { return width_; }
    uint64_t storage_bits() const { return uint64_t(rows_) * width_ * 32; }

private:
    uint32_t row_index(const flow_id& f, uint32_t i) const {
        return hash32(f, index_seeds_[i]) & (width_ - 1);
    }
    int64_t row_sign(const flow_id& f, uint32_t i) const {
        return (hash32(f, sign_seeds_[i]) >> 31) ? -1 : 1;
    }
    static uint32_t clamp_to_u32(int64_t v) {
        if (v < 0) return 0;
        if (v > int64_t(0xfffffffe)) return 0xfffffffeu;
        return uint32_t(v);
    }

    uint32_t rows_ = 0;
    uint32_t width_ = 0;
    std::vector<uint32_t> index_seeds_;
    std::vector<uint32_t> sign_seeds_;
    std::vector<int32_t> counters_;
    std::vector<int64_t> scratch_;
};

} // namespace flowtop

#pragma once

// Test-only reference implementations over plain arrays. These replay the
// algorithms line by line with none of the production structures (no bit
// packing, no slot grids) so the real implementations can be checked
// against them bit for bit.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flowtop/flow_id.hpp"

namespace oracles {

using flowtop::flow_id;
using flowtop::hash32;

// Conservative-update tower over plain integer rows.
struct naive_tower {
    struct row {
        uint32_t bits;
        uint64_t width;
        uint32_t seed;
        std::vector<uint64_t> counters;
    };
    std::vector<row> rows;

    naive_tower(uint64_t bits_per_row, const std::vector<std::pair<uint32_t, uint32_t>>& layout,
                const std::vector<uint32_t>& seeds) {
        size_t s = 0;
        for (auto [bits, count] : layout)
            for (uint32_t i = 0; i < count; ++i)
                rows.push_back({bits, bits_per_row / bits, seeds[s++], {}});
        for (row& r : rows) r.counters.assign(r.width, 0);
    }

    static uint64_t sat(const row& r) { return (uint64_t(1) << r.bits) - 1; }

    uint32_t insert(const flow_id& f) {
        const size_t d = rows.size();
        std::vector<uint64_t> idx(d), bucket(d);
        uint64_t minval = 0xffffffffull;
        for (size_t i = 0; i < d; ++i) {
            idx[i] = hash32(f, rows[i].seed) & (rows[i].width - 1);
            bucket[i] = rows[i].counters[idx[i]];
            if (bucket[i] < minval && bucket[i] != sat(rows[i])) minval = bucket[i];
        }
        uint64_t minval2 = 0xffffffffull;
        for (size_t i = 0; i < d; ++i) {
            if (bucket[i] == minval && bucket[i] != sat(rows[i])) {
                bucket[i] += 1;
                rows[i].counters[idx[i]] = bucket[i];
            }
            if (bucket[i] < minval2 && bucket[i] != sat(rows[i])) minval2 = bucket[i];
        }
        return uint32_t(minval2);
    }

    uint32_t query(const flow_id& f) const {
        uint64_t minval = 0xffffffffull;
        for (const row& r : rows) {
            const uint64_t b = r.counters[hash32(f, r.seed) & (r.width - 1)];
            if (b < minval && b != sat(r)) minval = b;
        }
        return uint32_t(minval);
    }
};

// Queue-array insertion replayed with overwrite-last + stable sort.
struct naive_pqa {
    uint32_t queues, slots, seed, index_bits;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> grid; // (tag, count)

    naive_pqa(uint32_t r, uint32_t s, uint32_t seed_) : queues(r), slots(s), seed(seed_) {
        index_bits = 0;
        while ((1u << index_bits) < r) ++index_bits;
        grid.resize(r);
    }

    void insert(const flow_id& f, uint32_t est) { insert_hashed(hash32(f, seed), est); }

    void insert_hashed(uint32_t h, uint32_t est) {
        auto& q = grid[h & (queues - 1)];
        const uint32_t tag = h >> index_bits;
        for (auto& [t, c] : q) {
            if (t == tag) {
                if (c < est) c = est;
                stable_sort(q);
                return;
            }
        }
        if (q.size() < slots) {
            q.push_back({tag, est});
        } else if (est > q.back().second) {
            q.back() = {tag, est};
        }
        stable_sort(q);
    }

    static void stable_sort(std::vector<std::pair<uint32_t, uint32_t>>& q) {
        std::stable_sort(q.begin(), q.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
    }

    // (hash, count) of everything held, sorted count desc then hash asc.
    std::vector<std::pair<uint32_t, uint32_t>> contents() const {
        std::vector<std::pair<uint32_t, uint32_t>> out;
        for (uint32_t qi = 0; qi < queues; ++qi)
            for (const auto& [tag, count] : grid[qi])
                out.push_back({tag << index_bits | qi, count});
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        return out;
    }
};

// Per-flow running maximum, for checking top-K trackers.
struct max_per_hash {
    std::unordered_map<uint32_t, uint32_t> best;

    void insert(uint32_t hash, uint32_t est) {
        auto [it, fresh] = best.emplace(hash, est);
        if (!fresh && it->second < est) it->second = est;
    }

    std::vector<std::pair<uint32_t, uint32_t>> top(size_t k) const {
        std::vector<std::pair<uint32_t, uint32_t>> all(best.begin(), best.end());
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        if (all.size() > k) all.resize(k);
        return all;
    }
};

// Plain conservative-update CountMin.
struct naive_cmcu {
    uint32_t rows, width;
    std::vector<uint32_t> seeds;
    std::vector<std::vector<uint64_t>> counters;

    naive_cmcu(uint32_t d, uint32_t w, std::vector<uint32_t> s)
        : rows(d), width(w), seeds(std::move(s)), counters(d, std::vector<uint64_t>(w, 0)) {}

    uint32_t insert(const flow_id& f) {
        std::vector<uint64_t> idx(rows);
        uint64_t minval = ~0ull;
        for (uint32_t i = 0; i < rows; ++i) {
            idx[i] = hash32(f, seeds[i]) & (width - 1);
            minval = std::min(minval, counters[i][idx[i]]);
        }
        for (uint32_t i = 0; i < rows; ++i)
            if (counters[i][idx[i]] == minval) counters[i][idx[i]] += 1;
        return uint32_t(minval + 1);
    }

    uint32_t query(const flow_id& f) const {
        uint64_t minval = ~0ull;
        for (uint32_t i = 0; i < rows; ++i)
            minval = std::min(minval, counters[i][hash32(f, seeds[i]) & (width - 1)]);
        return uint32_t(minval);
    }
};

// Plain CountSketch with the same seed scheme as the implementation.
struct naive_count_sketch {
    uint32_t rows, width;
    std::vector<uint32_t> index_seeds, sign_seeds;
    std::vector<std::vector<int64_t>> counters;

    naive_count_sketch(uint32_t d, uint32_t w, std::vector<uint32_t> idx_seeds,
                       std::vector<uint32_t> sgn_seeds)
        : rows(d), width(w), index_seeds(std::move(idx_seeds)), sign_seeds(std::move(sgn_seeds)),
          counters(d, std::vector<int64_t>(w, 0)) {}

    int64_t sign(const flow_id& f, uint32_t i) const {
        return (hash32(f, sign_seeds[i]) >> 31) ? -1 : 1;
    }

    uint32_t insert(const flow_id& f) {
        std::vector<int64_t> vals(rows);
        for (uint32_t i = 0; i < rows; ++i) {
            auto& c = counters[i][hash32(f, index_seeds[i]) & (width - 1)];
            c += sign(f, i);
            vals[i] = sign(f, i) * c;
        }
        return clamp(median(vals));
    }

    static int64_t median(std::vector<int64_t> v) {
        std::sort(v.begin(), v.end());
        const size_t n = v.size();
        if (n % 2 == 1) return v[n / 2];
        return (v[n / 2 - 1] + v[n / 2]) / 2; // toward zero
    }
    static uint32_t clamp(int64_t v) {
        if (v < 0) return 0;
        if (v > 0xfffffffell) return 0xfffffffeu;
        return uint32_t(v);
    }
};

} // namespace oracles

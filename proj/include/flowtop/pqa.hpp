#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "flowtop/estimate.hpp"
#include "flowtop/flow_id.hpp"

namespace flowtop {

struct top_k_entry {
    uint32_t hash = 0;  // 32-bit flow hash under the queue seed
    uint32_t count = 0; // estimated frequency

    bool operator==(const top_k_entry&) const = default;
};

// Sorted by count non-increasing; ties broken by smaller hash.
struct top_k_report {
    std::vector<top_k_entry> entries;
};

inline void sort_report(std::vector<top_k_entry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const top_k_entry& a, const top_k_entry& b) {
        return a.count != b.count ? a.count > b.count : a.hash < b.hash;
    });
}

// Array of R sorted mini-queues of S slots each, hash-indexed. Insertion
// touches a single queue so its cost is O(S) no matter how large R or the
// stream gets. The low log2(R) hash bits pick the queue, the remaining bits
// are the tag stored alongside the count.
class priority_queue_array {
public:
    struct slot {
        uint32_t tag = 0;
        uint32_t count = 0;
        bool occupied = false;
    };

    priority_queue_array(uint32_t queues, uint32_t slots, uint32_t seed) {
        if (queues == 0 || !std::has_single_bit(queues))
            throw std::invalid_argument("priority_queue_array: queue count must be a power of two");
        if (slots == 0)
            throw std::invalid_argument("priority_queue_array: need at least one slot per queue");
        queues_ = queues;
        slots_ = slots;
        seed_ = seed;
        index_bits_ = uint32_t(std::countr_zero(queues));
        grid_.assign(size_t(queues) * slots, slot{});
    }

    // S=6 with R=K/4: each queue carries two slots of headroom against
    // hash collisions among the top-K flows.
    static priority_queue_array pqa6_for(uint32_t k, uint32_t seed) {
        return for_target(k, 6, seed);
    }
    // S=4 with R=K/4: capacity exactly K, no headroom.
    static priority_queue_array pqa4_for(uint32_t k, uint32_t seed) {
        return for_target(k, 4, seed);
    }

    void insert(const flow_id& f, estimate est) { insert_hashed(hash32(f, seed_), est.value); }

    // Entry point for reusing an externally computed hash (e.g. the first
    // sketch row's) instead of hashing again with the dedicated seed.
    void insert_hashed(uint32_t hash, uint32_t count) {
        const uint32_t q = hash & (queues_ - 1);
        const uint32_t tag = hash >> index_bits_;
        slot* queue = &grid_[size_t(q) * slots_];

        // Tag already present: only ever raise its count, then restore order.
        for (uint32_t i = 0; i < slots_ && queue[i].occupied; ++i) {
            if (queue[i].tag == tag) {
                if (queue[i].count < count) {
                    queue[i].count = count;
                    bubble_up(queue, i);
                }
                return;
            }
        }
        // Not present: claim the last slot if the new count beats the lowest
        // (an empty slot counts as -inf), evicting whoever held it.
        slot& last = queue[slots_ - 1];
        if (!last.occupied || count > last.count) {
            last = {tag, count, true};
            bubble_up(queue, slots_ - 1);
        }
    }

    // Gather every occupied slot, rebuild the full 32-bit hash from
    // (tag, queue index), and keep the k largest.
    top_k_report extract_top_k(uint32_t k) const {
        top_k_report report;
        report.entries.reserve(std::min<size_t>(k, grid_.size()));
        for (uint32_t q = 0; q < queues_; ++q) {
            const slot* queue = &grid_[size_t(q) * slots_];
            for (uint32_t i = 0; i < slots_ && queue[i].occupied; ++i)
                report.entries.push_back({queue[i].tag << index_bits_ | q, queue[i].count});
        }
        sort_report(report.entries);
        if (report.entries.size() > k) report.entries.resize(k);
        return report;
    }

    // Readout that also clears the array for the next observation window.
    top_k_report drain_top_k(uint32_t k) {
        top_k_report report = extract_top_k(k);
        reset();
        return report;
    }

    void reset() { std::fill(grid_.begin(), grid_.end(), slot{}); }

    uint32_t queues() const { return queues_; }
    uint32_t slots() const { return slots_; }
    uint64_t capacity() const { return uint64_t(queues_) * slots_; }
    uint32_t seed() const { return seed_; }
    uint32_t index_bits() const { return index_bits_; }

    const slot& slot_at(uint32_t queue, uint32_t pos) const {
        return grid_.at(size_t(queue) * slots_ + pos);
    }

private:
    static priority_queue_array for_target(uint32_t k, uint32_t slots, uint32_t seed) {
        if (k < 4 || k % 4 != 0 || !std::has_single_bit(k / 4))
            throw std::invalid_argument(
                "priority_queue_array: preset needs k = 4 * power-of-two queues");
        return priority_queue_array(k / 4, slots, seed);
    }

    // Move the (possibly updated) entry at pos forward past empty slots and
    // strictly smaller counts. Equal counts keep longer-resident entries
    // first, which matches overwriting the last slot and stable-sorting.
    static void bubble_up(slot* queue, uint32_t pos) {
        while (pos > 0 &&
               (!queue[pos - 1].occupied || queue[pos - 1].count < queue[pos].count)) {
            std::swap(queue[pos - 1], queue[pos]);
            --pos;
        }
    }

    uint32_t queues_ = 0;
    uint32_t slots_ = 0;
    uint32_t seed_ = 0;
    uint32_t index_bits_ = 0;
    std::vector<slot> grid_;
};

} // namespace flowtop

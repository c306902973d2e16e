#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "flowtop/estimate.hpp"
#include "flowtop/flow_id.hpp"
#include "flowtop/pqa.hpp"

namespace flowtop {

// Exact top-K tracker keyed by the full 32-bit flow hash. Holds the K
// distinct flows with the highest estimates seen so far; re-inserting a
// tracked flow with a larger estimate updates it in place. Evaluation
// baseline only, not meant for the per-packet fast path.
class perfect_priority_queue {
public:
    perfect_priority_queue(uint32_t k, uint32_t seed) : capacity_(k), seed_(seed) {
        if (k == 0) throw std::invalid_argument("perfect_priority_queue: k must be positive");
    }

    void insert(const flow_id& f, estimate est) { insert_hashed(hash32(f, seed_), est.value); }

    void insert_hashed(uint32_t hash, uint32_t count) {
        if (auto it = by_hash_.find(hash); it != by_hash_.end()) {
            if (count > it->second) {
                ordered_.erase({it->second, hash});
                ordered_.insert({count, hash});
                it->second = count;
            }
            return;
        }
        if (by_hash_.size() < capacity_) {
            by_hash_.emplace(hash, count);
            ordered_.insert({count, hash});
            return;
        }
        const auto lowest = *ordered_.begin(); // (count, hash), smallest first
        if (count > lowest.first) {
            ordered_.erase(ordered_.begin());
            by_hash_.erase(lowest.second);
            by_hash_.emplace(hash, count);
            ordered_.insert({count, hash});
        }
    }

    top_k_report extract_top_k(uint32_t k) const {
        top_k_report report;
        report.entries.reserve(by_hash_.size());
        for (auto [hash, count] : by_hash_) report.entries.push_back({hash, count});
        sort_report(report.entries);
        if (report.entries.size() > k) report.entries.resize(k);
        return report;
    }

    top_k_report extract_top_k() const { return extract_top_k(capacity_); }

    void reset() {
        by_hash_.clear();
        ordered_.clear();
    }

    size_t size() const { return by_hash_.size(); }
    uint32_t capacity() const { return capacity_; }
    uint32_t seed() const { return seed_; }
    bool contains(uint32_t hash) const { return by_hash_.contains(hash); }
    uint32_t count_of(uint32_t hash) const { return by_hash_.at(hash); }

private:
    uint32_t capacity_;
    uint32_t seed_;
    std::unordered_map<uint32_t, uint32_t> by_hash_;
    std::set<std::pair<uint32_t, uint32_t>> ordered_; // (count, hash) ascending
};

} // namespace flowtop

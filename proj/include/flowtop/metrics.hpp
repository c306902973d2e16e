#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "flowtop/flow_id.hpp"
#include "flowtop/pqa.hpp"
#include "flowtop/seeds.hpp"

namespace flowtop {

struct exact_counts {
    std::unordered_map<flow_id, uint64_t, flow_id_hash> by_flow;
    uint64_t total_packets = 0;

    size_t cardinality() const { return by_flow.size(); }

    void add(const flow_id& f) {
        ++by_flow[f];
        ++total_packets;
    }
};

template <typename Source>
    requires requires(Source s) { s.next(); }
exact_counts exact_count(Source&& source) {
    exact_counts counts;
    while (auto f = source.next()) counts.add(*f);
    return counts;
}

inline exact_counts exact_count(const std::vector<flow_id>& stream) {
    exact_counts counts;
    for (const flow_id& f : stream) counts.add(f);
    return counts;
}

// True top-K membership and counts. Membership is tie-inclusive: every flow
// whose count equals the K-th largest is a member, so the set can exceed K.
// sorted_counts keeps exactly min(K, cardinality) entries for the ARE
// comparison.
struct ground_truth_top_k {
    std::unordered_set<uint32_t> member_hashes;
    std::vector<uint64_t> sorted_counts;
};

inline ground_truth_top_k build_ground_truth(const exact_counts& counts, uint32_t k,
                                             uint32_t hash_seed) {
    std::vector<std::pair<uint64_t, const flow_id*>> flows;
    flows.reserve(counts.by_flow.size());
    for (const auto& [f, c] : counts.by_flow) flows.push_back({c, &f});
    std::sort(flows.begin(), flows.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    ground_truth_top_k truth;
    const size_t boundary = std::min<size_t>(k, flows.size());
    truth.sorted_counts.reserve(boundary);
    for (size_t i = 0; i < boundary; ++i) truth.sorted_counts.push_back(flows[i].first);

    const uint64_t kth_count = boundary ? flows[boundary - 1].first : 0;
    for (const auto& [c, f] : flows) {
        if (c < kth_count) break;
        truth.member_hashes.insert(hash32(*f, hash_seed));
    }
    return truth;
}

// Mean of |est_i - true_i| / true_i over the sorted lists, compared
// positionally for the full length of the truth; a shorter estimate list is
// padded with zeros.
inline double compute_are(const std::vector<uint64_t>& est_sorted,
                          const std::vector<uint64_t>& truth_sorted) {
    if (truth_sorted.empty()) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < truth_sorted.size(); ++i) {
        if (truth_sorted[i] == 0)
            throw std::invalid_argument("compute_are: ground-truth count of zero");
        const double est = i < est_sorted.size() ? double(est_sorted[i]) : 0.0;
        const double t = double(truth_sorted[i]);
        sum += (est > t ? est - t : t - est) / t;
    }
    return sum / double(truth_sorted.size());
}

struct precision_result {
    uint64_t tp = 0;
    uint64_t fp = 0;
    double precision = 0.0; // tp / (tp + fp); 0 for an empty report
};

inline precision_result compute_precision(const top_k_report& report,
                                          const ground_truth_top_k& truth) {
    precision_result r;
    for (const top_k_entry& e : report.entries)
        truth.member_hashes.contains(e.hash) ? ++r.tp : ++r.fp;
    if (r.tp + r.fp > 0) r.precision = double(r.tp) / double(r.tp + r.fp);
    return r;
}

struct eval_result {
    uint32_t k = 0;
    double are_mean = 0.0;
    double precision = 0.0;
    uint64_t tp = 0;
    uint64_t fp = 0;
    // reported estimates that hit the all-rows-overflowed sentinel and were
    // replaced by the widest counter ceiling before the ARE computation
    uint64_t saturated_replaced = 0;
};

// Whole-trace evaluation of one report against exact counts. The truth is
// hashed with the same seed the queue used, so membership comparison is by
// the 32-bit hash exactly as the queue stores flows.
inline eval_result evaluate_report(const top_k_report& report, const exact_counts& counts,
                                   uint32_t k, uint32_t queue_seed) {
    const ground_truth_top_k truth = build_ground_truth(counts, k, queue_seed);

    std::vector<uint64_t> est_sorted;
    est_sorted.reserve(report.entries.size());
    eval_result result;
    result.k = k;
    for (const top_k_entry& e : report.entries) {
        if (e.count == saturated_sentinel) {
            est_sorted.push_back(saturated_sentinel - 1);
            ++result.saturated_replaced;
        } else {
            est_sorted.push_back(e.count);
        }
    }
    // report entries are already non-increasing; keep this robust to callers
    // passing hand-built reports
    std::sort(est_sorted.rbegin(), est_sorted.rend());

    result.are_mean = compute_are(est_sorted, truth.sorted_counts);
    const precision_result p = compute_precision(report, truth);
    result.tp = p.tp;
    result.fp = p.fp;
    result.precision = p.precision;
    return result;
}

// Identity-matched alternative to the positional ARE: each reported hash is
// compared against the true count of the flow with that hash. Collisions
// (two flows, one hash) keep the larger count.
inline double compute_are_by_identity(const top_k_report& report, const exact_counts& counts,
                                      uint32_t queue_seed) {
    std::unordered_map<uint32_t, uint64_t> true_by_hash;
    true_by_hash.reserve(counts.by_flow.size());
    for (const auto& [f, c] : counts.by_flow) {
        uint64_t& slot = true_by_hash[hash32(f, queue_seed)];
        slot = std::max(slot, c);
    }
    double sum = 0.0;
    size_t n = 0;
    for (const top_k_entry& e : report.entries) {
        auto it = true_by_hash.find(e.hash);
        if (it == true_by_hash.end() || it->second == 0) continue;
        const double est = e.count == saturated_sentinel ? double(saturated_sentinel - 1)
                                                         : double(e.count);
        const double t = double(it->second);
        sum += (est > t ? est - t : t - est) / t;
        ++n;
    }
    return n ? sum / double(n) : 0.0;
}

} // namespace flowtop

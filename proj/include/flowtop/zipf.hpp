#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "flowtop/flow_id.hpp"

namespace flowtop {

struct zipf_spec {
    uint64_t n_flows = 0;
    uint64_t n_packets = 0;
    double alpha = 1.0; // rank-frequency exponent, > 0
    uint64_t rng_seed = 0;
};

// Draws n_packets flows i.i.d. from a Zipf(alpha) rank-frequency law over
// n_flows distinct synthetic 5-tuples. The stream is a pure function of the
// spec: the engine is mt19937_64 and the uniform draw and CDF search are
// spelled out here rather than left to library distributions, whose output
// is implementation-defined.
class zipf_generator {
public:
    explicit zipf_generator(const zipf_spec& spec) : spec_(spec), rng_(spec.rng_seed) {
        if (spec.n_flows == 0) throw std::invalid_argument("zipf_generator: n_flows must be > 0");
        if (!(spec.alpha > 0.0)) throw std::invalid_argument("zipf_generator: alpha must be > 0");
        cdf_.resize(spec.n_flows);
        double acc = 0.0;
        for (uint64_t i = 0; i < spec.n_flows; ++i) {
            acc += std::pow(double(i + 1), -spec.alpha);
            cdf_[i] = acc;
        }
        for (double& c : cdf_) c /= acc;
        cdf_.back() = 1.0;
        emissions_.assign(spec.n_flows, 0);
    }

    // Flow identity for a zero-based rank; rank 0 is the most frequent.
    // Injective: ranks differ in (src_ip, src_port).
    static flow_id flow_at(uint64_t rank) {
        flow_id f;
        f.src_ip = 0x0a000000u + uint32_t(rank >> 16);
        f.dst_ip = 0xc0a80001u;
        f.src_port = uint16_t(rank);
        f.dst_port = 443;
        f.protocol = 6;
        return f;
    }

    std::optional<flow_id> next() {
        if (emitted_ == spec_.n_packets) return std::nullopt;
        ++emitted_;
        const uint64_t rank = draw_rank();
        ++emissions_[rank];
        return flow_at(rank);
    }

    std::vector<flow_id> remaining() {
        std::vector<flow_id> out;
        out.reserve(size_t(spec_.n_packets - emitted_));
        while (auto f = next()) out.push_back(*f);
        return out;
    }

    // Exact per-rank counts of everything emitted so far.
    const std::vector<uint64_t>& emissions() const { return emissions_; }
    uint64_t emitted() const { return emitted_; }
    const zipf_spec& spec() const { return spec_; }

private:
    uint64_t draw_rank() {
        // 53-bit uniform in [0, 1)
        const double u = double(rng_() >> 11) * 0x1.0p-53;
        // first index with cdf > u
        size_t lo = 0, hi = cdf_.size() - 1;
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (cdf_[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

    zipf_spec spec_;
    std::mt19937_64 rng_;
    std::vector<double> cdf_;
    std::vector<uint64_t> emissions_;
    uint64_t emitted_ = 0;
};

} // namespace flowtop

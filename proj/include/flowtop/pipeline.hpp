#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flowtop/cmcu.hpp"
#include "flowtop/count_sketch.hpp"
#include "flowtop/flow_id.hpp"
#include "flowtop/pqa.hpp"
#include "flowtop/ppq.hpp"
#include "flowtop/seeds.hpp"
#include "flowtop/tower_sketch.hpp"

namespace flowtop {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class sketch_kind { tower6, tower3, cmcu, cs };
enum class queue_kind { pqa, ppq };

inline const char* to_string(sketch_kind k) {
    switch (k) {
    case sketch_kind::tower6: return "tower6";
    case sketch_kind::tower3: return "tower3";
    case sketch_kind::cmcu: return "cmcu";
    default: return "cs";
    }
}
inline const char* to_string(queue_kind k) { return k == queue_kind::pqa ? "pqa" : "ppq"; }

inline sketch_kind sketch_kind_from(const std::string& s) {
    if (s == "tower6") return sketch_kind::tower6;
    if (s == "tower3") return sketch_kind::tower3;
    if (s == "cmcu") return sketch_kind::cmcu;
    if (s == "cs") return sketch_kind::cs;
    throw config_error("unknown sketch kind: " + s);
}
inline queue_kind queue_kind_from(const std::string& s) {
    if (s == "pqa") return queue_kind::pqa;
    if (s == "ppq") return queue_kind::ppq;
    throw config_error("unknown queue kind: " + s);
}

struct run_config {
    sketch_kind sketch = sketch_kind::tower6;
    uint64_t tower_bits_per_row = tower6_default_bits_per_row;
    uint32_t baseline_rows = 12;               // cmcu / cs
    uint32_t baseline_width = uint32_t(1) << 15;

    queue_kind queue = queue_kind::pqa;
    uint32_t k = 1024;
    uint32_t pqa_slots = 6;
    uint32_t pqa_queues = 0; // 0 derives K/4, the evaluated arrangement

    std::vector<uint32_t> row_seed_override; // empty keeps the default table
    uint32_t pqa_seed = default_pqa_seed;
    bool reuse_row0_hash = false; // queue keyed by sketch row 0 hash instead

    uint64_t window = 0; // packets per observation window, 0 = whole input

    size_t sketch_rows() const {
        switch (sketch) {
        case sketch_kind::tower6: return 6;
        case sketch_kind::tower3: return 3;
        default: return baseline_rows;
        }
    }

    std::vector<uint32_t> resolved_row_seeds() const {
        if (row_seed_override.empty()) return row_seeds(sketch_rows());
        if (row_seed_override.size() != sketch_rows())
            throw config_error("row seed override needs " + std::to_string(sketch_rows()) +
                               " values");
        return row_seed_override;
    }

    uint32_t resolved_pqa_queues() const { return pqa_queues ? pqa_queues : k / 4; }

    // Hash seed the queue keys flows with; ground truth must use the same.
    uint32_t queue_hash_seed() const {
        return reuse_row0_hash ? resolved_row_seeds().front() : pqa_seed;
    }

    uint64_t queue_capacity() const {
        return queue == queue_kind::ppq ? k : uint64_t(resolved_pqa_queues()) * pqa_slots;
    }

    void validate() const {
        if (k == 0) throw config_error("k must be positive");
        if (queue == queue_kind::pqa) {
            const uint32_t r = resolved_pqa_queues();
            if (r == 0 || !std::has_single_bit(r))
                throw config_error("queue count must be a power of two (k/4 when derived)");
            if (pqa_slots == 0) throw config_error("queue slots must be positive");
            if (k > uint64_t(r) * pqa_slots)
                throw config_error("k exceeds queue array capacity " +
                                   std::to_string(uint64_t(r) * pqa_slots));
        }
        resolved_row_seeds();
        try {
            switch (sketch) {
            case sketch_kind::tower6:
                tower_sketch(tower_bits_per_row, tower6_layout(), resolved_row_seeds());
                break;
            case sketch_kind::tower3:
                tower_sketch(tower_bits_per_row, tower3_layout(), resolved_row_seeds());
                break;
            default:
                if (baseline_rows == 0 || baseline_width < 2 ||
                    !std::has_single_bit(baseline_width))
                    throw config_error("baseline width must be a power of two >= 2");
            }
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
    }
};

// Named configurations behind the tables: the six-row tower with the
// slotted queue array, the three-row tower, both baseline sketches behind a
// perfect queue, and the four-slot queue ablation.
inline void apply_preset(run_config& cfg, const std::string& name) {
    if (name == "paper-tower6-pqa6") {
        cfg.sketch = sketch_kind::tower6;
        cfg.tower_bits_per_row = tower6_default_bits_per_row;
        cfg.queue = queue_kind::pqa;
        cfg.pqa_slots = 6;
        cfg.pqa_queues = 0;
    } else if (name == "paper-pqa4") {
        cfg.sketch = sketch_kind::tower6;
        cfg.tower_bits_per_row = tower6_default_bits_per_row;
        cfg.queue = queue_kind::pqa;
        cfg.pqa_slots = 4;
        cfg.pqa_queues = 0;
    } else if (name == "paper-tower3") {
        cfg.sketch = sketch_kind::tower3;
        cfg.tower_bits_per_row = tower3_default_bits_per_row;
        cfg.queue = queue_kind::ppq;
    } else if (name == "paper-cmcu") {
        cfg.sketch = sketch_kind::cmcu;
        cfg.baseline_rows = 12;
        cfg.baseline_width = uint32_t(1) << 15;
        cfg.queue = queue_kind::ppq;
    } else if (name == "paper-cs") {
        cfg.sketch = sketch_kind::cs;
        cfg.baseline_rows = 12;
        cfg.baseline_width = uint32_t(1) << 15;
        cfg.queue = queue_kind::ppq;
    } else {
        throw config_error("unknown preset: " + name);
    }
}

inline nlohmann::json config_to_json(const run_config& cfg) {
    nlohmann::json seeds = nlohmann::json::array();
    for (uint32_t s : cfg.resolved_row_seeds()) seeds.push_back(s);
    nlohmann::json j{{"sketch", to_string(cfg.sketch)},
                     {"queue", to_string(cfg.queue)},
                     {"k", cfg.k},
                     {"row_seeds", std::move(seeds)},
                     {"pqa_seed", cfg.pqa_seed},
                     {"queue_hash_seed", cfg.queue_hash_seed()},
                     {"reuse_row0_hash", cfg.reuse_row0_hash},
                     {"window", cfg.window}};
    if (cfg.sketch == sketch_kind::tower6 || cfg.sketch == sketch_kind::tower3)
        j["tower_bits_per_row"] = cfg.tower_bits_per_row;
    else {
        j["rows"] = cfg.baseline_rows;
        j["width"] = cfg.baseline_width;
    }
    if (cfg.queue == queue_kind::pqa) {
        j["pqa_queues"] = cfg.resolved_pqa_queues();
        j["pqa_slots"] = cfg.pqa_slots;
    }
    return j;
}

// One observation window: a sketch feeding a top-K queue.
class engine {
public:
    explicit engine(const run_config& cfg)
        : reuse_row0_(cfg.reuse_row0_hash), row0_seed_(cfg.resolved_row_seeds().front()),
          sketch_(make_sketch(cfg)), queue_(make_queue(cfg)) {}

    void process(const flow_id& f) {
        const estimate est =
            std::visit([&](auto& sketch) { return sketch.insert(f); }, sketch_);
        if (reuse_row0_) {
            const uint32_t h = hash32(f, row0_seed_);
            std::visit([&](auto& q) { q.insert_hashed(h, est.value); }, queue_);
        } else {
            std::visit([&](auto& q) { q.insert(f, est); }, queue_);
        }
        ++packets_;
    }

    top_k_report report(uint32_t k) const {
        return std::visit([&](const auto& q) { return q.extract_top_k(k); }, queue_);
    }

    void reset() {
        std::visit([](auto& s) { s.reset(); }, sketch_);
        std::visit([](auto& q) { q.reset(); }, queue_);
        packets_ = 0;
    }

    uint64_t packets() const { return packets_; }

    estimate query(const flow_id& f) const {
        return std::visit([&](const auto& s) { return s.query(f); }, sketch_);
    }

private:
    using sketch_variant = std::variant<tower_sketch, cmcu_sketch, count_sketch>;
    using queue_variant = std::variant<priority_queue_array, perfect_priority_queue>;

    static sketch_variant make_sketch(const run_config& cfg) {
        const auto seeds = cfg.resolved_row_seeds();
        switch (cfg.sketch) {
        case sketch_kind::tower6:
            return tower_sketch(cfg.tower_bits_per_row, tower6_layout(), seeds);
        case sketch_kind::tower3:
            return tower_sketch(cfg.tower_bits_per_row, tower3_layout(), seeds);
        case sketch_kind::cmcu:
            return cmcu_sketch(cfg.baseline_rows, cfg.baseline_width, seeds);
        default:
            return count_sketch(cfg.baseline_rows, cfg.baseline_width, seeds,
                                sign_seeds(cfg.baseline_rows));
        }
    }

    static queue_variant make_queue(const run_config& cfg) {
        if (cfg.queue == queue_kind::ppq)
            return perfect_priority_queue(cfg.k, cfg.pqa_seed);
        return priority_queue_array(cfg.resolved_pqa_queues(), cfg.pqa_slots, cfg.pqa_seed);
    }

    bool reuse_row0_;
    uint32_t row0_seed_;
    sketch_variant sketch_;
    queue_variant queue_;
    uint64_t packets_ = 0;
};

struct window_result {
    uint64_t index = 0;
    uint64_t packets = 0;
    top_k_report report;
};

// Single pass over the source; emits one report per window (one for the
// whole stream when cfg.window is 0).
template <typename Source, typename WindowSink>
uint64_t process_stream(const run_config& cfg, Source&& source, WindowSink&& sink) {
    engine eng(cfg);
    uint64_t total = 0;
    uint64_t window_index = 0;
    while (auto f = source.next()) {
        eng.process(*f);
        ++total;
        if (cfg.window && eng.packets() == cfg.window) {
            sink(window_result{window_index++, eng.packets(), eng.report(cfg.k)});
            eng.reset();
        }
    }
    if (eng.packets() > 0 || window_index == 0)
        sink(window_result{window_index, eng.packets(), eng.report(cfg.k)});
    return total;
}

// Whole-stream convenience used by tests and the evaluation paths.
inline top_k_report run_on_stream(const run_config& cfg, const std::vector<flow_id>& stream) {
    engine eng(cfg);
    for (const flow_id& f : stream) eng.process(f);
    return eng.report(cfg.k);
}

struct bench_result {
    uint64_t packets = 0;
    std::vector<double> seconds_per_rep;
    double mean_packets_per_sec = 0.0;
};

// Insert-path throughput over a preloaded stream, I/O excluded.
inline bench_result run_bench(const run_config& cfg, const std::vector<flow_id>& stream,
                              int reps = 3) {
    bench_result result;
    result.packets = stream.size();
    if (stream.empty()) return result;
    double pps_sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        engine eng(cfg);
        const auto start = std::chrono::steady_clock::now();
        for (const flow_id& f : stream) eng.process(f);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        result.seconds_per_rep.push_back(dt.count());
        pps_sum += double(stream.size()) / dt.count();
    }
    result.mean_packets_per_sec = pps_sum / double(reps);
    return result;
}

} // namespace flowtop

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowtop/metrics.hpp"
#include "flowtop/pqa.hpp"

namespace flowtop {

inline std::string hash_hex(uint32_t h) {
    static const char digits[] = "0123456789abcdef";
    std::string s(8, '0');
    for (int i = 7; i >= 0; --i, h >>= 4) s[size_t(i)] = digits[h & 0xf];
    return s;
}

inline nlohmann::json report_to_json(const top_k_report& report, const nlohmann::json& config) {
    nlohmann::json entries = nlohmann::json::array();
    for (const top_k_entry& e : report.entries)
        entries.push_back({{"hash", hash_hex(e.hash)}, {"count", e.count}});
    return {{"schema", 1}, {"config", config}, {"report", std::move(entries)}};
}

inline void write_report_json(std::ostream& out, const top_k_report& report,
                              const nlohmann::json& config) {
    out << report_to_json(report, config).dump(2) << '\n';
}

inline void write_report_csv(std::ostream& out, const top_k_report& report,
                             const nlohmann::json& config) {
    out << "# config: " << config.dump() << '\n';
    out << "hash,count\n";
    for (const top_k_entry& e : report.entries)
        out << hash_hex(e.hash) << ',' << e.count << '\n';
}

// Parses the "report" array back; used by eval to consume run output.
struct parsed_report {
    top_k_report report;
    nlohmann::json config;
};

inline parsed_report read_report_json(std::istream& in, const std::string& name = "<report>") {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(name + ": bad report JSON: " + e.what());
    }
    if (!j.contains("schema") || j["schema"] != 1)
        throw std::runtime_error(name + ": unsupported report schema");
    parsed_report out;
    out.config = j.value("config", nlohmann::json::object());
    try {
        for (const auto& e : j.at("report")) {
            top_k_entry entry;
            const std::string hex = e.at("hash").get<std::string>();
            size_t used = 0;
            entry.hash = uint32_t(std::stoul(hex, &used, 16));
            if (used != hex.size()) throw std::runtime_error("bad hash field");
            entry.count = e.at("count").get<uint32_t>();
            out.report.entries.push_back(entry);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(name + ": bad report entry: " + e.what());
    } catch (const std::logic_error& e) {
        throw std::runtime_error(name + ": bad report entry: " + e.what());
    }
    return out;
}

inline nlohmann::json eval_to_json(const eval_result& r, const nlohmann::json& config) {
    return {{"schema", 1},
            {"config", config},
            {"k", r.k},
            {"are_mean", r.are_mean},
            {"precision", r.precision},
            {"tp", r.tp},
            {"fp", r.fp},
            {"saturated_replaced", r.saturated_replaced}};
}

struct eval_aggregate {
    uint32_t k = 0;
    size_t traces = 0;
    double are_mean = 0.0, are_std = 0.0;
    double precision_mean = 0.0, precision_std = 0.0;
};

inline eval_aggregate aggregate_evals(const std::vector<eval_result>& results) {
    eval_aggregate agg;
    agg.traces = results.size();
    if (results.empty()) return agg;
    agg.k = results.front().k;
    double are_sum = 0, p_sum = 0;
    for (const eval_result& r : results) {
        are_sum += r.are_mean;
        p_sum += r.precision;
    }
    agg.are_mean = are_sum / double(results.size());
    agg.precision_mean = p_sum / double(results.size());
    if (results.size() > 1) {
        double are_sq = 0, p_sq = 0;
        for (const eval_result& r : results) {
            are_sq += (r.are_mean - agg.are_mean) * (r.are_mean - agg.are_mean);
            p_sq += (r.precision - agg.precision_mean) * (r.precision - agg.precision_mean);
        }
        agg.are_std = std::sqrt(are_sq / double(results.size() - 1));
        agg.precision_std = std::sqrt(p_sq / double(results.size() - 1));
    }
    return agg;
}

// Plain-text summary table, one row per configuration label.
inline std::string format_eval_table(const std::vector<std::pair<std::string, eval_aggregate>>& rows) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %8s %12s %12s %12s %12s\n", "config", "k",
                  "ARE mean(%)", "ARE std(%)", "prec mean", "prec std");
    out += line;
    for (const auto& [label, agg] : rows) {
        std::snprintf(line, sizeof line, "%-24s %8u %12.4f %12.4f %12.4f %12.4f\n", label.c_str(),
                      agg.k, agg.are_mean * 100.0, agg.are_std * 100.0, agg.precision_mean,
                      agg.precision_std);
        out += line;
    }
    return out;
}

} // namespace flowtop

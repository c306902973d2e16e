// flowtop: top-K flow detection over packet streams.
//
// Subcommands: run (stream -> top-K report), eval (report vs exact ground
// truth), gen (synthetic skewed corpus), bench (insert-path throughput).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowtop/metrics.hpp"
#include "flowtop/pipeline.hpp"
#include "flowtop/report_io.hpp"
#include "flowtop/trace_io.hpp"
#include "flowtop/zipf.hpp"

namespace {

using namespace flowtop;

constexpr int exit_config = 2;
constexpr int exit_input = 3;
constexpr int exit_internal = 4;

struct cli_options {
    std::string preset;
    std::string sketch = "tower6";
    std::string queue = "pqa";
    uint64_t tower_bits = tower6_default_bits_per_row;
    uint32_t rows = 12;
    uint32_t width = uint32_t(1) << 15;
    uint32_t k = 1024;
    uint32_t pqa_slots = 6;
    uint32_t pqa_queues = 0;
    uint32_t pqa_seed = default_pqa_seed;
    std::vector<uint32_t> row_seeds;
    bool reuse_row0 = false;
    uint64_t window = 0;

    std::string input;
    std::string pcap;
    bool keep_other_protocols = false;
    uint64_t zipf_flows = 0;
    uint64_t zipf_packets = 0;
    double zipf_alpha = 1.1;
    uint64_t zipf_seed = 1;
};

void add_config_options(CLI::App* cmd, cli_options& opt) {
    cmd->add_option("--preset", opt.preset,
                    "Named configuration: paper-tower6-pqa6, paper-pqa4, paper-tower3, "
                    "paper-cmcu, paper-cs");
    cmd->add_option("--sketch", opt.sketch, "Sketch kind: tower6, tower3, cmcu, cs");
    cmd->add_option("--queue", opt.queue, "Queue kind: pqa, ppq");
    cmd->add_option("--tower-bits", opt.tower_bits, "Tower bit budget per row");
    cmd->add_option("--rows", opt.rows, "Baseline sketch rows (cmcu/cs)");
    cmd->add_option("--width", opt.width, "Baseline counters per row (cmcu/cs)");
    cmd->add_option("--k", opt.k, "Number of top flows to report");
    cmd->add_option("--pqa-slots", opt.pqa_slots, "Slots per queue (S)");
    cmd->add_option("--pqa-queues", opt.pqa_queues, "Queue count (R); 0 derives k/4");
    cmd->add_option("--pqa-seed", opt.pqa_seed, "Hash seed for the queue");
    cmd->add_option("--row-seeds", opt.row_seeds, "Per-row sketch seeds")->delimiter(',');
    cmd->add_flag("--reuse-row0-hash", opt.reuse_row0,
                  "Key the queue by the first sketch row's hash");
    cmd->add_option("--window", opt.window, "Packets per observation window (0 = whole input)");
}

void add_input_options(CLI::App* cmd, cli_options& opt) {
    cmd->add_option("--input", opt.input, "Flowlog file");
    cmd->add_option("--pcap", opt.pcap, "Classic pcap file (Ethernet)");
    cmd->add_flag("--keep-other-protocols", opt.keep_other_protocols,
                  "Keep non-TCP/UDP IPv4 packets with ports 0");
    cmd->add_option("--zipf-flows", opt.zipf_flows, "Generate input: distinct flows");
    cmd->add_option("--zipf-packets", opt.zipf_packets, "Generate input: packets");
    cmd->add_option("--zipf-alpha", opt.zipf_alpha, "Generate input: Zipf exponent");
    cmd->add_option("--zipf-seed", opt.zipf_seed, "Generate input: RNG seed");
}

// Preset first, then everything the user set on the command line or in the
// config file on top of it.
run_config resolve_config(const CLI::App* cmd, const cli_options& opt) {
    run_config cfg;
    if (!opt.preset.empty()) apply_preset(cfg, opt.preset);

    auto given = [&](const char* name) { return cmd->get_option(name)->count() > 0; };
    if (given("--sketch")) cfg.sketch = sketch_kind_from(opt.sketch);
    if (given("--queue")) cfg.queue = queue_kind_from(opt.queue);
    if (given("--tower-bits")) cfg.tower_bits_per_row = opt.tower_bits;
    if (given("--rows")) cfg.baseline_rows = opt.rows;
    if (given("--width")) cfg.baseline_width = opt.width;
    if (given("--pqa-slots")) cfg.pqa_slots = opt.pqa_slots;
    if (given("--pqa-queues")) cfg.pqa_queues = opt.pqa_queues;
    if (given("--pqa-seed")) cfg.pqa_seed = opt.pqa_seed;
    if (given("--row-seeds")) cfg.row_seed_override = opt.row_seeds;
    if (given("--reuse-row0-hash")) cfg.reuse_row0_hash = opt.reuse_row0;
    if (given("--window")) cfg.window = opt.window;
    cfg.k = opt.k;
    cfg.validate();
    return cfg;
}

std::vector<flow_id> load_stream(const cli_options& opt, uint64_t* skipped = nullptr) {
    const int sources = int(!opt.input.empty()) + int(!opt.pcap.empty()) + int(opt.zipf_flows > 0);
    if (sources != 1)
        throw config_error("exactly one input source required (--input, --pcap or --zipf-flows)");
    std::vector<flow_id> stream;
    if (!opt.input.empty()) {
        stream = read_flowlog(opt.input);
    } else if (!opt.pcap.empty()) {
        pcap_reader reader(opt.pcap, opt.keep_other_protocols);
        while (auto f = reader.next()) stream.push_back(*f);
        if (skipped) *skipped = reader.skipped();
    } else {
        zipf_generator gen({opt.zipf_flows, opt.zipf_packets, opt.zipf_alpha, opt.zipf_seed});
        stream = gen.remaining();
    }
    return stream;
}

std::string windowed_path(const std::string& path, uint64_t index) {
    const size_t dot = path.rfind('.');
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, ".w%04llu", (unsigned long long)index);
    if (dot == std::string::npos || dot == 0) return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw trace_error("cannot open output file: " + path);
    return out;
}

int cmd_run(const CLI::App* cmd, const cli_options& opt, const std::string& out_json,
            const std::string& out_csv, bool with_oracle) {
    const run_config cfg = resolve_config(cmd, opt);
    const nlohmann::json cfg_json = config_to_json(cfg);

    uint64_t skipped = 0;
    const std::vector<flow_id> stream = load_stream(opt, &skipped);

    std::optional<exact_counts> oracle;
    if (with_oracle) oracle = exact_count(stream);

    const auto start = std::chrono::steady_clock::now();
    vector_source source(stream);
    counting_source counted(source);
    uint64_t windows = 0;
    const uint64_t total = process_stream(cfg, counted, [&](const window_result& w) {
        const bool multi = cfg.window != 0;
        if (!out_json.empty()) {
            auto out = open_out(multi ? windowed_path(out_json, w.index) : out_json);
            write_report_json(out, w.report, cfg_json);
        }
        if (!out_csv.empty()) {
            auto out = open_out(multi ? windowed_path(out_csv, w.index) : out_csv);
            write_report_csv(out, w.report, cfg_json);
        }
        if (out_json.empty() && out_csv.empty()) write_report_csv(std::cout, w.report, cfg_json);
        ++windows;
    });
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;

    if (counted.count() != stream.size())
        throw std::logic_error("stream consumed more than once");

    std::cerr << "packets: " << total << '\n';
    if (skipped) std::cerr << "skipped: " << skipped << '\n';
    if (oracle) std::cerr << "flows: " << oracle->cardinality() << '\n';
    if (windows > 1) std::cerr << "windows: " << windows << '\n';
    std::cerr << "elapsed_sec: " << dt.count() << '\n';
    std::cerr << "packets_per_sec: " << (dt.count() > 0 ? double(total) / dt.count() : 0.0)
              << '\n';
    return 0;
}

std::vector<std::string> corpus_files(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".flowlog")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw trace_error("no .flowlog files in " + dir);
    return files;
}

int cmd_eval(const CLI::App* cmd, const cli_options& opt, const std::string& report_path,
             const std::string& out_json, bool identity_are) {
    const run_config cfg = resolve_config(cmd, opt);
    const nlohmann::json cfg_json = config_to_json(cfg);

    const bool dir_mode =
        !opt.input.empty() && std::filesystem::is_directory(std::filesystem::path(opt.input));
    if (dir_mode && !report_path.empty())
        throw config_error("--report cannot be combined with a corpus directory");

    std::vector<eval_result> results;
    nlohmann::json traces = nlohmann::json::array();

    auto eval_one = [&](const std::vector<flow_id>& stream, const top_k_report& report,
                        const std::string& label) {
        const exact_counts counts = exact_count(stream);
        if (counts.cardinality() < cfg.k)
            std::cerr << "warning: k=" << cfg.k << " exceeds trace cardinality "
                      << counts.cardinality() << " (" << label << ")\n";
        eval_result r = evaluate_report(report, counts, cfg.k, cfg.queue_hash_seed());
        nlohmann::json j = eval_to_json(r, cfg_json);
        j["trace"] = label;
        if (identity_are)
            j["are_identity"] = compute_are_by_identity(report, counts, cfg.queue_hash_seed());
        traces.push_back(j);
        results.push_back(r);
    };

    if (dir_mode) {
        for (const std::string& file : corpus_files(opt.input)) {
            const std::vector<flow_id> stream = read_flowlog(file);
            eval_one(stream, run_on_stream(cfg, stream), file);
        }
    } else {
        uint64_t skipped = 0;
        const std::vector<flow_id> stream = load_stream(opt, &skipped);
        top_k_report report;
        if (!report_path.empty()) {
            std::ifstream in(report_path);
            if (!in) throw trace_error("cannot open report: " + report_path);
            parsed_report parsed;
            try {
                parsed = read_report_json(in, report_path);
            } catch (const std::runtime_error& e) {
                throw trace_error(e.what());
            }
            if (parsed.config.contains("queue_hash_seed") &&
                parsed.config["queue_hash_seed"].get<uint32_t>() != cfg.queue_hash_seed())
                throw config_error(
                    "seed mismatch: report was produced with queue hash seed " +
                    std::to_string(parsed.config["queue_hash_seed"].get<uint32_t>()) +
                    " but evaluation would hash ground truth with " +
                    std::to_string(cfg.queue_hash_seed()));
            report = std::move(parsed.report);
        } else {
            report = run_on_stream(cfg, stream);
        }
        eval_one(stream, report, opt.input.empty() ? (opt.pcap.empty() ? "zipf" : opt.pcap)
                                                   : opt.input);
    }

    const eval_aggregate agg = aggregate_evals(results);
    nlohmann::json summary{{"schema", 1},
                           {"config", cfg_json},
                           {"traces", traces},
                           {"k", agg.k},
                           {"are_mean", agg.are_mean},
                           {"are_std", agg.are_std},
                           {"precision_mean", agg.precision_mean},
                           {"precision_std", agg.precision_std},
                           {"n_traces", agg.traces}};
    if (!out_json.empty()) {
        auto out = open_out(out_json);
        out << summary.dump(2) << '\n';
    } else {
        std::cout << summary.dump(2) << '\n';
    }
    std::cout << format_eval_table({{std::string(to_string(cfg.sketch)) + "+" +
                                         to_string(cfg.queue),
                                     agg}});
    return 0;
}

int cmd_gen(uint64_t flows, uint64_t packets, double alpha, uint64_t seed,
            const std::string& out_path, const std::string& truth_path) {
    zipf_generator gen({flows, packets, alpha, seed});
    flowlog_writer writer(out_path);
    writer.comment("zipf corpus: flows=" + std::to_string(flows) +
                   " packets=" + std::to_string(packets) + " alpha=" + std::to_string(alpha) +
                   " seed=" + std::to_string(seed));
    const uint64_t written = writer.write_all(gen);
    if (!truth_path.empty()) {
        auto out = open_out(truth_path);
        out << "src_ip,dst_ip,src_port,dst_port,protocol,count\n";
        const auto& em = gen.emissions();
        for (uint64_t rank = 0; rank < em.size(); ++rank)
            if (em[rank]) out << to_string(zipf_generator::flow_at(rank)) << ',' << em[rank] << '\n';
    }
    std::cerr << "wrote " << written << " packets to " << out_path << '\n';
    return 0;
}

int cmd_bench(const CLI::App* cmd, const cli_options& opt, int reps) {
    const run_config cfg = resolve_config(cmd, opt);
    const std::vector<flow_id> stream = load_stream(opt);
    const bench_result result = run_bench(cfg, stream, reps);
    std::cout << "packets: " << result.packets << '\n';
    if (result.packets == 0) {
        std::cout << "packets_per_sec: 0\n";
        return 0;
    }
    for (size_t i = 0; i < result.seconds_per_rep.size(); ++i)
        std::cout << "rep" << i << "_sec: " << result.seconds_per_rep[i] << '\n';
    std::cout << "packets_per_sec: " << uint64_t(result.mean_packets_per_sec) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"top-K flow detection with a width-heterogeneous counting sketch"};
    app.require_subcommand(1);
    app.set_config("--config")->envname("FLOWTOP_CONFIG");

    cli_options opt;

    auto* run = app.add_subcommand("run", "Process a stream and write the top-K report");
    add_config_options(run, opt);
    add_input_options(run, opt);
    std::string out_json, out_csv;
    bool with_oracle = false;
    run->add_option("--out-json", out_json, "Report JSON path");
    run->add_option("--out-csv", out_csv, "Report CSV path");
    run->add_flag("--with-oracle", with_oracle, "Also count exact flows and print cardinality");

    auto* eval = app.add_subcommand("eval", "Evaluate ARE and precision against exact counts");
    add_config_options(eval, opt);
    add_input_options(eval, opt);
    std::string report_path, eval_out;
    bool identity_are = false;
    eval->add_option("--report", report_path, "Existing report JSON (otherwise run in-process)");
    eval->add_option("--out-json", eval_out, "Evaluation JSON path");
    eval->add_flag("--identity-are", identity_are, "Also compute identity-matched ARE");

    auto* gen = app.add_subcommand("gen", "Generate a synthetic Zipf corpus");
    uint64_t gen_flows = 100000, gen_packets = 1000000, gen_seed = 1;
    double gen_alpha = 1.1;
    std::string gen_out, gen_truth;
    gen->add_option("--flows", gen_flows, "Distinct flows")->required();
    gen->add_option("--packets", gen_packets, "Packets to emit")->required();
    gen->add_option("--alpha", gen_alpha, "Zipf exponent (> 0)");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "Output flowlog path")->required();
    gen->add_option("--truth-out", gen_truth, "Optional per-flow emission counts CSV");

    auto* bench = app.add_subcommand("bench", "Measure insert-path throughput");
    add_config_options(bench, opt);
    add_input_options(bench, opt);
    int reps = 3;
    bench->add_option("--reps", reps, "Repetitions (>= 3 recommended)");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run, opt, out_json, out_csv, with_oracle);
        if (eval->parsed()) return cmd_eval(eval, opt, report_path, eval_out, identity_are);
        if (gen->parsed()) return cmd_gen(gen_flows, gen_packets, gen_alpha, gen_seed, gen_out,
                                          gen_truth);
        if (bench->parsed()) return cmd_bench(bench, opt, reps);
        return exit_config;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    } catch (const flowtop::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const flowtop::trace_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "flowtop/report_io.hpp"

using namespace flowtop;

TEST_CASE("hashes render as 8 lowercase hex digits") {
    CHECK(hash_hex(0) == "00000000");
    CHECK(hash_hex(0xdeadbeefu) == "deadbeef");
    CHECK(hash_hex(0x1u) == "00000001");
    CHECK(hash_hex(0xffffffffu) == "ffffffff");
}

TEST_CASE("report JSON carries schema, config echo and entries") {
    top_k_report report;
    report.entries = {{0xdeadbeefu, 10}, {0x1u, 3}};
    const nlohmann::json cfg{{"sketch", "tower6"}};
    const nlohmann::json j = report_to_json(report, cfg);
    CHECK(j["schema"] == 1);
    CHECK(j["config"]["sketch"] == "tower6");
    REQUIRE(j["report"].size() == 2);
    CHECK(j["report"][0]["hash"] == "deadbeef");
    CHECK(j["report"][0]["count"] == 10);
}

TEST_CASE("report JSON round-trips through the parser") {
    top_k_report report;
    report.entries = {{0xcafef00du, 77}, {0x00000002u, 5}};
    std::stringstream buf;
    write_report_json(buf, report, nlohmann::json{{"queue_hash_seed", 9}});
    const parsed_report parsed = read_report_json(buf);
    REQUIRE(parsed.report.entries.size() == 2);
    CHECK(parsed.report.entries[0] == report.entries[0]);
    CHECK(parsed.report.entries[1] == report.entries[1]);
    CHECK(parsed.config["queue_hash_seed"] == 9);
}

TEST_CASE("report CSV is hash,count per line with a config comment") {
    top_k_report report;
    report.entries = {{0xffu, 4}};
    std::stringstream buf;
    write_report_csv(buf, report, nlohmann::json::object());
    std::string line;
    std::getline(buf, line);
    CHECK(line.rfind("# config:", 0) == 0);
    std::getline(buf, line);
    CHECK(line == "hash,count");
    std::getline(buf, line);
    CHECK(line == "000000ff,4");
}

TEST_CASE("malformed report JSON is rejected") {
    std::stringstream garbage("{ nope");
    CHECK_THROWS(read_report_json(garbage));
    std::stringstream wrong_schema(R"({"schema": 2, "report": []})");
    CHECK_THROWS(read_report_json(wrong_schema));
}

TEST_CASE("eval aggregation: mean and sample standard deviation") {
    eval_result a;
    a.k = 8;
    a.are_mean = 0.02;
    a.precision = 0.9;
    eval_result b = a;
    b.are_mean = 0.04;
    b.precision = 1.0;
    const eval_aggregate agg = aggregate_evals({a, b});
    CHECK(agg.traces == 2);
    CHECK(agg.are_mean == Catch::Approx(0.03));
    CHECK(agg.precision_mean == Catch::Approx(0.95));
    CHECK(agg.are_std == Catch::Approx(0.0141421356));
    CHECK(agg.precision_std == Catch::Approx(0.0707106781));

    const eval_aggregate one = aggregate_evals({a});
    CHECK(one.are_std == 0.0);

    CHECK(aggregate_evals({}).traces == 0);
}

TEST_CASE("eval JSON exposes the metric fields") {
    eval_result r;
    r.k = 4;
    r.are_mean = 0.5;
    r.precision = 0.75;
    r.tp = 3;
    r.fp = 1;
    const nlohmann::json j = eval_to_json(r, nlohmann::json::object());
    CHECK(j["k"] == 4);
    CHECK(j["are_mean"] == 0.5);
    CHECK(j["precision"] == 0.75);
    CHECK(j["tp"] == 3);
    CHECK(j["fp"] == 1);
}

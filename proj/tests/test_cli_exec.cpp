#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

// End-to-end checks against the built binary. The path arrives through the
// FLOWTOP_BIN environment variable (set by ctest); without it these are
// skipped so the test binary still runs standalone.

namespace {

std::string binary() {
    const char* p = std::getenv("FLOWTOP_BIN");
    return p ? p : "";
}

int run_cmd(const std::string& args) {
    const int rc = std::system((binary() + " " + args + " >/dev/null 2>&1").c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("flowtop_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli: gen, run, eval round trip with exit code 0") {
    if (binary().empty()) {
        SKIP("FLOWTOP_BIN not set");
    }
    const std::string corpus = tmp("corpus.flowlog");
    const std::string report = tmp("report.json");
    const std::string evalout = tmp("eval.json");

    CHECK(run_cmd("gen --flows 500 --packets 20000 --alpha 1.1 --seed 3 --out " + corpus) == 0);
    CHECK(run_cmd("run --preset paper-tower6-pqa6 --k 64 --input " + corpus +
                  " --out-json " + report) == 0);
    CHECK(run_cmd("eval --preset paper-tower6-pqa6 --k 64 --input " + corpus + " --report " +
                  report + " --out-json " + evalout) == 0);
    CHECK(slurp(evalout).find("\"precision_mean\"") != std::string::npos);

    SECTION("re-running is byte identical") {
        const std::string report2 = tmp("report2.json");
        CHECK(run_cmd("run --preset paper-tower6-pqa6 --k 64 --input " + corpus +
                      " --out-json " + report2) == 0);
        CHECK(slurp(report) == slurp(report2));
        std::remove(report2.c_str());
    }

    SECTION("seed mismatch between report and truth is a config error") {
        CHECK(run_cmd("eval --preset paper-tower6-pqa6 --k 64 --pqa-seed 12345 --input " +
                      corpus + " --report " + report) == 2);
    }

    SECTION("corrupt report file is an input error") {
        const std::string bad = tmp("bad_report.json");
        std::ofstream(bad) << "{ this is not json";
        CHECK(run_cmd("eval --preset paper-tower6-pqa6 --k 64 --input " + corpus + " --report " +
                      bad) == 3);
        std::remove(bad.c_str());
    }

    std::remove(corpus.c_str());
    std::remove(report.c_str());
    std::remove(evalout.c_str());
}

TEST_CASE("cli: config errors exit 2, input errors exit 3") {
    if (binary().empty()) {
        SKIP("FLOWTOP_BIN not set");
    }
    CHECK(run_cmd("run --preset no-such-preset --zipf-flows 10 --zipf-packets 10") == 2);
    CHECK(run_cmd("run --k 1000 --zipf-flows 10 --zipf-packets 10") == 2); // k/4 not a power of 2
    CHECK(run_cmd("run --sketch nonsense --zipf-flows 10 --zipf-packets 10") == 2);
    CHECK(run_cmd("run --k 64 --input /nonexistent/trace.flowlog") == 3);
    CHECK(run_cmd("run --k 64") == 2); // no input source
    CHECK(run_cmd("--help") == 0);
    CHECK(run_cmd("bogus-subcommand") == 2);
}

TEST_CASE("cli: bench reports throughput on a generated stream") {
    if (binary().empty()) {
        SKIP("FLOWTOP_BIN not set");
    }
    CHECK(run_cmd("bench --k 64 --zipf-flows 100 --zipf-packets 5000 --reps 3") == 0);
}

TEST_CASE("cli: directory eval aggregates across corpora") {
    if (binary().empty()) {
        SKIP("FLOWTOP_BIN not set");
    }
    const std::string dir = tmp("corpora");
    std::filesystem::create_directories(dir);
    CHECK(run_cmd("gen --flows 300 --packets 9000 --alpha 1.0 --seed 1 --out " + dir +
                  "/a.flowlog") == 0);
    CHECK(run_cmd("gen --flows 300 --packets 9000 --alpha 1.2 --seed 2 --out " + dir +
                  "/b.flowlog") == 0);
    const std::string out = tmp("diragg.json");
    CHECK(run_cmd("eval --k 32 --input " + dir + " --out-json " + out) == 0);
    const std::string json = slurp(out);
    CHECK(json.find("\"n_traces\": 2") != std::string::npos);
    std::filesystem::remove_all(dir);
    std::remove(out.c_str());
}

TEST_CASE("cli: config file via environment variable, flags win over it") {
    if (binary().empty()) {
        SKIP("FLOWTOP_BIN not set");
    }
    const std::string cfg = tmp("cfg.toml");
    std::ofstream(cfg) << "[run]\nk=16\nqueue=\"ppq\"\n";
    const std::string out = tmp("cfgrun.json");
    const std::string env = "FLOWTOP_CONFIG=" + cfg + " ";
    int rc = std::system((env + binary() + " run --zipf-flows 50 --zipf-packets 500 --out-json " +
                          out + " >/dev/null 2>&1")
                             .c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(slurp(out).find("\"queue\": \"ppq\"") != std::string::npos);
    CHECK(slurp(out).find("\"k\": 16") != std::string::npos);

    rc = std::system((env + binary() + " run --k 8 --zipf-flows 50 --zipf-packets 500 " +
                      "--out-json " + out + " >/dev/null 2>&1")
                         .c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(slurp(out).find("\"k\": 8") != std::string::npos);
    std::remove(cfg.c_str());
    std::remove(out.c_str());
}

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "parafield/report.hpp"

// End-to-end checks of the installed binary: exit codes, report formats,
// witness replay, and the byte-determinism contract.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string capture = "/tmp/parafield_cli_out_" + std::to_string(counter++) + ".txt";
    const std::string cmd = std::string(PARAFIELD_CLI_PATH) + " " + args + " > " + capture + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(status);
    res.stdout_text = slurp(capture);
    std::remove(capture.c_str());
    return res;
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run_cli("field-info --p 3 --m 2").exit_code == 0);
    CHECK(run_cli("verify lemma2 --p 5 --n 3").exit_code == 2);          // -1 square
    CHECK(run_cli("verify lemma2 --p 3 --n 4").exit_code == 2);          // wrong dimension
    CHECK(run_cli("verify no-such-check --p 3").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("field-info --p 4").exit_code == 2);
    CHECK(run_cli("estimate-constant --p 7 --strategy exhaustive_char --budget 100").exit_code == 2);
    CHECK(run_cli("verify lemma2 --p 3 --n 3 --mode exhaustive").exit_code == 0);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("csv report shape") {
    const auto res = run_cli("verify claim --p 3 --trials 2");
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.rfind(
              "command,p,m,n,exponent_p,exponent_q,strategy,seed,budget,metric_name,metric_value,verdict\n",
              0) == 0);
    CHECK(res.stdout_text.find("max_abs_diff,0,pass") != std::string::npos);
}

TEST_CASE("json report carries a witness slot") {
    const auto res = run_cli("verify lines-distinct --p 5 --format json");
    CHECK(res.exit_code == 0);
    const auto j = parafield::Json::parse(res.stdout_text);
    CHECK(j["command"] == "verify lines-distinct");
    CHECK_FALSE(j["witness"].is_null());
    CHECK(j["witness"]["check"] == "lines-distinct");
}

TEST_CASE("reports are byte-identical for identical configurations") {
    const std::string cmds[] = {
        "estimate-constant --p 3 --n 3 --pair 8/5,4 --strategy random_dyadic --budget 300 --seed 5",
        "verify lemma2 --p 3 --n 3 --mode exhaustive",
        "verify bilinear-identity --p 3 --trials 10 --seed 2 --format json",
        "scan-fields --primes 3,5 --n 3 --strategy random_char --budget 20 --seed 3",
    };
    for (const auto& cmd : cmds) {
        CAPTURE(cmd);
        const auto first = run_cli(cmd + " --threads 1");
        const auto second = run_cli(cmd + " --threads 4");
        CHECK(first.exit_code == 0);
        REQUIRE(first.stdout_text == second.stdout_text);
    }
}

TEST_CASE("different seeds change search reports") {
    const auto a = run_cli("estimate-constant --p 3 --strategy random_char --budget 50 --seed 1");
    const auto b = run_cli("estimate-constant --p 3 --strategy random_char --budget 50 --seed 2");
    CHECK(a.stdout_text != b.stdout_text);
}

TEST_CASE("output file plus summary line") {
    const std::string path = "/tmp/parafield_report_test.csv";
    const auto res = run_cli("field-info --p 7 --output " + path);
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("verdict=pass") != std::string::npos);
    CHECK(res.stdout_text.find(path) != std::string::npos);
    const std::string file = slurp(path);
    CHECK(file.find("order,7") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("witness replay") {
    SUBCASE("the lines-distinct collision witness reproduces") {
        const auto res = run_cli("verify lines-distinct --p 5 --format json");
        const auto j = parafield::Json::parse(res.stdout_text);
        const std::string wpath = "/tmp/parafield_witness_collision.json";
        {
            std::ofstream out(wpath);
            out << j["witness"].dump();
        }
        // the witness claims zero collisions; replay must find one and exit 1
        const auto replay = run_cli("verify --replay " + wpath);
        CHECK(replay.exit_code == 1);
        CHECK(replay.stdout_text.find("reproduced,true,fail") != std::string::npos);
        std::remove(wpath.c_str());
    }
    SUBCASE("a fabricated over-tight bound is reproduced as a failure") {
        parafield::Json w;
        w["check"] = "lemma2";
        w["field"] = {{"p", 3}, {"m", 1}};
        w["n"] = 3;
        w["instance"] = {{"A", "0x1ff"}, {"B", "0x1ff"}};
        // the full-surface ratio is 297/648; claim it were below 0.1
        w["claim"] = {{"metric", "ratio"}, {"op", "<="}, {"value", 0.1}};
        w["observed"] = 0.458;
        const std::string wpath = "/tmp/parafield_witness_fake.json";
        {
            std::ofstream out(wpath);
            out << w.dump();
        }
        const auto replay = run_cli("verify --replay " + wpath);
        CHECK(replay.exit_code == 1);
        std::remove(wpath.c_str());
    }
    SUBCASE("a true claim replays clean") {
        parafield::Json w;
        w["check"] = "lemma2";
        w["field"] = {{"p", 3}, {"m", 1}};
        w["n"] = 3;
        w["instance"] = {{"A", "0x1ff"}, {"B", "0x1ff"}};
        w["claim"] = {{"metric", "ratio"}, {"op", "<="}, {"value", 1.0}};
        w["observed"] = 0.458;
        const std::string wpath = "/tmp/parafield_witness_true.json";
        {
            std::ofstream out(wpath);
            out << w.dump();
        }
        const auto replay = run_cli("verify --replay " + wpath);
        CHECK(replay.exit_code == 0);
        CHECK(replay.stdout_text.find("reproduced,false,pass") != std::string::npos);
        std::remove(wpath.c_str());
    }
}

TEST_CASE("m-quantity routes agree end to end") {
    const auto res = run_cli("m-quantity --p 3 --n 4");
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("route_max_rel_diff,0,pass") != std::string::npos);
}

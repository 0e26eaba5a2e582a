#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ratdeg/shell.hpp"

using namespace ratdeg;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = shell::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kExampleMap =
    "field: 7\n"
    "vars: X Y Z\n"
    "X^3\n"
    "Y^3\n"
    "X*Y*Z\n";

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/ratdeg_test_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("map file parsing") {
    SECTION("the running example parses to the right map") {
        RationalMap f = parse_map_file(kExampleMap);
        REQUIRE(f.n == 2);
        REQUIRE(f.d == 3);
        REQUIRE(f.ring->field.characteristic() == 7);
        REQUIRE(f.ring->vars == std::vector<std::string>{"X", "Y", "Z"});
    }
    SECTION("extension field specs") {
        RationalMap f = parse_map_file("field: 3^2\nvars: X Y\nX^2\nY^2\n");
        REQUIRE(f.ring->field.ext_degree() == 2);
        REQUIRE(f.ring->field.cardinality().value() == 9);
    }
    SECTION("a missing vars line errors at line 2") {
        try {
            parse_map_file("field: 7\nX^3\nY^3\nZ^3\n");
            FAIL("expected a parse error");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::parse_error);
            REQUIRE(e.line() == 2);
        }
    }
    SECTION("a non-homogeneous component reports its index") {
        try {
            parse_map_file("field: 7\nvars: X Y Z\nX^3 + Y\nY^3\nZ^3\n");
            FAIL("expected a construction error");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::not_homogeneous);
            REQUIRE(std::string(e.what()).find("component 0") != std::string::npos);
        }
    }
    SECTION("parse errors carry positions inside components") {
        try {
            parse_map_file("field: 7\nvars: X Y Z\nX^3\nY^^3\nZ^3\n");
            FAIL("expected a parse error");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::parse_error);
            REQUIRE(e.line() == 4);
        }
    }
}

TEST_CASE("map file fuzzing never escapes the typed error domain") {
    Rng rng(2718);
    const std::string base = kExampleMap;
    int parsed_ok = 0, typed_errors = 0;
    for (int i = 0; i < 1000; ++i) {
        std::string mutated = base;
        int edits = 1 + static_cast<int>(rng.below(4));
        for (int e = 0; e < edits && !mutated.empty(); ++e) {
            std::size_t pos = rng.below(mutated.size());
            switch (rng.below(3)) {
                case 0: mutated.erase(pos, 1); break;
                case 1: mutated.insert(pos, 1, static_cast<char>(32 + rng.below(95))); break;
                default: mutated[pos] = static_cast<char>(32 + rng.below(95)); break;
            }
        }
        try {
            parse_map_file(mutated);
            ++parsed_ok;
        } catch (const Error&) {
            ++typed_errors;  // every failure must be a typed Error
        }
    }
    REQUIRE(parsed_ok + typed_errors == 1000);
    REQUIRE(typed_errors > 0);
}

TEST_CASE("cli exit codes") {
    std::string map_path = write_temp("example23.map", kExampleMap);
    SECTION("analyze succeeds with the documented numbers") {
        RunResult r = run({"analyze", map_path, "--trials", "5", "--seed", "42"});
        REQUIRE(r.code == 0);
        auto j = nlohmann::ordered_json::parse(r.out);
        REQUIRE(j["results"]["delta"] == 5);
        REQUIRE(j["results"]["bound"] == 4);
        REQUIRE(j["results"]["degree"] == 3);
        REQUIRE(j["results"]["lci"] == false);
        REQUIRE(j["results"]["points"].size() == 1);
        REQUIRE(j["results"]["points"][0]["mu"] == 3);
        REQUIRE(j["results"]["points"][0]["socle"] == 2);
    }
    SECTION("versch-table emits the degree rows") {
        RunResult r = run({"versch-table", "3", "5", "7"});
        REQUIRE(r.code == 0);
        std::size_t brace = r.out.find('{');
        REQUIRE(brace != std::string::npos);
        auto j = nlohmann::ordered_json::parse(r.out.substr(brace));
        REQUIRE(j["results"]["rows"][0]["delta"] == 16);
        REQUIRE(j["results"]["rows"][0]["degree"] == 11);
        REQUIRE(j["results"]["rows"][1]["delta"] == 80);
        REQUIRE(j["results"]["rows"][1]["degree"] == 45);
        REQUIRE(j["results"]["rows"][2]["delta"] == 224);
        REQUIRE(j["results"]["rows"][2]["degree"] == 119);
    }
    SECTION("domain errors exit 1 with a typed report") {
        std::string bad = write_temp("common_factor.map",
                                     "field: 7\nvars: X Y Z\nX^2\nX*Y\nX*Z\n");
        RunResult r = run({"analyze", bad});
        REQUIRE(r.code == 1);
        auto j = nlohmann::ordered_json::parse(r.out);
        REQUIRE(j["error"]["code"] == "PositiveDimensionalBaseLocus");
    }
    SECTION("parse errors exit 2") {
        std::string bad = write_temp("broken.map", "field: 7\nX^3\n");
        RunResult r = run({"analyze", bad});
        REQUIRE(r.code == 2);
        auto j = nlohmann::ordered_json::parse(r.out);
        REQUIRE(j["error"]["code"] == "ParseError");
        REQUIRE(j["error"]["line"] == 2);
    }
    SECTION("usage errors exit 2") {
        RunResult r = run({"analyze"});
        REQUIRE(r.code == 2);
    }
}

TEST_CASE("reports are byte-identical across repeated runs") {
    std::string map_path = write_temp("example23.map", kExampleMap);
    RunResult a = run({"analyze", map_path, "--trials", "3", "--seed", "9"});
    RunResult b = run({"analyze", map_path, "--trials", "3", "--seed", "9"});
    REQUIRE(a.code == b.code);
    REQUIRE(a.out == b.out);

    RunResult c = run({"census", "--n", "1", "--d", "2", "--field", "7", "--count", "5",
                       "--seed", "4", "--threads", "2"});
    RunResult d = run({"census", "--n", "1", "--d", "2", "--field", "7", "--count", "5",
                       "--seed", "4", "--threads", "1"});
    REQUIRE(c.code == 0);
    REQUIRE(c.out == d.out);
}

TEST_CASE("census command emits rows and csv") {
    std::string csv_path = "/tmp/ratdeg_test_census.csv";
    RunResult r = run({"census", "--n", "1", "--d", "2", "--field", "5", "--count", "4",
                       "--seed", "11", "--csv", csv_path});
    REQUIRE(r.code == 0);
    auto j = nlohmann::ordered_json::parse(r.out);
    REQUIRE(j["results"]["rows"].size() == 4);
    REQUIRE(j["results"]["aggregate"]["violation_count"] == 0);
    std::ifstream csv(csv_path);
    std::string header;
    std::getline(csv, header);
    REQUIRE(header == "index,delta,bound,degree,lci,gorenstein,equality");
    int lines = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++lines;
    REQUIRE(lines == 4);
}

TEST_CASE("lemma32 and chainmod-selftest commands succeed") {
    RunResult a = run({"lemma32", "--field", "7", "--specializations", "10"});
    REQUIRE(a.code == 0);
    auto j = nlohmann::ordered_json::parse(a.out);
    REQUIRE(j["results"]["ok"] == true);

    RunResult b = run({"chainmod-selftest", "--rows", "8"});
    REQUIRE(b.code == 0);
    auto k = nlohmann::ordered_json::parse(b.out);
    REQUIRE(k["results"]["all_pass"] == true);
    for (const auto& cfg : k["results"]["configs"])
        for (const auto& row : cfg["rows"])
            REQUIRE(row["pass"] == true);
}

TEST_CASE("baselocus and degree subcommands") {
    std::string map_path = write_temp("example23.map", kExampleMap);
    RunResult b = run({"baselocus", map_path, "--seed", "1"});
    REQUIRE(b.code == 0);
    auto jb = nlohmann::ordered_json::parse(b.out);
    REQUIRE(jb["results"]["delta"] == 5);
    REQUIRE(jb["results"]["points"].size() == 1);
    REQUIRE(jb["results"]["points"][0]["chart"] == 2);

    RunResult d = run({"degree", map_path, "--trials", "4", "--seed", "2"});
    REQUIRE(d.code == 0);
    auto jd = nlohmann::ordered_json::parse(d.out);
    REQUIRE(jd["results"]["degree"] == 3);
    REQUIRE(jd["results"]["samples"].size() == 4);
}

TEST_CASE("the RATDEG_BUDGET environment variable overrides the S-pair budget") {
    std::string map_path = write_temp("example23.map", kExampleMap);
    long long saved = groebner_budget();
    setenv("RATDEG_BUDGET", "2", 1);
    RunResult r = run({"analyze", map_path});
    unsetenv("RATDEG_BUDGET");
    groebner_budget() = saved;
    REQUIRE(r.code == 1);
    auto j = nlohmann::ordered_json::parse(r.out);
    REQUIRE(j["error"]["code"] == "ComputationBudgetExceeded");
}

TEST_CASE("budget overrides produce a typed failure") {
    std::string map_path = write_temp("example23.map", kExampleMap);
    long long saved = groebner_budget();
    RunResult r = run({"analyze", map_path, "--budget", "2"});
    groebner_budget() = saved;
    REQUIRE(r.code == 1);
    auto j = nlohmann::ordered_json::parse(r.out);
    REQUIRE(j["error"]["code"] == "ComputationBudgetExceeded");
}

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "slicebound/cli.hpp"
#include "slicebound/io.hpp"

using namespace slicebound;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "slicebound");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "slicebound_cli_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string fixture(const std::string& name, std::vector<std::string> construct_args) {
    std::string path = temp_path(name);
    construct_args.insert(construct_args.begin(), "construct");
    construct_args.push_back("--output");
    construct_args.push_back(path);
    REQUIRE(cli(construct_args).code == exit_code::ok);
    return path;
}

}  // namespace

TEST_CASE("construct and validate") {
    std::string h = fixture("h23.json", {"hadamard", "--k", "2", "--n", "3"});
    Run v = cli({"validate", "--input", h});
    CHECK(v.code == exit_code::ok);
    Json j = Json::parse(v.out);
    CHECK(j["decomposition"]["identity_ok"] == true);
    CHECK(cli({"construct", "hadamard", "--k", "3", "--n", "4"}).code == exit_code::structural);
    CHECK(cli({"construct", "dodecahedron", "--n", "3"}).code == exit_code::structural);
}

TEST_CASE("validate reports a broken identity with exit 1") {
    std::string path = temp_path("broken.json");
    std::ofstream(path) << R"({"dim":2,"vectors":[[1,0],[0,1]],"weights":[1,0.5],"centered":false})";
    CHECK(cli({"validate", "--input", path}).code == exit_code::structural);
}

TEST_CASE("structural errors exit 1") {
    std::string path = temp_path("malformed.json");
    std::ofstream(path) << "{\"dim\": 2, \"vectors\": ";
    CHECK(cli({"bound", "--input", path, "--all"}).code == exit_code::structural);
    std::string c = fixture("cube3.json", {"cube", "--n", "3", "--k", "2"});
    Run r = cli({"bound", "--input", c, "--bounds", "no_such_bound"});
    CHECK(r.code == exit_code::structural);
    CHECK(r.err.find("symmetric_case1") != std::string::npos);
    CHECK(cli({"bound", "--input", c, "--subspace", "[[1,0]]"}).code == exit_code::structural);
    CHECK(cli({"bound"}).code == exit_code::structural);
}

TEST_CASE("gate failures on named bounds exit 2, forced values are emitted") {
    std::string c = fixture("cube3_diag.json", {"cube", "--n", "3"});
    Run r = cli({"bound", "--input", c, "--subspace", "[[1,1,1]]", "--bounds", "symmetric_case1"});
    CHECK(r.code == exit_code::gate);
    Json j = Json::parse(r.out);
    CHECK(j["entries"][0]["value"].is_null());
    CHECK(j["entries"][0]["gate"]["satisfied"] == false);
    Run f = cli({"bound", "--input", c, "--subspace", "[[1,1,1]]", "--bounds", "symmetric_case1", "--force"});
    CHECK(f.code == exit_code::gate);
    CHECK(Json::parse(f.out)["entries"][0]["value"].is_number());
}

TEST_CASE("--all reports gate failures as null with exit 0") {
    std::string c = fixture("cube3_all.json", {"cube", "--n", "3"});
    Run r = cli({"bound", "--input", c, "--subspace", "[[1,1,1]]", "--all"});
    CHECK(r.code == exit_code::ok);
    Json j = Json::parse(r.out);
    bool saw_null = false;
    for (const auto& e : j["entries"])
        if (e["name"] == "symmetric_case1") saw_null = e["value"].is_null();
    CHECK(saw_null);
}

TEST_CASE("bound report round trip and stable digest") {
    std::string c = fixture("cube4.json", {"cube", "--n", "4", "--k", "2"});
    std::string out1 = temp_path("report1.json");
    CHECK(cli({"bound", "--input", c, "--all", "--output", out1}).code == exit_code::ok);
    Run again = cli({"bound", "--input", c, "--all"});
    Json a = read_json_file(out1), b = Json::parse(again.out);
    CHECK(a == b);
    CHECK(a["metadata"]["inputs_digest"].get<std::string>().size() == 16);
    CHECK(a["metadata"]["tolerances"]["identity"] == 1e-8);
    Run csv = cli({"bound", "--input", c, "--bounds", "symmetric_case1", "--format", "csv"});
    CHECK(csv.out.rfind("name,value,", 0) == 0);
}

TEST_CASE("verify requires a seed for Monte Carlo") {
    unsetenv("SLICEBOUND_SEED");
    std::string h = fixture("h23_verify.json", {"hadamard", "--k", "2", "--n", "3"});
    CHECK(cli({"verify", "--input", h, "--oracle", "mc", "--samples", "20000"}).code == exit_code::structural);
    Run exact = cli({"verify", "--input", h, "--oracle", "exact", "--bounds", "symmetric_case1"});
    CHECK(exact.code == exit_code::ok);
    CHECK(Json::parse(exact.out)["all_hold"] == true);
    setenv("SLICEBOUND_SEED", "17", 1);
    Run mc = cli({"verify", "--input", h, "--oracle", "both", "--samples", "20000", "--bounds", "symmetric_case1"});
    unsetenv("SLICEBOUND_SEED");
    CHECK(mc.code == exit_code::ok);
    Json j = Json::parse(mc.out);
    CHECK(j["seed"] == 17);
    CHECK(j["all_hold"] == true);
    CHECK(j["oracles"]["section_volume"].size() == 2);
    Run same = cli({"verify", "--input", h, "--oracle", "mc", "--samples", "20000", "--seed", "17", "--bounds",
                    "symmetric_case1"});
    CHECK(Json::parse(same.out)["oracles"]["section_volume"][0]["mean"] ==
          j["oracles"]["section_volume"][1]["mean"]);
}

TEST_CASE("verify parseval") {
    std::string c = fixture("cube3_parseval.json", {"cube", "--n", "3"});
    Run r = cli({"verify", "parseval", "--input", c, "--subspace", R"({"orthogonal_to":[[1,1,1]]})"});
    CHECK(r.code == exit_code::ok);
    Json j = Json::parse(r.out);
    CHECK(j["parseval"]["agrees"] == true);
    CHECK(j["parseval"]["gates"]["satisfied"] == true);
    CHECK(cli({"verify", "bogus", "--input", c}).code == exit_code::structural);
}

TEST_CASE("sweep output") {
    unsetenv("SLICEBOUND_SEED");
    Run empty = cli({"sweep", "--count", "0", "--format", "csv"});
    CHECK(empty.code == exit_code::ok);
    std::string header;
    for (std::size_t i = 0; i < sweep_columns().size(); ++i) header += (i ? "," : "") + sweep_columns()[i];
    CHECK(empty.out == header + "\n");

    std::string c = fixture("cube3_sweep.json", {"cube", "--n", "3"});
    CHECK(cli({"sweep", "--input", c, "--k", "2", "--count", "2"}).code == exit_code::structural);
    Run rows = cli({"sweep", "--input", c, "--k", "2", "--count", "3", "--samples", "5000", "--seed", "5", "--format", "csv"});
    CHECK(rows.code == exit_code::ok);
    std::istringstream is(rows.out);
    std::string line;
    int count = 0;
    while (std::getline(is, line)) ++count;
    CHECK(count == 4);
    Run again = cli({"sweep", "--input", c, "--k", "2", "--count", "3", "--samples", "5000", "--seed", "5", "--format", "csv"});
    CHECK(again.out == rows.out);

    Run sys = cli({"sweep", "--generator", "systems", "--n", "3", "--k", "2", "--count", "2", "--samples", "5000",
                   "--seed", "1"});
    CHECK(sys.code == exit_code::ok);
    CHECK(Json::parse(sys.out)["rows"].size() == 2);
    CHECK(cli({"sweep", "--generator", "nope", "--count", "1", "--seed", "1"}).code == exit_code::structural);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scartower/cli.hpp"
#include "scartower/io.hpp"
#include "scartower/models.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace scartower;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
    Json error() const { return Json::parse(err); }
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "scartower_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("help and version exit cleanly") {
    Result h = call({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("distribution") != std::string::npos);
    Result v = call({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find(kVersion) != std::string::npos);
}

TEST_CASE("verify reports the tower energy") {
    Result r = call({"verify", "--model", "aklt", "--L", "6", "--n", "1"});
    REQUIRE(r.code == 0);
    Json j = r.json();
    CHECK(j["energy"].get<double>() == doctest::Approx(2.0));
    CHECK(j["residual"].get<double>() < 1e-8);
    CHECK(j["tool"] == "scartower");
    CHECK(j["config"]["L"] == 6);
    CHECK(j.contains("wall_time_s"));
}

TEST_CASE("usage errors exit 2 with a JSON message") {
    Result r = call({"prepare", "--model", "foo", "--L", "4"});
    CHECK(r.code == 2);
    Json e = r.error();
    CHECK(e["exit_code"] == 2);
    CHECK(e["valid_models"].size() == 5);
    CHECK(call({"prepare", "--L", "4"}).code == 2);
    CHECK(call({"nonsense"}).code == 2);
    CHECK(call({"prepare", "--model", "dicke", "--L", "4", "--w", "1.5"}).code == 2);
}

TEST_CASE("size guard exits 3") {
    Result r = call({"prepare", "--model", "dicke", "--L", "30"});
    CHECK(r.code == 3);
    CHECK(r.error().contains("amplitude_cap"));
    CHECK(call({"prepare", "--model", "dicke", "--L", "10", "--max-amplitudes", "100"}).code == 3);
}

TEST_CASE("empty tower member exits 4") {
    Result r = call({"prepare", "--model", "aklt", "--L", "6", "--n", "3"});
    CHECK(r.code == 4);
    CHECK(r.error()["kind"].is_string());
}

TEST_CASE("distribution CSV for a long AKLT chain") {
    fs::path csv = scratch("aklt128.csv");
    Result r = call({"distribution", "--model", "aklt", "--L", "128", "--w", "0.5", "--method", "transfer", "--csv", csv.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,p,log_p");
    int rows = 0;
    double total = 0.0;
    while (std::getline(in, line)) {
        CHECK(std::stoi(line.substr(0, line.find(','))) == rows);
        total += std::stod(line.substr(line.find(',') + 1));
        ++rows;
    }
    CHECK(rows == 65);
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("prepared state round-trips through JSON") {
    fs::path state = scratch("state.json"), mps = scratch("mps.json");
    Result r = call({"prepare", "--model", "xx_spin1", "--L", "4", "--w", "0.3", "--state-out", state.string(), "--mps-out", mps.string()});
    REQUIRE(r.code == 0);
    StateVector s = state_from_json(read_json_file(state.string()));
    StateVector ref = resource_state(make_model("xx_spin1"), 4, 0.3);
    REQUIRE(s.size() == ref.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == ref[i]);
    CHECK(state_to_json(s) == read_json_file(state.string()));
    MPS m = mps_from_json(read_json_file(mps.string()));
    CHECK(mps_to_json(m) == read_json_file(mps.string()));
}

TEST_CASE("mpu-check builtin and file input") {
    Result r = call({"mpu-check", "--builtin", "translation"});
    REQUIRE(r.code == 0);
    CHECK(r.json()["table"]["all_correctable"] == true);
    fs::path f = scratch("czx.json");
    write_json_file(f.string(), mpu_to_json(czx_mpu()));
    CHECK(mpu_to_json(mpu_from_json(read_json_file(f.string()))) == mpu_to_json(czx_mpu()));
    Result fr = call({"mpu-check", "--file", f.string()});
    REQUIRE(fr.code == 0);
    CHECK(fr.json()["table"]["entries"].size() == 4);
    CHECK(call({"mpu-check", "--file", scratch("missing.json").string()}).code == 2);
}

TEST_CASE("translate and measurement subcommands") {
    Result t = call({"translate", "--L", "4", "--d", "2", "--exhaustive", "--seed", "3"});
    REQUIRE(t.code == 0);
    CHECK(t.json()["min_branch_fidelity"].get<double>() > 1 - 1e-10);
    CHECK(t.json()["branch_probability_sum"].get<double>() == doctest::Approx(1.0));
    Result c = call({"measure-charge", "--model", "dicke", "--L", "6", "--shots", "20", "--seed", "1"});
    CHECK(c.code == 0);
    Result m = call({"measure-momentum", "--model", "aklt", "--L", "4", "--method", "pea"});
    CHECK(m.code == 0);
    // same seed, same report
    Result c2 = call({"measure-charge", "--model", "dicke", "--L", "6", "--shots", "20", "--seed", "1"});
    Json a = c.json(), b = c2.json();
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    CHECK(a == b);
}

TEST_CASE("arovas small run") {
    Result r = call({"arovas", "--L", "4", "--alpha", "0.3", "--max-rounds", "50", "--seeds", "4", "--seed", "2"});
    REQUIRE(r.code == 0);
    Json j = r.json();
    CHECK(j["runs"].size() == 4);
    CHECK(j["oracle"]["residual"].get<double>() < 1e-8);
}

TEST_CASE("installed binary behaves like the library entry point") {
    const char* bin = std::getenv("SCARTOWER_CLI");
    if (!bin) return;
    std::string cmd = std::string(bin) + " verify --model dicke --L 6 --n 2 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
    int status = pclose(p);
    CHECK(status == 0);
    CHECK(Json::parse(out)["residual"].get<double>() < 1e-8);
    std::string bad = std::string(bin) + " prepare --model foo --L 4 >/dev/null 2>&1";
    int code = std::system(bad.c_str());
    CHECK(WEXITSTATUS(code) == 2);
}

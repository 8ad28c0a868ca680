// Drives the built grayfuzz binary through std::system.

#include "grayfuzz/image.hpp"
#include "grayfuzz/phantom.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef GRAYFUZZ_CLI_PATH
#error "GRAYFUZZ_CLI_PATH must name the grayfuzz executable"
#endif

namespace fs = std::filesystem;
using namespace grayfuzz;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("grayfuzz_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + GRAYFUZZ_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

} // namespace

TEST_CASE("run writes all five artifacts") {
    TempDir tmp;
    const auto input = tmp.path / "in.pgm";
    write_pgm_file(input.string(), phantom::bimodal(64, 64));
    const auto out = tmp.path / "out";
    REQUIRE(run("run --input " + quoted(input) + " --sigma 20 --seed 4 --out-dir " + quoted(out)) == 0);
    for (const char* name : {"noisy.pgm", "extracted.pgm", "report.csv", "rulebase.json", "metrics.json"}) {
        CHECK_MESSAGE(fs::exists(out / name), name);
    }
    CHECK(slurp(out / "report.csv").rfind("method,level,status\n", 0) == 0);
    const auto rules = nlohmann::json::parse(slurp(out / "rulebase.json"));
    CHECK(rules["schema"] == "grayfuzz.rulebase/1");
    const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
    CHECK(metrics.contains("psnr_db"));
    CHECK(read_pgm_file((out / "noisy.pgm").string()) ==
          add_gaussian_noise(phantom::bimodal(64, 64), {20.0, 4}));
}

TEST_CASE("run with sigma 0 keeps the input") {
    TempDir tmp;
    const auto input = tmp.path / "in.pgm";
    const auto clean = phantom::halves(32, 16, 40, 210);
    write_pgm_file(input.string(), clean);
    REQUIRE(run("run --input " + quoted(input) + " --sigma 0 --out-dir " + quoted(tmp.path)) == 0);
    CHECK(read_pgm_file((tmp.path / "noisy.pgm").string()) == clean);
    CHECK(read_pgm_file((tmp.path / "extracted.pgm").string()) == clean);
    const auto metrics = nlohmann::json::parse(slurp(tmp.path / "metrics.json"));
    CHECK(metrics["psnr_db"] == "inf");
}

TEST_CASE("exit codes") {
    TempDir tmp;
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("run --input " + quoted(tmp.path / "missing.pgm") + " --out-dir " + quoted(tmp.path)) == 2);

    const auto junk = tmp.path / "junk.pgm";
    std::ofstream(junk) << "not a pgm";
    CHECK(run("run --input " + quoted(junk) + " --out-dir " + quoted(tmp.path)) == 2);

    const auto flat = tmp.path / "flat.pgm";
    write_pgm_file(flat.string(), GrayImage(8, 8, 128));
    CHECK(run("run --input " + quoted(flat) + " --sigma 0 --out-dir " + quoted(tmp.path)) == 0);
    CHECK(run("run --input " + quoted(flat) + " --sigma 0 --strict --out-dir " + quoted(tmp.path)) == 3);
    CHECK(run("run --input " + quoted(flat) + " --compare nonsense --out-dir " + quoted(tmp.path)) == 1);
    CHECK(run("run --input " + quoted(flat) + " --regions 2 --out-dir " + quoted(tmp.path)) == 1);
    CHECK(run("bench --input " + quoted(flat) + " --methods Bogus") == 1);
}

TEST_CASE("bench CSV header and determinism") {
    TempDir tmp;
    const auto input = tmp.path / "in.pgm";
    write_pgm_file(input.string(), phantom::bimodal(48, 48));
    const auto a = tmp.path / "a.csv";
    const auto b = tmp.path / "b.csv";
    REQUIRE(run("bench --input " + quoted(input) + " --csv " + quoted(a)) == 0);
    REQUIRE(run("bench --input " + quoted(input) + " --csv " + quoted(b)) == 0);
    const auto text = slurp(a);
    CHECK(text.rfind("method,15,30,45,60,75\n", 0) == 0);
    CHECK(text == slurp(b));
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);
}

TEST_CASE("bench config file with flag overrides") {
    TempDir tmp;
    const auto input = tmp.path / "in.pgm";
    write_pgm_file(input.string(), phantom::halves(32, 32, 40, 210));
    const auto config = tmp.path / "spec.json";
    std::ofstream(config) << R"({"images": [")" << input.string()
                          << R"("], "sigmas": [0, 10], "seeds": [1], "methods": ["Otsu", "proposed"]})";
    const auto csv = tmp.path / "out.csv";
    REQUIRE(run("bench --config " + quoted(config) + " --csv " + quoted(csv)) == 0);
    const auto text = slurp(csv);
    CHECK(text.rfind("method,0,10\nOtsu,inf,", 0) == 0);
    CHECK(text.find("Proposed method,inf,") != std::string::npos);

    REQUIRE(run("bench --config " + quoted(config) + " --sigma 0 --csv " + quoted(csv)) == 0);
    CHECK(slurp(csv) == "method,0\nOtsu,inf\nProposed method,inf\n");

    std::ofstream(config) << "{ broken";
    CHECK(run("bench --config " + quoted(config)) == 1);
}

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Result {
    int code;
    std::string out;
};

// Runs cp-phase with stderr merged into stdout.
Result cp_phase(const std::string& args) {
    const std::string cmd = std::string("\"") + CP_PHASE_EXE + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string config(const std::string& name) { return std::string("--config \"") + CP_PHASE_CONFIG_DIR + "/" + name + "\""; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("exit codes", "[cli]") {
    CHECK(cp_phase("pattern " + config("pattern_depolarizing.json")).code == 0);
    CHECK(cp_phase("verify " + config("verify_depolarizing.json")).code == 0);
    CHECK(cp_phase("verify " + config("verify_amplitude_damping.json")).code == 0);
    CHECK(cp_phase("verify " + config("verify_corrupted.json")).code == 1);
    CHECK(cp_phase("pattern " + config("malformed.json")).code == 2);
    CHECK(cp_phase("fringe " + config("fringe_missing_grid.json")).code == 2);
    CHECK(cp_phase("pattern " + config("pattern_bad_kraus.json")).code == 3);
    CHECK(cp_phase("geomphase " + config("geomphase_degenerate.json")).code == 3);
    CHECK(cp_phase("pattern --config /nonexistent/file.json").code == 2);
    CHECK(cp_phase("explode " + config("pattern_identity.json")).code == 2);
    CHECK(cp_phase("pattern").code == 2);
    CHECK(cp_phase("--help").code == 0);
}

TEST_CASE("errors name the problem", "[cli]") {
    CHECK_THAT(cp_phase("pattern " + config("malformed.json")).out, Catch::Matchers::ContainsSubstring("byte"));
    CHECK_THAT(cp_phase("pattern " + config("pattern_bad_kraus.json")).out,
               Catch::Matchers::ContainsSubstring("completeness residual"));
    CHECK_THAT(cp_phase("geomphase " + config("geomphase_degenerate.json")).out,
               Catch::Matchers::ContainsSubstring("degenerate"));
}

TEST_CASE("CSV output file", "[cli]") {
    const auto dir = std::filesystem::temp_directory_path() / "cp_phase_cli_test";
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.csv", b = dir / "b.csv";
    REQUIRE(cp_phase("fringe " + config("fringe_identity.json") + " --out \"" + a.string() + "\"").code == 0);
    REQUIRE(cp_phase("fringe " + config("fringe_identity.json") + " --out \"" + b.string() + "\"").code == 0);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("chi,intensity\n", 0) == 0);
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("3.14159265358979,0\n"));

    REQUIRE(cp_phase("pattern " + config("pattern_depolarizing.json") + " --out \"" + a.string() + "\"").code == 0);
    CHECK_THAT(slurp(a), Catch::Matchers::ContainsSubstring("0,0.836660026534076,0,0.836660026534076,0,1\n"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("stdout is byte-identical across runs", "[cli]") {
    for (const char* cmd : {"pattern pattern_density_kraus.json", "geomphase geomphase_octant.json",
                            "geomphase geomphase_bitflip.json", "dilate dilate_depolarizing.json",
                            "fringe fringe_amplitude_damping.json"}) {
        std::istringstream parts(cmd);
        std::string sub, file;
        parts >> sub >> file;
        const Result first = cp_phase(sub + " " + config(file));
        const Result second = cp_phase(sub + " " + config(file));
        CHECK(first.code == 0);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("geomphase reports", "[cli]") {
    const Result r = cp_phase("geomphase " + config("geomphase_octant.json"));
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("0.59160797831"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("pt residual"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("solid angle"));
    const Result flip = cp_phase("geomphase " + config("geomphase_bitflip.json"));
    CHECK_THAT(flip.out, Catch::Matchers::ContainsSubstring("0.158113883008"));
}

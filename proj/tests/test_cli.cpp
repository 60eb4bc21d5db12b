#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
    const std::string cmd = std::string(SCHOTTKY_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("schottky_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("validate presets and forced failures", "[cli]") {
    const fs::path dir = temp_dir("validate");
    CHECK(run("validate --preset funnel3 --lengths 6,6,6 --out " + (dir / "a").string()) == 0);
    CHECK(run("validate --preset cylinder --lengths 2 --out " + (dir / "b").string()) == 0);

    // overlapping-disk group file fails with the named check
    const fs::path bad = dir / "bad_group.json";
    std::ofstream(bad) << R"({"m": 1,
        "disks": [{"center": -1.0, "radius": 1.2}, {"center": 1.0, "radius": 1.2}],
        "generators": [[[1.543, -1.0],[1.0, -1.543]], [[1.543, 1.0],[-1.0, -1.543]]]})";
    const fs::path cfg = dir / "bad.json";
    std::ofstream(cfg) << R"({"group": {"file": ")" << bad.string()
                       << R"("}, "out_dir": ")" << (dir / "c").string() << R"("})";
    CHECK(run("validate --config " + cfg.string()) == 1);

    // malformed JSON is an input error
    const fs::path broken = dir / "broken.json";
    std::ofstream(broken) << "{ not json";
    CHECK(run("validate --config " + broken.string()) == 2);

    // unknown config keys are rejected
    const fs::path unknown = dir / "unknown.json";
    std::ofstream(unknown) << R"({"grooop": 1})";
    CHECK(run("validate --config " + unknown.string()) == 2);

    // infeasible preset lengths are an input error
    CHECK(run("validate --preset funnel3 --lengths 0.1,0.1,0.1 --out " +
              (dir / "d").string()) == 2);
}

TEST_CASE("delta on the cylinder writes zero", "[cli]") {
    const fs::path dir = temp_dir("delta");
    REQUIRE(run("delta --preset cylinder --lengths 2 --out " + dir.string()) == 0);
    bool found = false;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().rfind("delta_", 0) == 0) {
            found = true;
            const std::string text = slurp(e.path());
            CHECK(text.find("\"delta\": 0.0") != std::string::npos);
        }
    }
    CHECK(found);
}

TEST_CASE("resonance runs are byte-identical", "[cli]") {
    const fs::path dir = temp_dir("determinism");
    const std::string box = "-1.5,0.5,0.0,4.0";
    REQUIRE(run("resonances --preset cylinder --lengths 2 --box " + box + " --out " +
                (dir / "r1").string()) == 0);
    REQUIRE(run("resonances --preset cylinder --lengths 2 --box " + box + " --out " +
                (dir / "r2").string()) == 0);

    int compared = 0;
    for (const auto& e : fs::directory_iterator(dir / "r1")) {
        const fs::path other = dir / "r2" / e.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(e.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared >= 2);  // csv + json + manifest
}

TEST_CASE("zeta artifact has small det mismatch", "[cli]") {
    const fs::path dir = temp_dir("zeta");
    REQUIRE(run("zeta --preset funnel3 --lengths 6,6,6 --out " + dir.string()) == 0);
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename().string().rfind("zeta_", 0) != 0) continue;
        std::ifstream in(e.path());
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            const auto last_comma = line.rfind(',');
            const auto prev_comma = line.rfind(',', last_comma - 1);
            const double rel =
                std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1));
            CHECK(rel < 1e-6);
        }
    }
}

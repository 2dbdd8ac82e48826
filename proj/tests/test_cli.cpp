#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "telatom/couplings.hpp"

#ifndef TELATOM_CLI_PATH
#error "TELATOM_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "telatom_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd = std::string(TELATOM_CLI_PATH) + " " + args + " > " +
                            stdout_file.string() + " 2> " + stdout_file.string() + ".err";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// value of a "key = number" line
double parse_value(const std::string& text, const std::string& key) {
    const size_t pos = text.find("\n" + key + " = ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 4));
}

}  // namespace

TEST_CASE("identical configurations produce byte-identical output") {
    const fs::path dir = temp_dir();
    const std::string args =
        "sweep-time --initial bell2 --r 0.3 --gt-max 2 --samples 400";
    REQUIRE(run_cli(args, dir / "a.csv") == 0);
    REQUIRE(run_cli(args, dir / "b.csv") == 0);
    const std::string a = slurp(dir / "a.csv");
    REQUIRE_FALSE(a.empty());
    CHECK(a == slurp(dir / "b.csv"));

    // -o and stdout carry the same bytes
    REQUIRE(run_cli(args + " -o " + (dir / "c.csv").string(), dir / "ignored.txt") == 0);
    CHECK(a == slurp(dir / "c.csv"));
}

TEST_CASE("sweep output matches the golden file") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("sweep-time --initial bell0 --r 0.16667 --omega0 100 --gt-max 1",
                    dir / "golden_run.csv") == 0);
    const std::string golden =
        slurp(fs::path(TELATOM_GOLDEN_DIR) / "sweep_time_bell0.csv");
    REQUIRE_FALSE(golden.empty());
    CHECK(slurp(dir / "golden_run.csv") == golden);
}

TEST_CASE("fidelity subcommand on a fresh symmetric Bell channel") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("fidelity --initial bell1 --r 0.6737 --gt 0", dir / "fid.txt") == 0);
    const std::string text = slurp(dir / "fid.txt");
    CHECK(parse_value(text, "F") == 1.0);
    CHECK(parse_value(text, "C") == 1.0);
    CHECK(parse_value(text, "P") == 1.0);
    CHECK(text.find("strategy = (1,0,3,2)") != std::string::npos);
}

TEST_CASE("rates subcommand matches the library") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("rates --r 0.25", dir / "rates.txt") == 0);
    const std::string text = slurp(dir / "rates.txt");
    using namespace telatom;
    const GeometryParams geom{0.25, 0.5 * std::numbers::pi, 1.0, 100.0};
    CHECK_THAT(parse_value(text, "gamma12"),
               Catch::Matchers::WithinRel(collective_damping(geom), 1e-11));
    CHECK_THAT(parse_value(text, "omega12"),
               Catch::Matchers::WithinRel(dipole_shift(geom), 1e-11));
}

TEST_CASE("thresholds report carries the critical decay times") {
    const fs::path dir = temp_dir();
    REQUIRE(run_cli("thresholds", dir / "th.txt") == 0);
    const std::string text = slurp(dir / "th.txt");
    CHECK_THAT(parse_value(text, "psi1_extinction"), Catch::Matchers::WithinAbs(1.0431, 1e-3));
    CHECK_THAT(parse_value(text, "psi2_all_distances"),
               Catch::Matchers::WithinAbs(0.5190, 1e-3));
    CHECK_THAT(parse_value(text, "psi1_infinite_tail"),
               Catch::Matchers::WithinAbs(0.5804, 5e-3));
}

TEST_CASE("exit codes") {
    const fs::path dir = temp_dir();
    SECTION("unknown flags exit 1") {
        CHECK(run_cli("rates --r 0.5 --no-such-flag", dir / "e1.txt") == 1);
        CHECK(run_cli("no-such-subcommand", dir / "e2.txt") == 1);
    }
    SECTION("domain errors exit 1") {
        CHECK(run_cli("rates --r -1", dir / "e3.txt") == 1);
        CHECK(run_cli("sweep-time --initial bell1 --r 0.5 --gt-max -2", dir / "e4.txt") == 1);
    }
    SECTION("help exits 0") {
        CHECK(run_cli("--help", dir / "e5.txt") == 0);
    }
    SECTION("engine cross-check failure exits 2") {
        // a deliberately coarse fixed step passes the local probe (huge tol)
        // but drifts far from the closed form over a full unit of time
        CHECK(run_cli("evolve --initial bell0 --r 0.6737 --gt-max 1 --samples 3 "
                      "--engine both --dt 0.005 --tol 1000",
                      dir / "e6.txt") == 2);
    }
    SECTION("a step too coarse for omega0 is refused with exit 1") {
        CHECK(run_cli("evolve --initial bell0 --r 0.6737 --gt-max 1 --samples 3 "
                      "--engine integrator --dt 0.05",
                      dir / "e7.txt") == 1);
        CHECK(slurp(dir / "e7.txt.err").find("too coarse") != std::string::npos);
    }
}

TEST_CASE("key=value config files, flags win on conflict") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "[sweep-time]\n"
          << "initial=bell1\n"
          << "r=0.6737\n"
          << "gt-max=1.0\n"
          << "samples=5\n";
    }
    REQUIRE(run_cli("sweep-time --config " + cfg.string(), dir / "cfg_a.csv") == 0);
    const std::string a = slurp(dir / "cfg_a.csv");
    CHECK(a.find("# samples = 5") != std::string::npos);

    // command line overrides the file
    REQUIRE(run_cli("sweep-time --config " + cfg.string() + " --samples 3",
                    dir / "cfg_b.csv") == 0);
    const std::string b = slurp(dir / "cfg_b.csv");
    CHECK(b.find("# samples = 3") != std::string::npos);

    // equivalent flag-only run is byte-identical
    REQUIRE(run_cli("sweep-time --initial bell1 --r 0.6737 --gt-max 1.0 --samples 5",
                    dir / "cfg_c.csv") == 0);
    CHECK(a == slurp(dir / "cfg_c.csv"));
}

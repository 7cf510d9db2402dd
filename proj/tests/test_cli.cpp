// End-to-end tests of the command-line binary: exit-code contract, output
// determinism, and the documented flag surface.  The binary path arrives via
// the BLINDPOL_CLI_PATH compile definition.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const std::string kCli = BLINDPOL_CLI_PATH;

// Scratch directory, fresh per test case, removed on destruction.
struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("blindpol_cli_test_" + std::to_string(++counter));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Runs the binary with the given arguments; stdout lands in stdout_path (or
// the void), stderr is discarded.  Returns the process exit code.
int run_cli(const std::string& args, const std::string& stdout_path = "") {
    std::string cmd = kCli + " " + args;
    cmd += " > " + (stdout_path.empty() ? std::string("/dev/null") : stdout_path);
    cmd += " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

    TEST_CASE("help exits cleanly") {
        CHECK(run_cli("--help") == 0);
        CHECK(run_cli("session --help") == 0);
    }

    TEST_CASE("bound: single-point sweep prints the analytic row") {
        TempDir dir;
        const std::string out = dir.file("bound.csv");
        CHECK(run_cli("bound --grid 2.83:2.83:1 --eta2 0.5 --attack pns1", out) == 0);
        const std::string text = slurp(out);
        CHECK(text.rfind("attack,eta2,alpha,i_a2,i_a3,i_a4,i_e\n", 0) == 0);
        CHECK(text.find("pns1,0.5,2.83,") != std::string::npos);
        CHECK(text.find("0.6901826975") != std::string::npos);
    }

    TEST_CASE("bound: default grid covers both attacks and four efficiencies") {
        TempDir dir;
        const std::string out = dir.file("grid.csv");
        CHECK(run_cli("bound --grid 0:1:0.5 --out " + out) == 0);
        const std::string text = slurp(out);
        // header + 2 attacks * 4 eta2 * 3 alphas
        std::size_t lines = 0;
        for (char c : text) lines += c == '\n';
        CHECK(lines == 1 + 2 * 4 * 3);
        CHECK(text.find("pns1,") != std::string::npos);
        CHECK(text.find("pns2,") != std::string::npos);
    }

    TEST_CASE("session: honest run verifies with exit 0 and writes a transcript") {
        TempDir dir;
        const std::string transcript = dir.file("t.txt");
        const std::string summary = dir.file("s.txt");
        CHECK(run_cli("session --bits 64 --seed 7 --out " + transcript, summary) == 0);
        const std::string text = slurp(transcript);
        CHECK(text.rfind("format=blindpol-transcript-1\n", 0) == 0);
        CHECK(text.find("verified=1\n") != std::string::npos);
        CHECK(slurp(summary).find("verified=1") != std::string::npos);
    }

    TEST_CASE("session: transcripts replay byte-identically per seed") {
        TempDir dir;
        const std::string a = dir.file("a.txt");
        const std::string b = dir.file("b.txt");
        const std::string c = dir.file("c.txt");
        const std::string args = "session --bits 32 --mode two-pulse --eta2 0.8 --seed 99";
        CHECK(run_cli(args + " --out " + a) == 0);
        CHECK(run_cli(args + " --out " + b) == 0);
        CHECK(run_cli("session --bits 32 --mode two-pulse --eta2 0.8 --seed 100 --out " + c)
              == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK(slurp(a) != slurp(c));
    }

    TEST_CASE("session: intercept-resend is detected with the mismatch exit code") {
        TempDir dir;
        const std::string summary = dir.file("s.txt");
        CHECK(run_cli("session --bits 256 --attack intercept-resend --seed 3", summary) == 4);
        CHECK(slurp(summary).find("verified=0") != std::string::npos);
    }

    TEST_CASE("session: blind two-pulse impersonation fails the hash check") {
        CHECK(run_cli("session --bits 64 --mode two-pulse --attack impersonation --seed 5")
              == 4);
        // the diagnostic mode restores agreement
        CHECK(run_cli("session --bits 64 --mode two-pulse --attack impersonation "
                      "--knows-secrets --seed 5") == 0);
    }

    TEST_CASE("session: an opaque channel aborts with the runtime exit code") {
        CHECK(run_cli("session --bits 10 --eta2 0.01 --seed 1") == 1);
    }

    TEST_CASE("attack-mc: produces the comparison CSV") {
        TempDir dir;
        const std::string out = dir.file("mc.csv");
        CHECK(run_cli("attack-mc --attack pns2 --eta2 0.5 --alpha 1 --rounds 2000 --seed 9"
                      " --out " + out) == 0);
        const std::string text = slurp(out);
        CHECK(text.rfind("attack,eta2,alpha,rounds,seed,", 0) == 0);
        CHECK(text.find("pns2,0.5,1,2000,9,") != std::string::npos);
    }

    TEST_CASE("usage errors exit with code 2") {
        CHECK(run_cli("") == 2);                            // missing subcommand
        CHECK(run_cli("frobnicate") == 2);                  // unknown subcommand
        CHECK(run_cli("session --no-such-flag") == 2);      // unknown flag
        CHECK(run_cli("session --mode half-duplex") == 2);  // bad enum value
        CHECK(run_cli("session --attack pns1") == 2);       // pns needs --alpha > 0
        CHECK(run_cli("session --eta2 1.5") == 2);          // out-of-range efficiency
        CHECK(run_cli("bound --grid nonsense") == 2);       // malformed grid
        CHECK(run_cli("bound --eta2 0") == 2);              // out-of-range efficiency
        CHECK(run_cli("attack-mc --attack intercept-resend") == 2);  // no analytic bound
        CHECK(run_cli("attack-mc --rounds 0") == 2);        // empty experiment
    }

    TEST_CASE("unwritable output path exits with the I/O code") {
        CHECK(run_cli("bound --grid 0:1:1 --out /nonexistent-dir/x.csv") == 3);
        CHECK(run_cli("session --bits 8 --seed 2 --out /nonexistent-dir/t.txt") == 3);
    }
}

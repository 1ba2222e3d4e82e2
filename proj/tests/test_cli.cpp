#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef DFIX_CLI_PATH
#error "DFIX_CLI_PATH must point at the dfix executable"
#endif

namespace fs = std::filesystem;

namespace {

/// Runs the CLI with the given arguments, capturing stdout+stderr into
/// `log`, and returns the process exit code.
int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(DFIX_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return (rc >> 8) & 0xff;  // POSIX wait status -> exit code
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("dfix_cli_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

void write_file(const fs::path& file, const std::string& text) {
    std::ofstream out(file);
    out << text;
}

}  // namespace

TEST_CASE("cli: help and argument errors") {
    ScratchDir dir("args");
    const fs::path log = dir.path / "log.txt";
    CHECK(run_cli("--help", log) == 0);
    CHECK(slurp(log).find("Usage") != std::string::npos);
    CHECK(run_cli("", log) == 2);                  // a subcommand is required
    CHECK(run_cli("frobnicate", log) == 2);
    CHECK(run_cli("run", log) == 2);               // missing config argument
}

TEST_CASE("cli: validate accepts good configs and rejects bad ones") {
    ScratchDir dir("validate");
    const fs::path log = dir.path / "log.txt";

    const fs::path good = dir.path / "good.cfg";
    write_file(good, "experiment = method-compare-sdd\nseed = 11\nn = 12\nm = 4\n");
    CHECK(run_cli("validate " + good.string(), log) == 0);
    const std::string printed = slurp(log);
    CHECK(printed.find("experiment = method-compare-sdd") != std::string::npos);
    CHECK(printed.find("seed = 11") != std::string::npos);

    const fs::path bad = dir.path / "bad.cfg";
    write_file(bad, "experiment = method-compare-sdd\nm = 3\n");
    CHECK(run_cli("validate " + bad.string(), log) == 2);
    CHECK(slurp(log).find("config error") != std::string::npos);

    CHECK(run_cli("validate " + (dir.path / "missing.cfg").string(), log) == 2);
}

TEST_CASE("cli: run executes a config and writes its outputs") {
    ScratchDir dir("run");
    const fs::path log = dir.path / "log.txt";
    const fs::path cfg = dir.path / "tiny.cfg";
    write_file(cfg,
               "experiment = method-compare-sdd\nseed = 4\nn = 12\nm = 4\n"
               "repetitions = 1\nmethods = dfix-jor\n");

    const fs::path out = dir.path / "out";
    CHECK(run_cli("run " + cfg.string() + " --out-dir " + out.string(), log) == 0);
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "trace_method-compare-sdd_dfix-jor_m4_rep0.csv"));
    CHECK(slurp(log).find("summary: ") != std::string::npos);

    // Same config, starved of iterations: runs fine but reports non-convergence.
    const fs::path capped = dir.path / "capped.cfg";
    write_file(capped,
               "experiment = method-compare-sdd\nseed = 4\nn = 12\nm = 4\n"
               "repetitions = 1\nmethods = dfix-jor\nmax_iter = 3\n");
    CHECK(run_cli("run " + capped.string() + " --out-dir " + (dir.path / "out2").string(),
                  log) == 1);

    CHECK(run_cli("run " + (dir.path / "missing.cfg").string(), log) == 2);
}

TEST_CASE("cli: demo subcommand runs the scaled-down experiments") {
    ScratchDir dir("demo");
    const fs::path log = dir.path / "log.txt";
    const fs::path out = dir.path / "out";
    CHECK(run_cli("demo method-compare-sdd --out-dir " + out.string(), log) == 0);
    CHECK(fs::exists(out / "summary.csv"));
    const std::string printed = slurp(log);
    CHECK(printed.find("experiment = method-compare-sdd") != std::string::npos);

    CHECK(run_cli("demo warp-drive --out-dir " + out.string(), log) == 2);
}

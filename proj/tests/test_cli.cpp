#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("quadla_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    std::string read(const std::string& name) const {
        std::ifstream in(path(name));
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }
};

/// Runs the CLI with stdout to `out` (inside the workspace) and stderr
/// discarded; returns the exit status.
int run(const Workspace& w, const std::string& args, const std::string& out = "stdout.txt") {
    const std::string cmd = std::string(QUADLA_CLI_PATH) + " " + args + " > " + w.path(out) + " 2> " + w.path("stderr.txt");
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

const char* swap_q = "ring q\nsize 2\n0 1\n1 0\n";

} // namespace

TEST_CASE("cli: inversion methods and exit codes") {
    Workspace w;
    const auto m = w.write("swap.txt", swap_q);
    CHECK(run(w, "invert --method gram " + m) == 0);
    CHECK(w.read("stdout.txt") == swap_q);
    CHECK(run(w, "invert --method schur " + m) == 4);
    CHECK(run(w, "invert --method auto " + m) == 0);

    const auto f2 = w.write("f2.txt", "ring gf:2\nsize 2\n1 1\n1 0\n");
    CHECK(run(w, "invert --method gv " + f2) == 0);
    CHECK(w.read("stdout.txt") == "ring gf:2\nsize 2\n0 1\n1 1\n");

    const auto zero = w.write("zero.txt", "ring q\nsize 2\n0 0\n0 0\n");
    CHECK(run(w, "invert " + zero) == 3);
    CHECK(run(w, "lu " + zero) == 3);

    const auto bad = w.write("bad.txt", "ring q\nsize 2\n1 x\n0 1\n");
    CHECK(run(w, "invert " + bad) == 2);
    CHECK(run(w, "invert --method nope " + m) == 2);
    CHECK(run(w, "frobnicate") == 2);

    // non-power-of-two input is padded and the inverse truncated
    const auto three = w.write("three.txt", "ring q\nsize 3\n2 0 0\n0 1 1\n0 0 1\n");
    CHECK(run(w, "invert " + three, "three_inv.txt") == 0);
    CHECK(w.read("three_inv.txt") == "ring q\nsize 3\n1/2 0 0\n0 1 -1\n0 0 1\n");
    CHECK(run(w, "check --kind inverse " + three + " " + w.path("three_inv.txt")) == 0);
}

TEST_CASE("cli: gen is reproducible") {
    Workspace w;
    CHECK(run(w, "gen --ring gf:7 --size 8 --seed 3", "a.txt") == 0);
    CHECK(run(w, "gen --ring gf:7 --size 8 --seed 3", "b.txt") == 0);
    CHECK(w.read("a.txt") == w.read("b.txt"));
    CHECK(w.read("a.txt").rfind("ring gf:7\nsize 8\n", 0) == 0);
    CHECK(run(w, "gen --ring gf:7 --size 8 --seed 4", "c.txt") == 0);
    CHECK(w.read("a.txt") != w.read("c.txt"));
    CHECK(run(w, "gen --ring q --size 300") == 2);
    CHECK(run(w, "gen --ring q --size 2 --all-blocks-singular") == 2);
    CHECK(run(w, "gen --ring q --size 4 --invertible --all-blocks-singular") == 0);
}

TEST_CASE("cli: gen | invert | check") {
    Workspace w;
    for (const std::string ring : {"q", "gf:7", "gf:2", "qi", "quat"})
        for (int seed = 1; seed <= 3; ++seed) {
            CAPTURE(ring, seed);
            REQUIRE(run(w, "gen --invertible --ring " + ring + " --size 4 --seed " + std::to_string(seed), "m.txt") == 0);
            REQUIRE(run(w, "invert --method auto " + w.path("m.txt"), "inv.txt") == 0);
            CHECK(run(w, "check --kind inverse " + w.path("m.txt") + " " + w.path("inv.txt")) == 0);
        }
    REQUIRE(run(w, "gen --all-blocks-singular --ring q --size 8 --seed 2", "abs.txt") == 0);
    CHECK(run(w, "invert --method schur " + w.path("abs.txt")) == 4);
    REQUIRE(run(w, "invert --method gram " + w.path("abs.txt"), "abs_inv.txt") == 0);
    CHECK(run(w, "check --kind inverse " + w.path("abs.txt") + " " + w.path("abs_inv.txt")) == 0);
}

TEST_CASE("cli: gen | lu | check") {
    Workspace w;
    for (const std::string ring : {"q", "gf:7", "gf:101", "qi"})
        for (int seed = 1; seed <= 3; ++seed) {
            CAPTURE(ring, seed);
            REQUIRE(run(w, "gen --invertible --ring " + ring + " --size 8 --seed " + std::to_string(seed), "m.txt") == 0);
            REQUIRE(run(w, "lu " + w.path("m.txt") + " --lower " + w.path("l.txt") + " --upper " + w.path("u.txt") +
                               " --perms " + w.path("p.txt")) == 0);
            CHECK(run(w, "check --kind pluq " + w.path("m.txt") + " " + w.path("l.txt") + " " + w.path("u.txt") + " " +
                             w.path("p.txt")) == 0);
        }

    const auto m = w.write("m.txt", "ring q\nsize 2\n1 2\n3 4\n");
    REQUIRE(run(w, "lu " + m) == 0);
    CHECK(w.read("stdout.txt") ==
          "ring q\nsize 2\n1 0\n3 1\nring q\nsize 2\n1 2\n0 -2\nperm-rows 1 2\nperm-cols 1 2\n");
}

TEST_CASE("cli: check reports the first failing entry") {
    Workspace w;
    const auto m = w.write("m.txt", "ring q\nsize 2\n1 2\n3 4\n");
    const auto good = w.write("good.txt", "ring q\nsize 2\n-2 1\n3/2 -1/2\n");
    const auto bad = w.write("bad.txt", "ring q\nsize 2\n-2 1\n3/2 1/2\n");
    CHECK(run(w, "check --kind inverse " + m + " " + good) == 0);
    CHECK(run(w, "check --kind inverse " + m + " " + bad) == 1);
    CHECK(w.read("stdout.txt").find("FAIL") != std::string::npos);
    CHECK(w.read("stdout.txt").find("(1, 2)") != std::string::npos);
    CHECK(run(w, "check --kind inverse " + m) == 2);

    REQUIRE(run(w, "ldu " + m + " --lower " + w.path("lb.txt") + " --diag " + w.path("db.txt") + " --upper " +
                    w.path("ub.txt")) == 0);
    CHECK(w.read("db.txt") == "ring q\nsize 2\n1 0\n0 -2\n");
    CHECK(run(w, "check --kind ldu " + m + " " + w.path("lb.txt") + " " + w.path("db.txt") + " " + w.path("ub.txt")) == 0);
    CHECK(run(w, "ldu " + w.write("swap.txt", swap_q)) == 4);
}

TEST_CASE("cli: verify-counts") {
    Workspace w;
    REQUIRE(run(w, "verify-counts --op tri_mul --sizes 2,4,8,16 --format lines") == 0);
    CHECK(w.read("stdout.txt") ==
          "tri_mul 2 6 6 6 yes\ntri_mul 4 40 40 40 yes\ntri_mul 8 288 288 288 yes\ntri_mul 16 2176 2176 2176 yes\n");
    REQUIRE(run(w, "verify-counts --op gram_inv --sizes 2,4,8 --format lines") == 0);
    CHECK(w.read("stdout.txt") == "gram_inv 2 22 22 22 yes\ngram_inv 4 204 204 204 yes\ngram_inv 8 1688 1688 1688 yes\n");
    REQUIRE(run(w, "verify-counts --op tri_inv --sizes 2,4") == 0);
    const auto table = w.read("stdout.txt");
    CHECK(table.find("recurrence-only") != std::string::npos);
    CHECK(table.find("n(n+1)/2") != std::string::npos);
    CHECK(run(w, "verify-counts --op lu --sizes 2,4,8") == 0);
    CHECK(w.read("stdout.txt").find("T_LU(1)=1") != std::string::npos);
    CHECK(run(w, "verify-counts --op mul --sizes 3") == 2);
}

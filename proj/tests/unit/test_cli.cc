#include "fixtures.h"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace std;
using namespace plexplain::testing;

namespace {
struct Run {
    int code;
    string out;
};

Run run(const string &args) {
    string command = string(PLEXPLAIN_CLI) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(command.c_str(), "r");
    REQUIRE(pipe);
    string out;
    char buffer[4096];
    size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0)
        out.append(buffer, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

string rover_args() {
    return "--domain " + data_path("minirover/domain.pddl") + " --problem " +
           data_path("minirover/problem.pddl");
}
}

TEST_CASE("cli explain") {
    Run r = run("explain " + rover_args() + " --lattice " + data_path("minirover/lattice.json") +
                " --format json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"at_l2\"") != string::npos);
    Run human = run("explain " + rover_args() + " --lattice " +
                    data_path("minirover/lattice.json"));
    CHECK(human.out.find("rocks") != string::npos);
}

TEST_CASE("cli exit codes") {
    CHECK(run("check " + rover_args()).code == 0);
    CHECK(run("explain " + rover_args() + " --lattice /nonexistent.json").code == 2);
    CHECK(run("check --domain /nonexistent --problem /nonexistent").code == 2);
    CHECK(run("check " + rover_args() + " --node-budget 0").code == 3);
    CHECK(run("landmarks " + rover_args()).code == 2);
}

TEST_CASE("cli compile-advice and lattice") {
    auto dir = filesystem::temp_directory_path() / "plexplain-cli-test";
    filesystem::create_directories(dir);
    Run c = run("compile-advice " + rover_args() + " --advice " +
                data_path("minirover/never-move-l1-l2.json") + " --out " +
                (dir / "c.pddl").string());
    CHECK(c.code == 0);
    CHECK(filesystem::exists(dir / "c.pddl"));
    CHECK(filesystem::exists(dir / "c-problem.pddl"));
    Run checked = run("check --domain " + (dir / "c.pddl").string() + " --problem " +
                      (dir / "c-problem.pddl").string());
    CHECK(checked.code == 0);
    CHECK(checked.out.find("unsolvable") != string::npos);
    Run lat = run("lattice " + rover_args() + " --lattice " +
                  data_path("minirover/lattice.json"));
    CHECK(lat.out.find("{rocks}\t5\tyes") != string::npos);
    CHECK(lat.out.find("{}\t7\tno") != string::npos);
    filesystem::remove_all(dir);
}

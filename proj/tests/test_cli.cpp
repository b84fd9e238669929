#include <doctest.h>

#include <array>
#include <cstdio>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(TODKIT_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(TODKIT_DATA) + "/" + name; }

}  // namespace

TEST_CASE("build writes a grid") {
    const Run r = run("build " + data("eguchi_hanson.json"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("rho,zeta,W,F,e2nu,z,lambda\n", 0) == 0);
    size_t lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 401);
    CHECK(run("build " + data("eguchi_hanson.json") + " --grid 3x4").out.size() < r.out.size());
    CHECK(run("build " + data("single_nut.json")).code == 1);
    CHECK(run("build " + data("positive_c.json")).code == 2);
    CHECK(run("build " + data("eguchi_hanson.json") + " --grid axb").code == 2);
}

TEST_CASE("verify exit codes") {
    const Run ok = run("verify " + data("eguchi_hanson.json"));
    CHECK(ok.code == 0);
    const auto j = nlohmann::json::parse(ok.out);
    CHECK(j["status"] == "pass");
    CHECK(run("verify " + data("perturbed.json") + " --suite rods").code == 1);
    CHECK(run("verify " + data("single_nut.json") + " --suite fields").code == 1);
    CHECK(run("verify /nonexistent.json").code == 2);
    CHECK(run("verify " + data("eguchi_hanson.json") + " --suite bogus").code == 2);
}

TEST_CASE("reports are deterministic") {
    const std::string a = run("verify " + data("eguchi_hanson.json")).out;
    CHECK(a == run("verify " + data("eguchi_hanson.json")).out);
    const std::string s = run("pd scan --case ii --samples 300 --seed 5").out;
    CHECK(s == run("pd scan --case ii --samples 300 --seed 5").out);
}

TEST_CASE("classify and pd") {
    const Run c = run("classify --nmax 4");
    CHECK(c.code == 0);
    const auto j = nlohmann::json::parse(c.out);
    CHECK(j["admissible"].size() == 1);
    CHECK(run("pd check --roots 0.2,0.4,2.0,6.25").code == 0);
    CHECK(run("pd check --roots 0.2,0.4,2.0,7").code == 2);
    CHECK(run("pd selfdual --roots 0.5,0.8,1.25,2").code == 0);
    CHECK(run("pd scan --case i --samples 200 --seed 1").code == 0);
    CHECK(run("pd scan --case iii --samples 200 --seed 1").code == 1);
    CHECK(run("pd ale --roots 0.2,0.4,2.0,6.25 --r 100").code == 0);
    CHECK(run("nonsense").code == 2);
}

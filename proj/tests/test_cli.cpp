#include <doctest.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "oracle.hpp"
#include "spencer/cli.hpp"

using namespace spencer;
using nlohmann::json;

#ifndef SPENCER_CLI
#define SPENCER_CLI "spencer"
#endif

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
    json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const char* name) { return std::string(SPENCER_DATA_DIR) + "/" + name + ".spd"; }

// stdout and exit status of the installed binary
std::pair<int, std::string> shell(const std::string& args) {
    std::string cmd = std::string(SPENCER_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

bool has_cell(const json& cells, int i, int j, int dim) {
    for (const auto& c : cells)
        if (c["i"] == i && c["j"] == j) return c["dim"] == dim;
    return false;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("analyze example 1") {
        auto r = run({"analyze", data("ex1"), "--format", "json"});
        REQUIRE(r.code == kExitOk);
        auto d = r.doc();
        CHECK(d["involutive"] == false);
        CHECK(has_cell(d["cohomology"], 1, 1, 2));
        CHECK(has_cell(d["cohomology"], 2, 1, 1));
        CHECK(has_cell(d["cohomology"], 2, 2, 1));
        // H^{0,0} = g_0 = N
        CHECK(has_cell(d["cohomology"], 0, 0, 2));
        auto eqs = oracle::golden("ex1");
        for (const auto& c : d["cohomology"]) {
            int i = c["i"], j = c["j"];
            if (i <= 4) CHECK(c["dim"] == oracle::cohomology(eqs, i, j));
        }
        CHECK(d["orders"] == json::array({2, 3}));
        CHECK(d["seed"] == 0);
        CHECK(d["cap"] == 8);
        for (auto key : {"orders", "multiplicities", "cohomology", "involutive", "char", "thm1", "thm2", "e1", "seed", "cap"})
            CHECK_MESSAGE(d.contains(key), key);
    }

    TEST_CASE("theorem 2 on the wave equation") {
        auto r = run({"verify", "thm2", data("wave"), "--vstar", "dx, dy", "--field", "qi", "--format", "json"});
        REQUIRE(r.code == kExitOk);
        auto t = r.doc()["thm2"];
        CHECK(t["equivalence_holds"] == true);
        CHECK(t["covector"] == "dx + dy");
        CHECK(t["pencil"]["gcd"] == "t^2 - 1");
    }

    TEST_CASE("restriction of so(2)") {
        auto r = run({"restrict", data("so2"), "--w", "@y", "--format", "json"});
        REQUIRE(r.code == kExitOk);
        auto g = r.doc()["restriction"];
        CHECK(g["dims"][0] == 2);
        CHECK(g["dims"][1] == 1);
        for (std::size_t k = 2; k < g["dims"].size(); ++k) CHECK(g["dims"][k] == 0);
        CHECK(g["orders"] == json::array({1, 2}));
        auto same = run({"restrict", data("so2"), "--vstar", "dx", "--format", "json"}).doc()["restriction"];
        CHECK(same["dims"] == g["dims"]);
    }

    TEST_CASE("laplace covectors are complex") {
        auto qi = run({"char", data("laplace"), "--vstar", "dx, dy", "--field", "qi", "--format", "json"}).doc();
        auto cov = qi["char"][0]["pencil"]["covectors"];
        CHECK(cov == json::array({"dx + i dy", "dx - i dy"}));
        auto q = run({"char", data("laplace"), "--vstar", "dx, dy", "--field", "q", "--format", "json"}).doc();
        CHECK(q["char"][0]["pencil"]["covectors"].empty());
    }

    TEST_CASE("other subcommands") {
        auto red = run({"reduce", data("uxy"), "--order", "2", "--format", "json"});
        REQUIRE(red.code == kExitOk);
        CHECK(red.doc()["reduction"]["nu"] == 2);
        CHECK(red.doc()["reduction"]["involutive"] == true);

        auto e1 = run({"e1table", data("ex7"), "--vstar", "2dx - 3dy + 5dz", "--format", "json"});
        REQUIRE(e1.code == kExitOk);
        bool l3 = false;
        auto table = e1.doc();
        for (const auto& c : table["e1"])
            if (c["l"] == 3 && c["p"] == 0 && c["q"] == 1) l3 = c["e1"] == 2 && c["d1_rank"] == 2 && c["e2"] == 0;
        CHECK(l3);

        auto thm1 = run({"verify", "thm1", data("uz"), "--vstar", "dz", "--format", "json"});
        REQUIRE(thm1.code == kExitOk);
        CHECK(thm1.doc()["thm1"]["mismatches"] == 0);
        CHECK(thm1.doc()["thm1"]["hypotheses"]["met"] == true);

        auto cor = run({"verify", "corollary", data("uz"), "--vstar", "dz", "--format", "json"});
        REQUIRE(cor.code == kExitOk);
        CHECK(cor.doc()["corollary"]["failures"] == 0);

        auto inv = run({"involutive", data("ex2"), "--format", "json"});
        CHECK(inv.doc()["involutive"] == true);

        auto des = run({"descend", data("frobenius"), "--format", "json"});
        REQUIRE(des.code == kExitOk);
        CHECK(des.doc()["descent"]["dims"][0] == 0);

        auto acy = run({"restrict", data("uz"), "--vstar", "dz", "--m", "1", "--format", "json"});
        REQUIRE(acy.code == kExitOk);
        CHECK(acy.doc().contains("acyclicity_transfer"));
    }

    TEST_CASE("exit codes") {
        auto missing = run({"analyze", "/nonexistent.spd", "--format", "json"});
        CHECK(missing.code == kExitArgs);
        CHECK(missing.doc()["exit_code"] == kExitArgs);

        auto zero_cap = run({"analyze", data("ex1"), "--max-degree", "0"});
        CHECK(zero_cap.code == kExitArgs);
        CHECK(run({}).code == kExitArgs);
        CHECK(run({"bogus"}).code == kExitArgs);
        CHECK(run({"verify", "thm1", data("uz")}).code == kExitArgs);
        CHECK(run({"restrict", data("uz"), "--vstar", "dx, 2dx"}).code == kExitArgs);
        CHECK(run({"analyze", data("ex1"), "--format", "yaml"}).code == kExitArgs);

        auto cap = run({"analyze", data("ex1"), "--max-degree", "2", "--format", "json"});
        CHECK(cap.code == kExitCap);
        CHECK(cap.doc()["error"]["kind"].is_string());

        auto bad_vstar = run({"char", data("uz"), "--vstar", "dq", "--format", "json"});
        CHECK(bad_vstar.code == kExitParse);
    }

    TEST_CASE("parse errors are positioned in both formats") {
        const std::string path = "/tmp/spencer_cli_test_bad.spd";
        {
            std::FILE* f = std::fopen(path.c_str(), "w");
            REQUIRE(f != nullptr);
            std::fputs("vars x y\nunknowns u\neq u_xy + q_x = 0\n", f);
            std::fclose(f);
        }
        auto j = run({"analyze", path, "--format", "json"});
        CHECK(j.code == kExitParse);
        auto e = j.doc()["error"];
        CHECK(e["line"] == 3);
        CHECK(e["column"] == 11);
        CHECK(e["token"] == "q");
        auto t = run({"analyze", path});
        CHECK(t.code == kExitParse);
        CHECK(t.out.empty());
        CHECK(t.err.find("3:11") != std::string::npos);
        std::remove(path.c_str());
    }

    TEST_CASE("text output") {
        auto r = run({"analyze", data("so2")});
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.find("orders: 1\n") != std::string::npos);
        CHECK(r.out.find("  - i=1  j=2  dim=1\n") != std::string::npos);
        CHECK(r.out.find("null") == std::string::npos);
    }

    TEST_CASE("json output is deterministic") {
        std::vector<std::vector<std::string>> cmds{
            {"analyze", data("ex2"), "--format", "json", "--seed", "7"},
            {"verify", "thm1", data("ex7"), "--vstar", "2dx - 3dy + 5dz", "--format", "json"},
            {"char", data("wave"), "--vstar", "dx, dy", "--field", "qi", "--format", "json"},
            {"e1table", data("ex7"), "--vstar", "dx + dz", "--format", "json", "--seed", "3"}};
        for (const auto& c : cmds) {
            auto a = run(c), b = run(c);
            CHECK(a.code == kExitOk);
            CHECK(a.out == b.out);
        }
        std::string args = "analyze " + data("ex2") + " --format json --seed 7";
        auto [c1, o1] = shell(args);
        auto [c2, o2] = shell(args);
        CHECK(c1 == 0);
        CHECK(o1 == o2);
        CHECK(o1 == run(cmds[0]).out);
        CHECK(json::parse(o1)["seed"] == 7);
    }

    TEST_CASE("golden files run end to end through the binary") {
        for (auto name : {"ex1", "ex2", "so2", "wave", "laplace", "ex6", "ex7", "uz", "uxy", "frobenius", "cauchy_riemann"}) {
            auto start = std::chrono::steady_clock::now();
            auto [code, out] = shell("analyze " + data(name) + " --format json");
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            CHECK_MESSAGE(code == 0, name);
            CHECK_MESSAGE(secs < 10.0, name);
            auto d = json::parse(out);
            CHECK(d["input"]["equations"].size() == oracle::golden(name).equations.size());
        }
        auto [code, out] = shell("verify thm2 " + data("wave") + " --vstar \"dx, dy\" --field qi");
        CHECK(code == 0);
        CHECK(out.find("covector: dx + dy") != std::string::npos);
        CHECK(shell("analyze /nonexistent.spd").first == kExitArgs);
    }
}

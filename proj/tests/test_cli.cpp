#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "yamabe/graph.hpp"
#include "yamabe/instance_io.hpp"

using nlohmann::json;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run(const std::string& args) {
    std::string cmd = std::string(YAMABE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_golden_instance() {
    std::string path = "cli_golden_instance.json";
    std::ofstream f(path);
    f << R"({"p":2,"alpha":2,"mu":[1,1],"h":[1,0],"f":[1,1],"edges":[[0,1,1]]})";
    return path;
}

}  // namespace

TEST_CASE("solve produces a converged record with the golden beta") {
    std::string inst = write_golden_instance();
    CmdResult r = run("solve " + inst + " --seed 1");
    REQUIRE(r.exit_code == 0);
    json rec = json::parse(r.out);
    CHECK(rec["result"]["converged"].get<bool>());
    CHECK(std::abs(rec["result"]["beta"].get<double>() - (1.0 - std::sqrt(5.0)) / 2.0) <= 1e-7);
    CHECK(std::abs(rec["result"]["lambda"].get<double>() - (std::sqrt(5.0) - 1.0) / 2.0) <= 1e-7);
    CHECK(rec.contains("wall_time_ms"));
    std::remove(inst.c_str());
}

TEST_CASE("solve is byte-deterministic modulo wall time") {
    std::string inst = write_golden_instance();
    CmdResult a = run("solve " + inst + " --seed 1");
    CmdResult b = run("solve " + inst + " --seed 1");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    json ja = json::parse(a.out);
    json jb = json::parse(b.out);
    ja.erase("wall_time_ms");
    jb.erase("wall_time_ms");
    CHECK(ja.dump() == jb.dump());
    std::remove(inst.c_str());
}

TEST_CASE("solve rejects a disconnected instance with exit 1") {
    std::string path = "cli_disconnected.json";
    {
        std::ofstream f(path);
        f << R"({"p":2,"alpha":2,"mu":[1,1],"h":[0,0],"f":[1,1],"edges":[]})";
    }
    CmdResult r = run("solve " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("connected") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("verify round trip and failure modes") {
    std::string inst = write_golden_instance();
    CmdResult solved = run("solve " + inst + " --seed 1 -o cli_solution.json");
    REQUIRE(solved.exit_code == 0);

    CmdResult ok = run("verify " + inst + " cli_solution.json");
    CHECK(ok.exit_code == 0);
    json rec = json::parse(ok.out);
    CHECK(rec["pass"].get<bool>());
    CHECK(rec["positive"].get<bool>());

    // Negate one entry: positivity violation.
    {
        json sol = json::parse(std::ifstream("cli_solution.json"));
        sol["phi"][0] = -sol["phi"][0].get<double>();
        std::ofstream out("cli_solution_bad.json");
        out << sol.dump();
    }
    CmdResult bad = run("verify " + inst + " cli_solution_bad.json");
    CHECK(bad.exit_code != 0);
    CHECK_FALSE(json::parse(bad.out)["positive"].get<bool>());

    // Malformed solution file.
    {
        std::ofstream out("cli_solution_bad.json");
        out << "{broken";
    }
    CHECK(run("verify " + inst + " cli_solution_bad.json").exit_code == 1);

    std::remove(inst.c_str());
    std::remove("cli_solution.json");
    std::remove("cli_solution_bad.json");
}

TEST_CASE("verify accepts the constant solution of h = 2f") {
    std::string path = "cli_const.json";
    {
        std::ofstream f(path);
        f << R"({"p":2,"alpha":3,"mu":[1,1],"h":[2,4],"f":[1,2],"edges":[[0,1,1]]})";
    }
    {
        std::ofstream f("cli_const_sol.json");
        f << R"({"phi":[1,1],"lambda":2})";
    }
    CHECK(run("verify " + path + " cli_const_sol.json --tol 1e-12").exit_code == 0);
    std::remove(path.c_str());
    std::remove("cli_const_sol.json");
}

TEST_CASE("gen writes a valid, reproducible instance") {
    CmdResult r = run("gen random_connected 10 --seed 7 --weights uniform:0.5,2 "
                      "--p 2.5 --alpha 4 --h uniform:-1,1 --f uniform:0.5,2 -o cli_gen.json");
    REQUIRE(r.exit_code == 0);
    yamabe::ProblemInstance a = yamabe::read_instance("cli_gen.json");
    CHECK(a.graph.vertex_count() == 10);
    CHECK(a.graph.is_connected());

    CmdResult r2 = run("gen random_connected 10 --seed 7 --weights uniform:0.5,2 "
                       "--p 2.5 --alpha 4 --h uniform:-1,1 --f uniform:0.5,2 -o cli_gen2.json");
    REQUIRE(r2.exit_code == 0);
    std::stringstream s1, s2;
    s1 << std::ifstream("cli_gen.json").rdbuf();
    s2 << std::ifstream("cli_gen2.json").rdbuf();
    CHECK(s1.str() == s2.str());
    std::remove("cli_gen.json");
    std::remove("cli_gen2.json");

    CHECK(run("gen cycle 2 -o cli_gen.json").exit_code == 1);
}

TEST_CASE("sweep") {
    CmdResult r = run("sweep --gen complete:3 --p 2 --alpha 2,3,4 -o cli_sweep.csv");
    REQUIRE(r.exit_code == 0);
    std::ifstream csv("cli_sweep.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "instance,p,alpha,beta,lambda,residual_inf,iterations,converged");
    int rows = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.find("complete:3") == 0);
        CHECK(line.rfind(",true") == line.size() - 5);
    }
    CHECK(rows == 3);
    std::remove("cli_sweep.csv");

    SUBCASE("alpha < p pairs are rejected before any solve") {
        CmdResult bad = run("sweep --gen complete:3 --p 3 --alpha 2,3 -o cli_sweep.csv");
        CHECK(bad.exit_code == 1);
        CHECK(bad.out.find("alpha >= p") != std::string::npos);
    }

    SUBCASE("empty p list yields a header-only CSV") {
        CmdResult empty = run("sweep --gen complete:3 --alpha 2,3 -o cli_sweep.csv");
        CHECK(empty.exit_code == 0);
        std::ifstream out("cli_sweep.csv");
        std::string header, rest;
        std::getline(out, header);
        CHECK(header == "instance,p,alpha,beta,lambda,residual_inf,iterations,converged");
        CHECK_FALSE(static_cast<bool>(std::getline(out, rest)));
        std::remove("cli_sweep.csv");
    }
}

TEST_CASE("gradcheck") {
    CmdResult g = run("gen random_connected 8 --seed 3 --p 3 --alpha 4 "
                      "--h uniform:-1,1 --f uniform:0.5,2 -o cli_gc.json");
    REQUIRE(g.exit_code == 0);
    CmdResult r = run("gradcheck cli_gc.json --trials 20 --seed 5");
    CHECK(r.exit_code == 0);
    json rec = json::parse(r.out);
    CHECK(rec["max_relative_error"].get<double>() <= 1e-4);

    // Smooth quadratic case is much tighter.
    CmdResult g2 = run("gen random_connected 8 --seed 3 --p 2 --alpha 2 "
                       "--h uniform:-1,1 --f uniform:0.5,2 -o cli_gc2.json");
    REQUIRE(g2.exit_code == 0);
    CmdResult r2 = run("gradcheck cli_gc2.json --trials 20 --seed 5");
    CHECK(r2.exit_code == 0);
    CHECK(json::parse(r2.out)["max_relative_error"].get<double>() <= 1e-7);

    CmdResult none = run("gradcheck cli_gc.json --trials 0");
    CHECK(none.exit_code == 0);
    CHECK(json::parse(none.out)["note"] == "no trials");

    std::remove("cli_gc.json");
    std::remove("cli_gc2.json");
}

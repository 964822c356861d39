#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#ifndef PARTREE_CLI_PATH
#error "PARTREE_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_test_output.tmp";
    const std::string cmd =
        std::string(PARTREE_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream f(out_path);
    std::ostringstream os;
    os << f.rdbuf();
    r.output = os.str();
    std::remove(out_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("verification campaigns exit zero on success", "[cli]") {
    RunResult r = run_cli("verify-theorem --n 4");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("PASS") != std::string::npos);

    RunResult j = run_cli("verify-theorem --n 4 --format json");
    auto doc = nlohmann::json::parse(j.output);
    REQUIRE(doc["items"].size() == 25);
    REQUIRE(doc["pass"] == true);
}

TEST_CASE("homology tables", "[cli]") {
    RunResult r = run_cli("homology np --n 4 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.output);
    REQUIRE(doc["homology"]["degrees"][1]["betti"] == 6);
    REQUIRE(doc["ring"] == "Z");

    RunResult six = run_cli("homology np --n 6");
    REQUIRE(six.exit_code == 0);
    REQUIRE(six.output.find("~H_3 = Z^120") != std::string::npos);

    RunResult q = run_cli("homology np --n 4 --ring q");
    REQUIRE(q.exit_code == 0);
    REQUIRE(q.output.find("Z^6") != std::string::npos);

    RunResult t = run_cli("homology tplus --n 4 --format json");
    REQUIRE(t.exit_code == 0);
    auto tdoc = nlohmann::json::parse(t.output);
    REQUIRE(tdoc["homology"]["degrees"][1]["betti"] == 6);
}

TEST_CASE("enumeration commands", "[cli]") {
    RunResult trees = run_cli("trees --n 4 --format json");
    REQUIRE(trees.exit_code == 0);
    auto doc = nlohmann::json::parse(trees.output);
    REQUIRE(doc["count"] == 26);

    RunResult parts = run_cli("partitions --n 4");
    REQUIRE(parts.exit_code == 0);
    REQUIRE(parts.output.find("count: 13") != std::string::npos);

    RunResult dot = run_cli("trees --n 3 --format dot");
    REQUIRE(dot.exit_code == 0);
    REQUIRE(dot.output.find("digraph") != std::string::npos);
}

TEST_CASE("bar comparison and labelled verification", "[cli]") {
    RunResult bars = run_cli("bar-compare comm --n 3 --format json");
    REQUIRE(bars.exit_code == 0);
    auto doc = nlohmann::json::parse(bars.output);
    REQUIRE(doc["pass"] == true);
    REQUIRE(doc["z"]["bar"]["degrees"][2]["betti"] == 2);
    REQUIRE(doc["z"]["tree"]["degrees"][2]["betti"] == 2);

    RunResult labelled = run_cli("verify-labelled comm --n 3");
    REQUIRE(labelled.exit_code == 0);

    RunResult zeta = run_cli("verify-zeta --n 4");
    REQUIRE(zeta.exit_code == 0);
}

TEST_CASE("usage errors exit with code two", "[cli]") {
    REQUIRE(run_cli("homology np").exit_code == 2);            // no leaves given
    REQUIRE(run_cli("homology np --n 9").exit_code == 2);      // beyond the guard
    REQUIRE(run_cli("bar-compare nope --n 3").exit_code == 2); // unknown operad
    REQUIRE(run_cli("no-such-command").exit_code == 2);
    REQUIRE(run_cli("verify-theorem --n 4 --labels a,b").exit_code == 2);
}

TEST_CASE("fault injection yields exit one and a counterexample", "[cli]") {
    RunResult r = run_cli("verify-theorem --n 3 --inject-fault 0 --format json");
    REQUIRE(r.exit_code == 1);
    auto doc = nlohmann::json::parse(r.output);
    REQUIRE(doc["pass"] == false);
    REQUIRE(doc["items"][0]["pass"] == false);
    REQUIRE(doc["items"][0].contains("detail"));
}

TEST_CASE("reports are byte-identical across runs and parallelism", "[cli]") {
    RunResult a = run_cli("verify-theorem --n 4 --format json --jobs 1");
    RunResult b = run_cli("verify-theorem --n 4 --format json --jobs 4");
    RunResult c = run_cli("verify-theorem --n 4 --format json --jobs 1");
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.output == b.output);
    REQUIRE(a.output == c.output);
}

TEST_CASE("exports", "[cli]") {
    RunResult np = run_cli("export np --n 3 --format json");
    REQUIRE(np.exit_code == 0);
    auto doc = nlohmann::json::parse(np.output);
    REQUIRE(doc["cells"].size() == 3);

    RunResult lay = run_cli(
        "export layerings --n 4 --format dot "
        "--tree \"[[\\\"a\\\",\\\"b\\\",\\\"c\\\",\\\"d\\\"],[\\\"a\\\",\\\"b\\\"]]\"");
    REQUIRE(lay.exit_code == 0);
    REQUIRE(lay.output.find("digraph layering") != std::string::npos);

    RunResult single = run_cli(
        "verify-theorem --n 4 "
        "--tree \"[[\\\"a\\\",\\\"b\\\",\\\"c\\\",\\\"d\\\"],[\\\"a\\\",\\\"b\\\"]]\"");
    REQUIRE(single.exit_code == 0);
}

TEST_CASE("output lands in --out files", "[cli]") {
    const std::string path = "cli_out_test.json";
    RunResult r = run_cli("homology np --n 3 --format json --out " + path);
    REQUIRE(r.exit_code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    nlohmann::json doc;
    f >> doc;
    REQUIRE(doc["homology"]["degrees"][0]["betti"] == 2);
    std::remove(path.c_str());
}

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pds_forge/cli.hpp"

using namespace pds;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("pds_forge_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("usage errors exit 2")
{
    CHECK(run({}).code == exit_usage);
    CHECK(run({"frobnicate"}).code == exit_usage);
    CHECK(run({"certify"}).code == exit_usage);
    CHECK(run({"certify", "--prime", "5", "--range", "5..7"}).code == exit_usage);
    CHECK(run({"certify", "--range", "9..5"}).code == exit_usage);
    CHECK(run({"certify", "--range", "5-9"}).code == exit_usage);
    CHECK(run({"search", "--group", "6", "--params", "6,2,0,1"}).code == exit_usage);
    CHECK(run({"search", "--group", "13", "--params", "13,6,2"}).code == exit_usage);
    CHECK(run({"verify", "--group", "13", "--set", "/nonexistent/file", "--params", "13,6,2,3"}).code == exit_usage);
    CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("domain errors exit 3")
{
    CHECK(run({"certify", "--prime", "4"}).code == exit_domain);
    CHECK(run({"certify", "--prime", "3"}).code == exit_domain);
    CHECK(run({"plane", "--prime", "6"}).code == exit_domain);
    CHECK(run({"search", "--group", "13", "--params", "14,6,2,3"}).code == exit_domain);
    CHECK(run({"search", "--group", "13", "--params", "13,6,2,3", "--sylow", "13"}).code == exit_domain);
}

TEST_CASE("certify")
{
    const auto text = run({"certify", "--prime", "5"});
    CHECK(text.code == exit_ok);
    CHECK(text.out.find("p=5 NONEXISTENCE") != std::string::npos);
    CHECK(text.out.find("parity_obstruction") != std::string::npos);

    const auto json = run({"certify", "--prime", "5", "--json"});
    CHECK(json.code == exit_ok);
    const auto j = nlohmann::ordered_json::parse(json.out);
    CHECK(j["verdict"] == "NONEXISTENCE");
    CHECK(run({"certify", "--prime", "5", "--json"}).out == json.out);

    const auto dir = scratch("certify");
    const auto range = run({"certify", "--range", "5..30", "--out", dir.string(), "--jobs", "3"});
    CHECK(range.code == exit_ok);
    for (int p : {5, 7, 11, 13, 17, 19, 23, 29}) {
        const auto file = dir / ("cert_p" + std::to_string(p) + ".json");
        REQUIRE(std::filesystem::exists(file));
        const auto replay = run({"replay", "--cert", file.string()});
        CHECK(replay.code == exit_ok);
        CHECK(replay.out.find("replay ok") != std::string::npos);
    }
    CHECK_FALSE(std::filesystem::exists(dir / "cert_p9.json"));
    // The single-prime JSON and the file written for a range are identical.
    std::ifstream f(dir / "cert_p5.json");
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == json.out);

    const auto arr = run({"certify", "--range", "5..7", "--json"});
    CHECK(nlohmann::ordered_json::parse(arr.out).size() == 2);
}

TEST_CASE("replay of an edited file exits 4")
{
    const auto dir = scratch("replay");
    auto j = nlohmann::ordered_json::parse(run({"certify", "--prime", "7", "--json"}).out);
    j["steps"][3]["evidence"]["k_max"] = "1";
    std::ofstream(dir / "bad.json") << j.dump(2);
    const auto r = run({"replay", "--cert", (dir / "bad.json").string()});
    CHECK(r.code == exit_inconclusive);
    CHECK(r.out.find("mismatch") != std::string::npos);
    std::ofstream(dir / "junk.json") << "{ not json";
    CHECK(run({"replay", "--cert", (dir / "junk.json").string()}).code == exit_usage);
}

TEST_CASE("search and verify")
{
    const auto s = run({"search", "--group", "13", "--params", "13,6,2,3"});
    CHECK(s.code == exit_ok);
    CHECK(s.out == "Z13 (13,6,2,3): 2 sets (inverse pairs, 6 units)\n{1 3 4 9 10 12}\n{2 5 6 7 8 11}\n");

    const auto js = nlohmann::ordered_json::parse(run({"search", "--group", "5,5", "--params", "25,12,5,6", "--json"}).out);
    CHECK(js["prune_lmt"] == true);
    CHECK(js["units"] == 6);
    CHECK(js["count"].get<int>() > 0);
    const auto unpruned =
        nlohmann::ordered_json::parse(run({"search", "--group", "5,5", "--params", "25,12,5,6", "--json", "--no-lmt"}).out);
    CHECK(unpruned["sets"] == js["sets"]);

    const auto dir = scratch("verify");
    std::ofstream(dir / "paley.txt") << "# quadratic residues mod 13\n1\n3\n4\n9\n10\n12\n";
    const auto v = run({"verify", "--group", "13", "--set", (dir / "paley.txt").string(), "--params", "13,6,2,3"});
    CHECK(v.code == exit_ok);
    CHECK(v.out == "valid, nontrivial\n");
    const auto bad = run({"verify", "--group", "13", "--set", (dir / "paley.txt").string(), "--params", "13,6,3,2"});
    CHECK(bad.out.rfind("invalid, nontrivial\n", 0) == 0);
    const auto vj = nlohmann::ordered_json::parse(
        run({"verify", "--group", "13", "--set", (dir / "paley.txt").string(), "--params", "13,6,2,3", "--json"}).out);
    CHECK(vj["valid"] == true);
    CHECK(vj["trivial"] == false);
}

TEST_CASE("sieve and plane")
{
    const auto s = run({"sieve", "--v", "13"});
    CHECK(s.code == exit_ok);
    CHECK(s.out.find("(13,6,2,3)") != std::string::npos);
    CHECK(run({"sieve", "--v", "4"}).out.empty());
    const auto sj = nlohmann::ordered_json::parse(run({"sieve", "--v", "1000", "--json"}).out);
    CHECK(sj["count"].get<int>() >= 2);

    const auto p = run({"plane", "--prime", "5", "--full"});
    CHECK(p.code == exit_ok);
    CHECK(p.out.find("31 points") != std::string::npos);
    CHECK(p.out.find("bad pairs 0") != std::string::npos);
    const auto pj = nlohmann::ordered_json::parse(run({"plane", "--prime", "7", "--json", "--full"}).out);
    CHECK(pj["projective_plane"] == true);
}

TEST_CASE("PDS_FORGE_JOBS sets the default worker count")
{
    setenv("PDS_FORGE_JOBS", "2", 1);
    CHECK(run({"certify", "--range", "5..13"}).code == exit_ok);
    setenv("PDS_FORGE_JOBS", "zero", 1);
    CHECK(run({"certify", "--range", "5..13"}).code == exit_usage);
    // An explicit flag wins over the environment.
    CHECK(run({"certify", "--range", "5..13", "--jobs", "1"}).code == exit_ok);
    unsetenv("PDS_FORGE_JOBS");
}

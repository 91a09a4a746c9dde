#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace pathsub;
using namespace pathsub::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("pathsub_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

nlohmann::json report(const fs::path& dir, const std::string& command)
{
    return nlohmann::json::parse(slurp(dir / (command + "_report.json")));
}

} // namespace

TEST(Cli, CantorDefaultsAreVerified)
{
    const auto dir = fresh_dir("cantor");
    const auto r = invoke({"cantor", "--out", dir.string()});
    ASSERT_EQ(r.code, kExitVerified) << r.err;
    const auto j = report(dir, "cantor");
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["status"], "Verified");
    ASSERT_EQ(j["measure_brackets"].size(), 21u);
    EXPECT_EQ(j["measure_brackets"][20]["lower"], "3/4");
    EXPECT_EQ(j["measure_brackets"][20]["upper"], "6291457/8388608");
    EXPECT_EQ(nlohmann::json::parse(r.out), j);
}

TEST(Cli, UnresolvedDepthExitsUndecided)
{
    const auto dir = fresh_dir("undecided");
    const auto r = invoke({"cantor", "--depth", "0", "--out", dir.string()});
    EXPECT_EQ(r.code, kExitUndecided);
    EXPECT_EQ(report(dir, "cantor")["status"], "Undecided");
}

TEST(Cli, SplitVerifySmallRun)
{
    const auto dir = fresh_dir("split");
    const auto r = invoke({"split-verify", "--placements", "30", "--intervals", "30", "--grid-max", "2", "--emit-set",
                           "1", "--out", dir.string()});
    ASSERT_EQ(r.code, kExitVerified) << r.err;
    const auto set = parse_splitting_set(slurp(dir / "splitting_set.json"));
    EXPECT_EQ(set.placements().size(), 31u);
    const auto j = report(dir, "split-verify");
    for (const auto& c : j["checks"]) EXPECT_EQ(c["verdict"], "Verified") << c["name"];
}

TEST(Cli, IncreaseWritesCsv)
{
    const auto dir = fresh_dir("increase");
    const auto r = invoke({"increase", "--placements", "20", "--grid-max", "2", "--out", dir.string()});
    ASSERT_EQ(r.code, kExitVerified) << r.err;
    std::istringstream csv(slurp(dir / "increase.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "t,x,y,f_lower,f_upper,increase_lower,rate_bound");
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 128u);
}

TEST(Cli, PeriodicOutputsAreDeterministic)
{
    const auto a = fresh_dir("periodic_a");
    const auto b = fresh_dir("periodic_b");
    ASSERT_EQ(invoke({"periodic", "--samples", "400", "--out", a.string()}).code, kExitVerified);
    ASSERT_EQ(invoke({"periodic", "--samples", "400", "--out", b.string()}).code, kExitVerified);
    for (const char* f : {"periodic.csv", "periodic.svg", "periodic_report.json"}) {
        EXPECT_FALSE(slurp(a / f).empty()) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    const auto j = report(a, "periodic");
    for (const auto& c : j["checks"]) {
        if (c["name"] == "avoids_critical_set") {
            EXPECT_NEAR(c["min_dist"].get<double>(), 0.5, 1e-12);
        }
    }
}

TEST(Cli, SgdOutputsAreDeterministic)
{
    const auto a = fresh_dir("sgd_a");
    const auto b = fresh_dir("sgd_b");
    ASSERT_EQ(invoke({"sgd", "--steps", "5000", "--stride", "100", "--out", a.string()}).code, kExitVerified);
    ASSERT_EQ(invoke({"sgd", "--steps", "5000", "--stride", "100", "--out", b.string()}).code, kExitVerified);
    EXPECT_EQ(slurp(a / "sgd.csv"), slurp(b / "sgd.csv"));
    EXPECT_EQ(slurp(a / "sgd_report.json"), slurp(b / "sgd_report.json"));
    std::istringstream csv(slurp(a / "sgd.csv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 1u + 50u + 1u);
}

TEST(Cli, ConfigFileThenFlagsOverride)
{
    const auto dir = fresh_dir("config");
    std::ofstream(dir / "c.json") << R"({"schema": 1, "command": "cantor", "alpha": "7/8", "depth": 20})";
    auto r = invoke({"cantor", "--config", (dir / "c.json").string(), "--out", dir.string()});
    ASSERT_EQ(r.code, kExitVerified) << r.err;
    auto j = report(dir, "cantor");
    EXPECT_EQ(j["parameters"]["alpha"], "7/8");
    EXPECT_EQ(j["measure_brackets"].size(), 21u);

    r = invoke({"cantor", "--config", (dir / "c.json").string(), "--depth", "18", "--out", dir.string()});
    ASSERT_EQ(r.code, kExitVerified) << r.err;
    EXPECT_EQ(report(dir, "cantor")["measure_brackets"].size(), 19u);
}

TEST(Cli, RejectedConfigNamesTheField)
{
    const auto dir = fresh_dir("reject");
    const auto cfg = dir / "c.json";
    const std::vector<std::pair<std::string, std::string>> cases{
        {R"({"alpha": "1/2"})", "field 'alpha'"},
        {R"({"alpha": 0.75})", "field 'alpha'"},
        {R"({"lambda": "x/3"})", "field 'lambda'"},
        {R"({"depth": -1})", "field 'depth'"},
        {R"({"grid_den": 4})", "field 'grid_den'"},
        {R"({"command": "sgd"})", "field 'command'"},
        {R"([1, 2])", "field 'config'"},
        {R"({"alpha": )", "field 'config'"},
    };
    for (const auto& [text, field] : cases) {
        std::ofstream(cfg) << text;
        const auto r = invoke({"cantor", "--config", cfg.string(), "--out", dir.string()});
        EXPECT_EQ(r.code, kExitConfig) << text;
        EXPECT_NE(r.err.find(field), std::string::npos) << text << " -> " << r.err;
    }
    auto r = invoke({"sgd", "--x0", "1,0,0", "--out", dir.string()});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("field 'x0'"), std::string::npos);
    r = invoke({"split-verify", "--theta", "1/2", "--out", dir.string()});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("field 'alpha'"), std::string::npos) << r.err;
    r = invoke({"periodic", "--b", "2", "--out", dir.string()});
    EXPECT_NE(r.err.find("field 'b'"), std::string::npos);
    EXPECT_EQ(invoke({"frobnicate"}).code, kExitConfig);
    EXPECT_EQ(invoke({}).code, kExitConfig);
}

TEST(Cli, DepthDefaultComesFromEnvironment)
{
    const auto dir = fresh_dir("env");
    ::setenv("PATHSUB_DEPTH", "4", 1);
    const auto r = invoke({"cantor", "--out", dir.string()});
    ::unsetenv("PATHSUB_DEPTH");
    ASSERT_TRUE(r.code == kExitVerified || r.code == kExitUndecided) << r.err;
    const auto j = report(dir, "cantor");
    EXPECT_EQ(j["parameters"]["depth"], "4");
    EXPECT_EQ(j["measure_brackets"].size(), 5u);
}

TEST(Cli, UnwritableOutputIsAnIoError)
{
    const auto dir = fresh_dir("io");
    std::ofstream(dir / "blocker") << "x";
    const auto r = invoke({"cantor", "--depth", "2", "--out", (dir / "blocker").string()});
    EXPECT_EQ(r.code, kExitIo);
}

TEST(Cli, HelpExitsCleanly)
{
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, kExitVerified);
    EXPECT_NE(r.out.find("split-verify"), std::string::npos);
}

TEST(CliReport, WorstVerdictDecidesStatus)
{
    RunConfig cfg("cantor", {});
    Report rep(cfg);
    rep.check("a", Verdict::verified());
    EXPECT_EQ(rep.status(), VerdictKind::Verified);
    rep.check("b", Verdict::undecided(1));
    EXPECT_EQ(rep.status(), VerdictKind::Undecided);
    rep.check("c", Verdict::violated(7, "broken"));
    rep.check("d", Verdict::violated(8, "later"));
    EXPECT_EQ(rep.status(), VerdictKind::Violated);
    EXPECT_EQ(rep.first_violation(), "c: broken (index 7)");
    const auto j = rep.finish();
    EXPECT_EQ(j["status"], "Violated");
    EXPECT_EQ(j["checks"][2]["first_index"], 7);
}

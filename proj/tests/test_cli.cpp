#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "excision/cli.hpp"

using namespace excision;

namespace {

const std::string kFixtures = EXCISION_FIXTURES;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "excise");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"sample", "--kind", "nope"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"transform", "--op", "t_me", "--input", kFixtures + "/missing.csv"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"verify", "--identity", "theorem1", "--reps", "1"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"verify", "--identity", "theorem1", "--g", "reciprocal_max_weight"}).code, cli::kExitUsage);
    EXPECT_EQ(run_cli({"analytics-table", "--fn", "nope"}).code, cli::kExitUsage);
    const Result r = run_cli({"sample", "--kind", "nope"});
    EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, HelpExitsZero)
{
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_cli({"--version"}).code, 0);
}

TEST(Cli, SampleIsReproducible)
{
    const Result a = run_cli({"sample", "--kind", "bridge", "--grid", "64", "--seed", "5"});
    const Result b = run_cli({"sample", "--kind", "bridge", "--grid", "64", "--seed", "5"});
    const Result c = run_cli({"sample", "--kind", "bridge", "--grid", "64", "--seed", "6"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(lines(a.out), 65u + 2u);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    for (const char* k : {"bm", "meander", "bes3", "excursion", "first_passage"}) {
        EXPECT_EQ(run_cli({"sample", "--kind", k, "--grid", "32", "--seed", "1"}).code, 0) << k;
        EXPECT_EQ(run_cli({"sample", "--kind", k, "--grid", "32", "--seed", "1", "--refine"}).code, 0) << k;
    }
    const Result j = run_cli({"sample", "--kind", "excursion", "--grid", "8", "--seed", "1", "--format", "json"});
    const Json parsed = Json::parse(j.out);
    EXPECT_EQ(parsed["kind"], "excursion");
    EXPECT_TRUE(parsed.contains("provenance"));
}

TEST(Cli, SeedFlagBeatsEnvironment)
{
    ::setenv("EXCISE_SEED", "5", 1);
    const Result env = run_cli({"sample", "--grid", "16"});
    const Result flag5 = run_cli({"sample", "--grid", "16", "--seed", "5"});
    const Result flag9 = run_cli({"sample", "--grid", "16", "--seed", "9"});
    ::unsetenv("EXCISE_SEED");
    EXPECT_EQ(env.out, flag5.out);
    EXPECT_NE(env.out, flag9.out);
}

TEST(Cli, TransformFixture)
{
    const Result r = run_cli({"transform", "--op", "excise_bridge", "--input", kFixtures + "/six_node_bridge.csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_DOUBLE_EQ(j["tau"].get<double>(), 0.8);
    const Result m = run_cli({"transform", "--op", "t_me", "--input", kFixtures + "/tent.csv"});
    ASSERT_EQ(m.code, 0) << m.err;
    EXPECT_NE(m.out.find("t,v"), std::string::npos);
}

TEST(Cli, VerifyExitCodes)
{
    const Result ok = run_cli({"verify", "--identity", "theorem1", "--g", "const_one", "--g", "integral", "--reps",
                               "1000", "--grid", "128", "--seed", "1"});
    EXPECT_EQ(ok.code, 0) << ok.out;
    const Json j = Json::parse(ok.out);
    EXPECT_EQ(j["identity"], "theorem1");
    EXPECT_EQ(j["checks"].size(), 2u);
    EXPECT_TRUE(j["pass"].get<bool>());

    const Result bad = run_cli({"verify", "--identity", "theorem1", "--g", "max", "--reps", "4000", "--grid", "4",
                                "--no-refine", "--seed", "1", "--workers", "1"});
    EXPECT_EQ(bad.code, cli::kExitFail);
    EXPECT_FALSE(Json::parse(bad.out)["pass"].get<bool>());
}

TEST(Cli, FigureIsStable)
{
    const Result a = run_cli({"figure", "--seed", "3", "--grid", "64"});
    const Result b = run_cli({"figure", "--seed", "3", "--grid", "64"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("config_hash="), std::string::npos);
    const Result f = run_cli({"figure", "--input", kFixtures + "/six_node_bridge.csv"});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_NE(f.out.find("class=\"excised\""), std::string::npos);
}

TEST(Cli, AnalyticsTable)
{
    const Result r = run_cli({"analytics-table", "--fn", "rayleigh_cdf", "--tmin", "0", "--tmax", "2", "--steps", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out), 2u + 5u);
    EXPECT_NE(r.out.find("t,rayleigh_cdf\n"), std::string::npos);
    EXPECT_NE(r.out.find("\n0,0\n"), std::string::npos);
    EXPECT_EQ(run_cli({"analytics-table", "--fn", "g", "--tmin", "1", "--tmax", "0"}).code, cli::kExitUsage);
}

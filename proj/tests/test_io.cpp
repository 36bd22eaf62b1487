#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "excision/path_io.hpp"
#include "excision/report.hpp"
#include "excision/samplers.hpp"
#include "excision/svg.hpp"
#include "excision/transforms.hpp"

using namespace excision;

namespace {
const std::string kFixtures = EXCISION_FIXTURES;

std::size_t count(const std::string& s, const std::string& what)
{
    std::size_t n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
}
} // namespace

TEST(PathIo, CsvRoundTripIsExact)
{
    RngStream r(1, 0);
    const Path p = sample_bridge_refined(TimeGrid(1.0, 32), r, RefineSpec{});
    const std::string csv = path_csv(p, "seed=1");
    EXPECT_EQ(csv.rfind("# seed=1\nt,v\n", 0), 0u);
    std::istringstream in(csv);
    const Path q = read_path_csv(in, PathKind::bridge);
    ASSERT_EQ(q.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_EQ(q.time(i), p.time(i));
        EXPECT_EQ(q.value(i), p.value(i));
    }
    EXPECT_EQ(q.kind(), PathKind::bridge);
}

TEST(PathIo, JsonRoundTrip)
{
    RngStream r(2, 0);
    for (const Path& p : {sample_bridge(TimeGrid(1.0, 16), r), sample_bridge_refined(TimeGrid(1.0, 16), r, RefineSpec{}),
                          sample_first_passage_bridge(2.0, TimeGrid(1.0, 16), r)}) {
        const Json j = path_to_json(p);
        const Path q = path_from_json(Json::parse(j.dump()));
        EXPECT_EQ(q.kind(), p.kind());
        EXPECT_EQ(q.level(), p.level());
        EXPECT_EQ(std::vector<double>(q.values().begin(), q.values().end()),
                  std::vector<double>(p.values().begin(), p.values().end()));
        EXPECT_EQ(std::vector<double>(q.times().begin(), q.times().end()),
                  std::vector<double>(p.times().begin(), p.times().end()));
    }
}

TEST(PathIo, MalformedInputIsRejected)
{
    for (const char* bad : {"", "x,y\n0,0\n", "t,v\n0,0\n1,abc\n", "t,v\n0\n", "t,v\n0,0\n0,1\n", "t,v\n0,0\n1,2x\n"}) {
        std::istringstream in(bad);
        EXPECT_THROW(read_path_csv(in), InputError) << bad;
    }
    EXPECT_THROW(read_path_file(kFixtures + "/does_not_exist.csv"), InputError);
}

TEST(PathIo, ReadsFixtureFiles)
{
    const Path p = read_path_file(kFixtures + "/six_node_bridge.csv", PathKind::bridge);
    EXPECT_EQ(p.size(), 6u);
    EXPECT_EQ(p.kind(), PathKind::bridge);
}

TEST(Report, TransformOutputJson)
{
    const Path p = read_path_file(kFixtures + "/six_node_bridge.csv", PathKind::bridge);
    const TransformOutput o = excise_bridge(p);
    const Json j = to_json(o);
    EXPECT_DOUBLE_EQ(j["tau"].get<double>(), 0.8);
    EXPECT_TRUE(j["records"].is_array());
    EXPECT_EQ(j["path"]["kind"], to_string(o.excised.kind()));
    EXPECT_EQ(j["records"].size(), o.records.size());
}

TEST(Report, HashIgnoresWorkers)
{
    VerifyConfig a;
    VerifyConfig b;
    b.workers = 7;
    EXPECT_EQ(canonical(a, "t"), canonical(b, "t"));
    b.reps = 5;
    EXPECT_NE(canonical(a, "t"), canonical(b, "t"));
    EXPECT_EQ(hex64(fnv1a("")), "cbf29ce484222325");
    EXPECT_EQ(hex64(fnv1a("a")), "af63dc4c8601ec8c");
}

TEST(Svg, FixtureHasOneExcisedRegion)
{
    const Path p = read_path_file(kFixtures + "/six_node_bridge.csv", PathKind::bridge);
    const TransformOutput o = excise_bridge(p);
    const std::string svg = render_svg(p, o, "fixture");
    EXPECT_EQ(SvgFigure(p, o).excised_regions(), 1u);
    EXPECT_EQ(count(svg, "class=\"excised\""), 1u);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, TentHasNoRegions)
{
    const Path p = read_path_file(kFixtures + "/tent.csv", PathKind::bridge);
    const TransformOutput o = excise_bridge(p);
    const std::string svg = render_svg(p, o);
    EXPECT_EQ(count(svg, "class=\"excised\""), 0u);
    EXPECT_EQ(count(svg, "class=\"kept\""), 0u);
}

TEST(Svg, RenderingIsDeterministic)
{
    RngStream a(3, 0);
    RngStream b(3, 0);
    const Path p = sample_bridge(TimeGrid(1.0, 256), a);
    const Path q = sample_bridge(TimeGrid(1.0, 256), b);
    EXPECT_EQ(render_svg(p, excise_bridge(p), "t"), render_svg(q, excise_bridge(q), "t"));
}

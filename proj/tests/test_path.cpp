#include <gtest/gtest.h>

#include "excision/errors.hpp"
#include "excision/path.hpp"

using namespace excision;

namespace {
Path tent() { return Path({0.0, 0.5, 1.0}, {0.0, 0.5, 0.0}, PathKind::bridge); }
} // namespace

TEST(TimeGrid, NodesEndExactlyAtHorizon)
{
    TimeGrid g(2.0, 3);
    auto n = g.nodes();
    ASSERT_EQ(n.size(), 4u);
    EXPECT_EQ(n.front(), 0.0);
    EXPECT_EQ(n.back(), 2.0);
    EXPECT_DOUBLE_EQ(g.spacing(), 2.0 / 3.0);
}

TEST(TimeGrid, RejectsBadArguments)
{
    EXPECT_THROW(TimeGrid(0.0, 4), std::invalid_argument);
    EXPECT_THROW(TimeGrid(1.0, 1), std::invalid_argument);
}

TEST(Path, RejectsMalformedInput)
{
    EXPECT_THROW(Path({0.0, 1.0}, {0.0}), std::invalid_argument);
    EXPECT_THROW(Path({0.0}, {0.0}), std::invalid_argument);
    EXPECT_THROW(Path({0.1, 1.0}, {0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(Path({0.0, 0.5, 0.5}, {0.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(Path({0.0, 1.0}, {0.0, std::nan("")}), NumericalError);
}

TEST(Path, InterpolatesAndClamps)
{
    Path p = tent();
    EXPECT_DOUBLE_EQ(p.at(0.25), 0.25);
    EXPECT_DOUBLE_EQ(p.at(0.75), 0.25);
    EXPECT_EQ(p.at(-1.0), 0.0);
    EXPECT_EQ(p.at(2.0), 0.0);
    EXPECT_TRUE(p.is_uniform());
    EXPECT_FALSE(Path({0.0, 0.3, 1.0}, {0.0, 1.0, 0.0}).is_uniform());
}

TEST(Path, HittingTimeOnTentIsExactNode)
{
    auto h = hitting_time(tent(), 0.5);
    ASSERT_TRUE(h.has_value());
    EXPECT_EQ(*h, 0.5);
    EXPECT_FALSE(hitting_time(tent(), 0.6).has_value());
}

TEST(Path, HittingTimeInterpolates)
{
    Path p({0.0, 0.4, 0.6}, {0.0, 0.6, 1.2});
    auto c = first_crossing(p, 1.0);
    ASSERT_TRUE(c.has_value());
    EXPECT_FALSE(c->at_node);
    EXPECT_NEAR(c->time, 0.4 + 0.2 * (0.4 / 0.6), 1e-15);
    auto [q, k] = insert_crossing(p, *c, 1.0);
    EXPECT_EQ(q.size(), 4u);
    EXPECT_EQ(q.value(k), 1.0);
}

TEST(Path, ArgmaxUniqueAndTie)
{
    auto a = argmax_unique(tent());
    EXPECT_EQ(a.index, 1u);
    EXPECT_EQ(a.value, 0.5);
    Path tie({0.0, 0.25, 0.5, 1.0}, {0.0, 1.0, 1.0, 0.0});
    EXPECT_THROW(argmax_unique(tie), TieError);
}

TEST(Path, IntegralIsTrapezoid)
{
    EXPECT_DOUBLE_EQ(integral(tent()), 0.25);
}

TEST(Path, KindViolations)
{
    EXPECT_FALSE(kind_violation(tent()).has_value());
    EXPECT_TRUE(kind_violation(Path({0.0, 1.0}, {0.0, 1.0}, PathKind::bridge)).has_value());
    EXPECT_TRUE(kind_violation(Path({0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}, PathKind::excursion)).has_value());
    EXPECT_FALSE(kind_violation(Path({0.0, 1.0}, {0.0, 2.0}, PathKind::first_passage, 2.0)).has_value());
    EXPECT_TRUE(kind_violation(Path({0.0, 0.5, 1.0}, {0.0, 2.0, 2.0}, PathKind::first_passage, 2.0)).has_value());
}

TEST(Path, SupDistanceUsesBothNodeSets)
{
    Path a({0.0, 1.0}, {0.0, 0.0});
    EXPECT_DOUBLE_EQ(sup_distance(a, tent()), 0.5);
    EXPECT_EQ(sup_distance(tent(), tent()), 0.0);
}

TEST(PathKind, StringRoundTrip)
{
    for (auto k : {PathKind::free, PathKind::bridge, PathKind::meander_type, PathKind::excursion,
                   PathKind::first_passage}) {
        EXPECT_EQ(path_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(path_kind_from_string("nope"), std::invalid_argument);
}

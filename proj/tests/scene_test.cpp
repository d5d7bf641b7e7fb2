#include "weft/scene.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace weft;

YarnParams flat_strand() {
    YarnParams p;
    p.max_inclination = 0.6;
    p.arc_radius = 1.0;
    p.ply_orbit = 0.0;
    p.ply_radius = 0.3;
    p.twist_rate = 0.0;
    p.fiber_twist = 0.3;
    p.ply_count = 1;
    p.width = 0.9;
    return p;
}

YarnParams plied() {
    YarnParams p = flat_strand();
    p.ply_orbit = 0.12;
    p.ply_radius = 0.18;
    p.twist_rate = 5.0;
    p.ply_count = 2;
    return p;
}

FabricScene plain_scene(double k_sliding = 0.0, int repeat = 1) {
    IrregularitySpec irr;
    irr.k_sliding = k_sliding;
    return make_scene(generate_pattern({.family = WeaveFamily::plain}), flat_strand(),
                      flat_strand(), irr, repeat, 42);
}

TEST(QueryPoint, CellCenterOfPlainWeave) {
    const auto scene = plain_scene();
    // Cell (0,0) has the warp on top; its center is UV (0.25, 0.25).
    const auto s = query_point(0.25, 0.25, scene);
    EXPECT_TRUE(s.covered);
    EXPECT_EQ(s.kind, YarnKind::warp);
    EXPECT_EQ(s.cell_row, 0);
    EXPECT_EQ(s.cell_col, 0);
    EXPECT_NEAR(s.normal.x, 0.0, 1e-12);
    EXPECT_NEAR(s.normal.y, 0.0, 1e-12);
    EXPECT_NEAR(s.normal.z, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(s.height, scene.warp.arc_radius + scene.warp.ply_radius);

    const auto w = query_point(0.75, 0.25, scene);
    EXPECT_TRUE(w.covered);
    EXPECT_EQ(w.kind, YarnKind::weft);
}

TEST(QueryPoint, CoveredKindMatchesDraft) {
    IrregularitySpec irr;
    PatternSpec spec;
    spec.family = WeaveFamily::twill;
    const auto draft = generate_pattern(spec);
    const auto scene = make_scene(draft, plied(), plied(), irr, 1, 7);
    for (int py = 0; py < 64; ++py) {
        for (int px = 0; px < 64; ++px) {
            const auto s = query_point((px + 0.5) / 64.0, (py + 0.5) / 64.0, scene);
            EXPECT_EQ(s.cell_col, px * draft.cols / 64);
            EXPECT_EQ(s.cell_row, py * draft.rows / 64);
            if (s.covered) {
                const bool warp_up = draft.at(s.cell_row, s.cell_col) != 0;
                EXPECT_EQ(s.kind, warp_up ? YarnKind::warp : YarnKind::weft);
            }
        }
    }
}

TEST(QueryPoint, ExactlyPeriodicWithRepeat) {
    for (int repeat : {1, 2, 4}) {
        IrregularitySpec irr;
        irr.k_sliding = 0.3;
        irr.flyaway_intensity = 0.5;
        const auto scene = make_scene(generate_pattern({.family = WeaveFamily::plain}), plied(),
                                      flat_strand(), irr, repeat, 99);
        std::mt19937_64 rng(31);
        for (int n = 0; n < 4000; ++n) {
            // Dyadic points: translation by 1/repeat and by 1 is exact.
            const double x = static_cast<double>(rng() % 8192) / 8192.0;
            const double y = static_cast<double>(rng() % 8192) / 8192.0;
            const auto a = query_point(x, y, scene);
            const auto b = query_point(x + 1.0 / repeat, y, scene);
            const auto c = query_point(x, y + 1.0 / repeat, scene);
            const auto d = query_point(x + 1.0, y + 1.0, scene);
            EXPECT_EQ(a, b);
            EXPECT_EQ(a, c);
            EXPECT_EQ(a, d);
            const auto fa = flyaway_at(x, y, scene);
            const auto fb = flyaway_at(x + 1.0 / repeat, y, scene);
            EXPECT_EQ(fa.present, fb.present);
            EXPECT_EQ(fa.orientation, fb.orientation);
        }
    }
}

TEST(QueryPoint, HeightBoundsOnRegularScene) {
    IrregularitySpec irr;
    PatternSpec spec;
    spec.family = WeaveFamily::satin;
    spec.satin_size = 5;
    spec.satin_counter = 2;
    const auto scene = make_scene(generate_pattern(spec), plied(), plied(), irr, 1, 3);
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 50'000; ++n) {
        const auto s = query_point(u(rng), u(rng), scene);
        if (!s.covered) {
            EXPECT_DOUBLE_EQ(s.height, scene.floor_height);
            continue;
        }
        EXPECT_FALSE(s.lower_layer);  // no sliding, nothing exposed
        const YarnParams& yp = s.kind == YarnKind::warp ? scene.warp : scene.weft;
        EXPECT_LE(s.height, yp.height_max());
        EXPECT_GE(s.height, yp.height_floor());
        EXPECT_NEAR(norm(s.normal), 1.0, 1e-12);
        EXPECT_NEAR(norm(s.orientation), 1.0, 1e-12);
    }
}

TEST(QueryPoint, NormalsTiltTowardTheSampledSide) {
    const auto scene = plain_scene();
    // Cell (0,0): warp on top, lane center at x = 0.25. Right of center the
    // normal leans +x; left of center it leans -x.
    const auto right = query_point(0.25 + 0.08, 0.25, scene);
    const auto left = query_point(0.25 - 0.08, 0.25, scene);
    ASSERT_TRUE(right.covered);
    ASSERT_TRUE(left.covered);
    EXPECT_GT(right.normal.x, 0.05);
    EXPECT_LT(left.normal.x, -0.05);
    // Cell (0,1): weft on top, lane center at y = 0.25; same story in y.
    const auto below = query_point(0.75, 0.25 + 0.08, scene);
    const auto above = query_point(0.75, 0.25 - 0.08, scene);
    ASSERT_TRUE(below.covered);
    ASSERT_TRUE(above.covered);
    EXPECT_GT(below.normal.y, 0.05);
    EXPECT_LT(above.normal.y, -0.05);
}

TEST(QueryPoint, WarpFrameTurnsOrientation) {
    const auto scene = plain_scene();
    // Zero ply twist: a warp fiber points mostly along y, a weft along x.
    const auto warp = query_point(0.25, 0.25, scene);
    const auto weft = query_point(0.75, 0.25, scene);
    EXPECT_GT(std::abs(warp.orientation.y), 0.9);
    EXPECT_GT(std::abs(weft.orientation.x), 0.9);
}

TEST(QueryPoint, SlidingExposesLowerLayer) {
    const auto baseline = plain_scene(0.0);
    const auto slid = plain_scene(0.45);
    int lower = 0, covered = 0, changed = 0;
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n < 50'000; ++n) {
        const double x = u(rng), y = u(rng);
        const auto a = query_point(x, y, baseline);
        const auto b = query_point(x, y, slid);
        covered += b.covered;
        lower += b.lower_layer;
        changed += !(a == b);
        if (b.lower_layer) {
            EXPECT_TRUE(b.covered);
            EXPECT_LE(b.height, std::min(slid.warp.height_floor(), slid.weft.height_floor()));
        }
    }
    EXPECT_GT(covered, 25'000);
    EXPECT_GT(lower, 50);  // sliding at 0.45 exposes some under-yarn
    EXPECT_GT(changed, 1000);
}

TEST(QueryPoint, GapContract) {
    auto yarn = flat_strand();
    yarn.width = 0.5;  // wide gaps
    IrregularitySpec irr;
    const auto scene = make_scene(generate_pattern({.family = WeaveFamily::plain}), yarn, yarn,
                                  irr, 1, 5);
    // Just inside cell (0,0) near its corner: outside the yarn width.
    const auto g = query_point(0.02, 0.02, scene);
    EXPECT_FALSE(g.covered);
    EXPECT_EQ(g.normal, (Vec3{0.0, 0.0, 1.0}));
    EXPECT_EQ(g.orientation, (Vec3{0.0, 1.0, 0.0}));  // warp axis
    EXPECT_DOUBLE_EQ(g.height, scene.floor_height);
    EXPECT_EQ(g.ply, -1);
}

TEST(QueryPoint, MultiCellFloatBendsOnce) {
    // Satin 5/2: weft floats of length 4 map onto one arc, so the height at
    // the float center exceeds the height near its ends.
    PatternSpec spec;
    spec.family = WeaveFamily::satin;
    spec.satin_size = 5;
    spec.satin_counter = 2;
    IrregularitySpec irr;
    const auto scene = make_scene(generate_pattern(spec), flat_strand(), flat_strand(), irr, 1, 8);
    // Row 0: riser at column 0, weft float spans columns 1..4.
    const double y = (0.5) / 5.0;
    const auto center = query_point(3.0 / 5.0, y, scene);  // middle of the float
    const auto edge = query_point(1.2 / 5.0, y, scene);    // near float start
    ASSERT_TRUE(center.covered);
    ASSERT_TRUE(edge.covered);
    EXPECT_EQ(center.kind, YarnKind::weft);
    EXPECT_EQ(edge.kind, YarnKind::weft);
    EXPECT_GT(center.height, edge.height);
}

TEST(MakeScene, Rejections) {
    IrregularitySpec irr;
    EXPECT_THROW(make_scene(generate_pattern({.family = WeaveFamily::plain}), flat_strand(),
                            flat_strand(), irr, 0, 1),
                 InvalidScene);
    WeavingDraft all_ones(2, 2);
    for (auto& c : all_ones.cells) c = 1;
    EXPECT_THROW(make_scene(all_ones, flat_strand(), flat_strand(), irr, 1, 1), InvalidDraft);
}

}  // namespace

#include "weft/irregularity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace weft;

TEST(SlideForward, IdentityWhenDisabled) {
    const auto sp = make_sliding(0.0, 2, 11);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    for (int i = 0; i < 200; ++i) {
        const double y = u(rng), x = u(rng) * 3.0;
        EXPECT_DOUBLE_EQ(slide_forward(y, x, sp), y);
    }
}

TEST(SlideForward, IdentityAtZeroNoise) {
    for (double y : {0.1, 0.4, 0.9}) {
        EXPECT_DOUBLE_EQ(slide_forward_value(y, 0.0, 0.7), y);
    }
}

TEST(SlideForward, FrozenExample) {
    // y = 0.8, P = 0.5, k = 0.4: the scaled position is
    // 0.5 + 0.3 * (1 - 0.2) = 0.74, then 0.74^exp(0.2).
    const double yr = slide_forward_value(0.8, 0.5, 0.4);
    EXPECT_NEAR(yr, 0.6922759779361769, 1e-15);
    EXPECT_NEAR(yr, 0.6923, 1e-4);
    EXPECT_NEAR(slide_inverse_value(yr, 0.5, 0.4), 0.8, 1e-6);
}

TEST(SlideInverse, RoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uy(1e-4, 1.0 - 1e-4);
    std::uniform_real_distribution<double> ux(-4.0, 4.0);
    std::uniform_real_distribution<double> uk(0.0, 0.95);
    for (int i = 0; i < 100'000; ++i) {
        const auto sp = make_sliding(uk(rng), 1 + static_cast<int>(rng() % 6), rng());
        const double y = uy(rng), x = ux(rng);
        const double yr = slide_forward(y, x, sp);
        EXPECT_GT(yr, 0.0);
        EXPECT_LT(yr, 1.0);
        EXPECT_NEAR(slide_inverse(yr, x, sp), y, 1e-9);
    }
}

TEST(SlideForward, StrictlyMonotone) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ux(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sp = make_sliding(0.3 + 0.6 * (trial / 50.0), 3, rng());
        const double x = ux(rng);
        double prev = 0.0;
        bool first = true;
        for (int i = 1; i < 1000; ++i) {
            const double y = i / 1000.0;
            const double yr = slide_forward(y, x, sp);
            if (!first) {
                EXPECT_GT(yr, prev) << "k=" << sp.strength << " x=" << x << " y=" << y;
            }
            prev = yr;
            first = false;
        }
    }
}

TEST(SlideForward, RejectsOutOfDomain) {
    const auto sp = make_sliding(0.3, 2, 1);
    EXPECT_THROW(slide_forward(0.0, 0.3, sp), DomainError);
    EXPECT_THROW(slide_forward(1.0, 0.3, sp), DomainError);
    EXPECT_THROW(slide_inverse(-0.1, 0.3, sp), DomainError);
}

TEST(SlideInverse, OutOfRangeResultsAreReturned) {
    // With positive noise the forward map contracts toward 0; inverting a
    // coordinate near 1 can then land beyond 1 and must not be clamped.
    const double k = 0.5, p = 1.0;
    const double top = slide_forward_value(1.0 - 1e-9, p, k);
    const double inv = slide_inverse_value(top + 0.5 * (1.0 - top), p, k);
    EXPECT_GT(inv, 1.0);
}

TEST(Flyaway, ThresholdOneSuppressesEverything) {
    auto fp = make_flyaway(1.0 - 1e-12, 0.5, 1.0, 8, 1, 2);
    int present = 0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10'000; ++i) present += flyaway_orientation(u(rng), u(rng), fp).present;
    EXPECT_EQ(present, 0);
}

TEST(Flyaway, ZeroVerticalScaleKeepsOrientationsFlat) {
    auto fp = make_flyaway(0.3, 0.0, 1.0, 8, 3, 4);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int seen = 0;
    for (int i = 0; i < 20'000 && seen < 500; ++i) {
        const auto s = flyaway_orientation(u(rng), u(rng), fp);
        if (!s.present) continue;
        ++seen;
        EXPECT_EQ(s.orientation.z, 0.0);
        EXPECT_NEAR(norm(s.orientation), 1.0, 1e-12);
    }
    EXPECT_GT(seen, 100);
}

TEST(Flyaway, OrientationContinuousInsidePresentRegions) {
    // theta = pi*N1 and the elevation = (pi/2)*k_v*N2 are smooth in the
    // noise values, and the gradients of periodic lattice noise are bounded,
    // so orientation differences shrink linearly with the step.
    auto fp = make_flyaway(0.3, 0.6, 1.0, 8, 21, 22);
    const double bound = 100.0 * fp.frequency;  // |d orientation/d uv|, generous
    const double h = 1e-5;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 200'000 && checked < 5000; ++i) {
        const double x = u(rng), y = u(rng);
        const auto a = flyaway_orientation(x, y, fp);
        const auto bx = flyaway_orientation(x + h, y, fp);
        const auto by = flyaway_orientation(x, y + h, fp);
        if (!a.present || !bx.present || !by.present) continue;
        ++checked;
        EXPECT_LE(norm(bx.orientation - a.orientation) / h, bound);
        EXPECT_LE(norm(by.orientation - a.orientation) / h, bound);
    }
    EXPECT_GT(checked, 1000);
}

TEST(Flyaway, PresenceMonotoneInThreshold) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<double, double>> pts(1'000'000);
    for (auto& p : pts) p = {u(rng), u(rng)};
    double prev_fraction = 2.0;
    for (double tau : {0.0, 0.2, 0.4, 0.6, 0.8}) {
        auto fp = make_flyaway(tau, 0.5, 1.0, 8, 5, 6);
        long present = 0;
        for (const auto& p : pts) present += flyaway_orientation(p.first, p.second, fp).present;
        const double fraction = static_cast<double>(present) / pts.size();
        EXPECT_LE(fraction, prev_fraction) << "tau=" << tau;
        prev_fraction = fraction;
    }
}

TEST(Flyaway, UnitOrientationsAndDeterminism) {
    auto fp = make_flyaway(0.4, 0.8, 1.0, 6, 10, 11);
    std::mt19937_64 rng(10);
    for (int i = 0; i < 5000; ++i) {
        // Dyadic coordinates so the +1 repeat translation is exact.
        const double x = static_cast<double>(rng() % 65536) / 65536.0;
        const double y = static_cast<double>(rng() % 65536) / 65536.0;
        const auto a = flyaway_orientation(x, y, fp);
        const auto b = flyaway_orientation(x, y, fp);
        EXPECT_EQ(a.present, b.present);
        EXPECT_EQ(a.orientation, b.orientation);
        if (a.present) {
            EXPECT_NEAR(norm(a.orientation), 1.0, 1e-12);
        }
        // Tileable with the repeat.
        const auto w = flyaway_orientation(x + 1.0, y, fp);
        EXPECT_EQ(a.present, w.present);
        EXPECT_EQ(a.orientation, w.orientation);
    }
}

}  // namespace

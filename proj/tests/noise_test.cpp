#include "weft/noise.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace weft;

TEST(Noise1, VanishesOnLattice) {
    const NoiseField f{42, 5, 1};
    for (int i = -10; i <= 10; ++i) EXPECT_EQ(noise1(static_cast<double>(i), f), 0.0);
}

TEST(Noise1, PeriodicAndDeterministic) {
    const NoiseField f{7, 4, 1};
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        // Dyadic sample so x + period is exactly representable.
        const double x = static_cast<double>(static_cast<int>(rng() % 2'621'440)) / 65536.0 - 20.0;
        const double v = noise1(x, f);
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
        EXPECT_EQ(v, noise1(x + f.period, f));
        EXPECT_EQ(v, noise1(x, f));  // bitwise repeatable
    }
}

TEST(Noise1, SeedChangesField) {
    const NoiseField a{1, 8, 1};
    const NoiseField b{2, 8, 1};
    int differing = 0;
    for (int i = 0; i < 64; ++i) {
        const double x = 0.37 + i * 0.51;
        differing += noise1(x, a) != noise1(x, b);
    }
    EXPECT_GT(differing, 48);
}

TEST(Noise1, RequiresMatchingDimension) {
    EXPECT_THROW(noise1(0.5, NoiseField{0, 4, 2}), std::invalid_argument);
    EXPECT_THROW(noise2(0.5, 0.5, NoiseField{0, 4, 1}), std::invalid_argument);
}

TEST(Noise2, VanishesOnLatticeAndPeriodic) {
    const NoiseField f{99, 6, 2};
    for (int i = -6; i <= 6; ++i)
        for (int j = -6; j <= 6; ++j)
            EXPECT_EQ(noise2(static_cast<double>(i), static_cast<double>(j), f), 0.0);

    std::mt19937_64 rng(2);
    auto dyadic = [&rng] {
        return static_cast<double>(static_cast<int>(rng() % 1'572'864)) / 65536.0 - 12.0;
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const double x = dyadic(), y = dyadic();
        const double v = noise2(x, y, f);
        EXPECT_GE(v, -1.0);
        EXPECT_LE(v, 1.0);
        EXPECT_EQ(v, noise2(x + f.period, y, f));
        EXPECT_EQ(v, noise2(x, y + f.period, f));
    }
}

TEST(Noise2, EmpiricalMeanNearZero) {
    const NoiseField f{2024, 32, 2};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 32.0);
    double sum = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) sum += noise2(u(rng), u(rng), f);
    const double mean = sum / n;
    EXPECT_GT(mean, -0.02);
    EXPECT_LT(mean, 0.02);
}

TEST(Noise1, ContinuityAcrossLattice) {
    const NoiseField f{5, 3, 1};
    for (int i = 0; i < 3; ++i) {
        const double eps = 1e-7;
        const double left = noise1(i - eps, f);
        const double right = noise1(i + eps, f);
        EXPECT_NEAR(left, 0.0, 1e-5);
        EXPECT_NEAR(right, 0.0, 1e-5);
    }
}

}  // namespace

#include <gtest/gtest.h>

#include <random>

#include "fvsolid/fvsolid.hpp"
#include "test_support.hpp"

using namespace fvsolid;

TEST(Material, DerivedModuliZeroPoisson) {
    const auto [mu, lambda] = derivedModuli(1.0, 0.0);
    EXPECT_NEAR(mu, 0.5, 1e-15);
    EXPECT_NEAR(lambda, 0.0, 1e-15);
}

// mu = E/(2(1+nu)) and lambda = E nu/((1+nu)(1-2nu)) evaluated directly.
TEST(Material, DerivedModuliClosedForm) {
    const auto [mu, lambda] = derivedModuli(2.6, 0.3);
    EXPECT_NEAR(mu, 1.0, 1e-14);
    EXPECT_NEAR(lambda, 1.5, 1e-14);
}

TEST(Material, IncompressibleLimitRejected) {
    EXPECT_THROW(derivedModuli(1.0, 0.5), InvalidArgumentError);
    EXPECT_THROW(derivedModuli(1.0, 0.6), InvalidArgumentError);
    EXPECT_THROW(derivedModuli(1.0, -1.0), InvalidArgumentError);
    EXPECT_THROW(derivedModuli(-1.0, 0.3), InvalidArgumentError);
}

TEST(Material, LameRoundTrip) {
    const auto m = LinearElasticMaterial::fromLame(1.0, 1.5, 2.0);
    EXPECT_NEAR(m.youngsModulus, 2.6, 1e-14);
    EXPECT_NEAR(m.poissonRatio, 0.3, 1e-14);
    EXPECT_NEAR(m.implicitStiffness(), 3.5, 1e-14);
}

TEST(Stress, ZeroGradient) {
    const auto m = LinearElasticMaterial::fromYoungPoisson(2.6, 0.3, 1.0);
    const Tensor3 sigma = stressFromGradient(Tensor3{}, m);
    EXPECT_EQ(maxAbs(sigma), 0.0);
}

TEST(Stress, PureDilation) {
    const auto m = LinearElasticMaterial::fromYoungPoisson(2.6, 0.3, 1.0);
    const double eps = 0.01;
    const Tensor3 sigma = stressFromGradient(eps * Tensor3::identity(), m);
    const double expected = (2.0 * m.shearModulus + 3.0 * m.lameLambda) * eps;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(sigma.m[i][j], i == j ? expected : 0.0, 1e-15);
}

TEST(Stress, SimpleShear) {
    const auto m = LinearElasticMaterial::fromYoungPoisson(2.6, 0.3, 1.0);
    const double g = 0.02;
    Tensor3 grad;
    grad.m[1][0] = g;  // du_x/dy
    const Tensor3 sigma = stressFromGradient(grad, m);
    EXPECT_NEAR(sigma.m[0][1], m.shearModulus * g, 1e-15);
    EXPECT_NEAR(sigma.m[1][0], m.shearModulus * g, 1e-15);
    double offSum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!((i == 0 && j == 1) || (i == 1 && j == 0))) offSum += std::abs(sigma.m[i][j]);
    EXPECT_EQ(offSum, 0.0);
}

TEST(StressProperties, SymmetryLinearityTrace) {
    const auto m = LinearElasticMaterial::fromYoungPoisson(210e9, 0.28, 7800.0);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Tensor3 g1, g2;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                g1.m[i][j] = dist(rng);
                g2.m[i][j] = dist(rng);
            }
        const double a = dist(rng), b = dist(rng);

        const Tensor3 s1 = stressFromGradient(g1, m);
        const double scale = maxAbs(s1);
        EXPECT_LE(maxAbs(s1 - s1.transposed()), 1e-14 * scale);

        const Tensor3 combined = stressFromGradient(a * g1 + b * g2, m);
        const Tensor3 split = a * s1 + b * stressFromGradient(g2, m);
        EXPECT_LE(maxAbs(combined - split), 1e-14 * maxAbs(combined) + 1e-14);

        EXPECT_NEAR(s1.trace(), (2.0 * m.shearModulus + 3.0 * m.lameLambda) * g1.trace(),
                    1e-14 * std::abs(s1.trace()) + 1e-9);
    }
}

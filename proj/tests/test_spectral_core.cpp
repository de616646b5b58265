#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ncg/errors.hpp"
#include "ncg/models.hpp"
#include "ncg/proptest.hpp"
#include "ncg/spectrum.hpp"
#include "oracles.hpp"

using namespace ncg;

namespace {

WeightedSpectrum circle_inverse(int N) { return circle_dirac(N).inverse_power(1.0, KernelPolicy::Drop); }

}  // namespace

TEST(Spectrum, MuIsTheDecreasingRearrangement) {
    WeightedSpectrum s({{0.5, 1.0}, {2.0, 0.5}, {1.0, 2.0}});
    EXPECT_THROW(mu(s, 0.0), PreconditionError);
    EXPECT_DOUBLE_EQ(mu(s, 0.01), 2.0);
    EXPECT_DOUBLE_EQ(mu(s, 0.49), 2.0);
    EXPECT_DOUBLE_EQ(mu(s, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(mu(s, 2.4), 1.0);
    EXPECT_DOUBLE_EQ(mu(s, 2.5), 0.5);
    EXPECT_DOUBLE_EQ(mu(s, 3.6), 0.0);
}

TEST(Spectrum, SigmaIntegratesMu) {
    WeightedSpectrum s({{0.5, 1.0}, {2.0, 0.5}, {1.0, 2.0}});
    EXPECT_DOUBLE_EQ(sigma(s, 0.25).value, 0.5);
    EXPECT_DOUBLE_EQ(sigma(s, 1.5).value, 1.0 + 1.0);
    EXPECT_DOUBLE_EQ(sigma(s, 10.0).value, 1.0 + 2.0 + 0.5);
}

TEST(Spectrum, CircleSigmaIsTwiceHarmonic) {
    auto s = circle_inverse(1000);
    EXPECT_NEAR(sigma(s, 20.0).value, 2.0 * 7381.0 / 2520.0, 1e-12);
    EXPECT_DOUBLE_EQ(mu(s, 5.0), 1.0 / 3.0);
}

TEST(Spectrum, RejectsNegativeWeights) {
    EXPECT_THROW(WeightedSpectrum({{1.0, -1.0}}), PreconditionError);
}

TEST(Norms, CircleHilbertSchmidt) {
    auto s = circle_inverse(200000);
    EXPECT_NEAR(norm_p(s, 2.0), oracle::sqrt_pi_squared_over_3, 1e-5);
    EXPECT_NEAR(std::pow(norm_p(s, 2.0), 2.0), oracle::pi_squared_over_3, 2e-5);
}

TEST(Norms, HarmonicProfile) {
    auto h = harmonic_profile();
    EXPECT_NEAR(norm_p(h, 2.0), 1.0, 1e-12);
    EXPECT_TRUE(std::isinf(norm_p(h, 1.0)));
    auto n = norm_1inf(h);
    EXPECT_NEAR(n.value, 1.0, 1e-6);
}

TEST(Classify, HarmonicIsDixmierNotTraceClass) {
    auto c = classify(harmonic_profile(), 1.0);
    EXPECT_EQ(c.trace_class, Membership::No);
    EXPECT_EQ(c.dixmier, Membership::Yes);
    EXPECT_EQ(c.tau_compact, Membership::Yes);
    EXPECT_NO_THROW(check_inclusion_chain(c));
}

TEST(Classify, FastDecayIsTraceClass) {
    auto c = classify(power_profile(2.0), 1.0);
    EXPECT_EQ(c.trace_class, Membership::Yes);
    EXPECT_EQ(c.dixmier, Membership::Yes);
    EXPECT_NO_THROW(check_inclusion_chain(c));
}

TEST(Classify, SlowDecayIsOutsideDixmier) {
    auto c = classify(power_profile(0.5), 1.0);
    EXPECT_EQ(c.dixmier, Membership::No);
    EXPECT_EQ(c.trace_class, Membership::No);
    auto c2 = classify(power_profile(0.5), 2.0);
    EXPECT_EQ(c2.weak_p, Membership::Yes);
}

TEST(Classify, TorusInverseLaplacianIsDixmier) {
    auto s = torus_model(2, TorusKind::Laplacian, 300).inverse_power(1.0);
    auto c = classify(s, 1.0);
    EXPECT_EQ(c.dixmier, Membership::Yes);
    EXPECT_EQ(c.trace_class, Membership::No);
}

TEST(WeightedMatrices, SNumbersCarryTheTraceWeight) {
    WeightedMatrixAlgebra alg{3, 0.25};
    MatrixXcd x = MatrixXcd::Zero(3, 3);
    x(0, 0) = 2.0;
    x(1, 1) = cd(0.0, -1.0);
    auto s = alg.s_numbers(x);
    EXPECT_DOUBLE_EQ(mu(s, 0.1), 2.0);
    EXPECT_DOUBLE_EQ(mu(s, 0.3), 1.0);
    EXPECT_DOUBLE_EQ(mu(s, 0.6), 0.0);
}

TEST(PropertySuite, PassesOnDefaultSeed) {
    auto r = run_property_suite(42, 200);
    ASSERT_EQ(r.outcomes.size(), 12u);
    for (const auto& o : r.outcomes) {
        EXPECT_GT(o.cases, 0) << o.name;
        EXPECT_EQ(o.failures, 0) << o.name << ": " << o.first_failure;
        EXPECT_LE(o.worst, 1e-10) << o.name;
    }
    EXPECT_TRUE(r.passed());
}

TEST(PropertySuite, PassesAcrossSeeds) {
    for (std::uint64_t seed : {1u, 7u, 2024u}) EXPECT_TRUE(run_property_suite(seed, 40).passed()) << seed;
}

TEST(PropertySuite, Deterministic) {
    auto a = run_property_suite(5, 20), b = run_property_suite(5, 20);
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        EXPECT_EQ(a.outcomes[i].cases, b.outcomes[i].cases);
        EXPECT_EQ(a.outcomes[i].worst, b.outcomes[i].worst);
    }
}

// σ_t(T) = inf{‖T₁‖₁ + t‖T₂‖}: random splits never beat σ.
TEST(PropertySuite, SigmaNeverBeatenByRandomSplits) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    WeightedMatrixAlgebra alg{5, 0.7};
    MatrixXcd T(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) T(i, j) = cd(g(rng), g(rng));
    auto s = alg.s_numbers(T);
    auto tn = [&](const MatrixXcd& x) { return alg.c * Eigen::JacobiSVD<MatrixXcd>(x).singularValues().sum(); };
    auto on = [](const MatrixXcd& x) { return Eigen::JacobiSVD<MatrixXcd>(x).singularValues()(0); };
    for (double t : {0.1, 0.9, 2.0, 3.4}) {
        double st = sigma(s, t).value;
        for (int rep = 0; rep < 50; ++rep) {
            MatrixXcd X(5, 5);
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j) X(i, j) = cd(g(rng), g(rng));
            EXPECT_LE(st, tn(X) + t * on(T - X) + 1e-10);
        }
    }
}

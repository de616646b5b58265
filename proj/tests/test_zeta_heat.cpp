#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ncg/errors.hpp"
#include "ncg/models.hpp"
#include "ncg/zeta_heat.hpp"
#include "oracles.hpp"

using namespace ncg;

TEST(Counting, CircleModes) {
    auto s = circle_dirac(100).abs_spectrum(KernelPolicy::Drop);
    EXPECT_DOUBLE_EQ(counting(s, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(counting(s, 3.0), 6.0);
    auto b = circle_dirac(1000).abs_spectrum(KernelPolicy::Bracket);
    EXPECT_DOUBLE_EQ(counting(b, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(counting(b, 3.2), 7.0);
}

TEST(SpectralDimension, CircleAndTorus) {
    EXPECT_DOUBLE_EQ(spectral_dimension(circle_dirac(100000).abs_spectrum(KernelPolicy::Drop)).d, 1.0);
    EXPECT_DOUBLE_EQ(spectral_dimension(torus_model(2, TorusKind::Dirac, 2000).abs_spectrum(KernelPolicy::Drop)).d, 2.0);
    auto lap = spectral_dimension(torus_model(2, TorusKind::Laplacian, 2000).abs_spectrum());
    EXPECT_DOUBLE_EQ(lap.d, 1.0);
}

TEST(Zeta, CircleBasel) {
    auto s = circle_dirac(100000).abs_spectrum(KernelPolicy::Drop);
    auto z = zeta(s, -2.0);
    EXPECT_NEAR(z.value.real(), oracle::pi_squared_over_3, z.tail_bound + 1e-9);
    EXPECT_LT(z.tail_bound, 1e-4);
}

TEST(Zeta, TorusEpstein) {
    auto s = torus_model(2, TorusKind::Dirac, 400).abs_spectrum(KernelPolicy::Drop);
    auto z = zeta(s, -4.0);
    // two spinor components per lattice point
    EXPECT_NEAR(z.value.real() / 2.0, oracle::epstein_z2_at_4, z.tail_bound + 1e-7);
    EXPECT_NEAR(oracle::epstein_z2_at_4, 4.0 * oracle::zeta2 * oracle::catalan, 1e-13);
}

TEST(Zeta, RefusesInsideTheAbscissa) {
    auto s = circle_dirac(1000).abs_spectrum(KernelPolicy::Drop);
    EXPECT_THROW(zeta(s, -0.5), PreconditionError);
}

TEST(Residue, CircleGivesTwo) {
    auto r = residue_to_dixmier(circle_dirac(1000000).abs_spectrum(KernelPolicy::Drop));
    EXPECT_DOUBLE_EQ(r.d, 1.0);
    EXPECT_NEAR(r.trace, 2.0, 1e-6);
    EXPECT_NEAR(r.A, -2.0, 1e-6);
}

TEST(Residue, TorusGivesTwoPi) {
    auto r = residue_to_dixmier(torus_model(2, TorusKind::Dirac, 2000).abs_spectrum(KernelPolicy::Drop));
    EXPECT_NEAR(r.trace, 2.0 * oracle::pi, 1e-4);
}

TEST(Weyl, CircleRatio) {
    auto w = weyl_ratio(circle_dirac(1000000).abs_spectrum(KernelPolicy::Drop));
    EXPECT_TRUE(w.converged);
    EXPECT_NEAR(w.value, 2.0, 0.01);
}

TEST(Cp, Constants) {
    EXPECT_NEAR(cp_constant(gaussian_decay(), 1.0), oracle::sqrt_pi / 2.0, 1e-12);
    EXPECT_NEAR(cp_constant(gaussian_decay(), 2.0), 1.0, 1e-12);
    EXPECT_NEAR(cp_constant(exponential_decay(), 2.0), 2.0, 1e-12);
    EXPECT_NEAR(cp_constant(smoothed_indicator(), 1.0), 1.5, 1e-10);
}

TEST(Regularized, CircleGaussianAndIndicator) {
    auto s = circle_dirac(1000000).abs_spectrum(KernelPolicy::Drop);
    std::vector<double> one(s.size(), 1.0);
    auto g = regularized_integral(s, one, gaussian_decay(), 1.0);
    EXPECT_TRUE(g.agree);
    EXPECT_NEAR(g.estimate.value, oracle::sqrt_pi, 0.02 * oracle::sqrt_pi);
    auto ind = regularized_integral(s, one, smoothed_indicator(), 1.0);
    EXPECT_TRUE(ind.agree);
    EXPECT_NEAR(ind.estimate.value, 3.0, 0.02 * 3.0);
}

TEST(Regularized, TorusIndicator) {
    auto s = torus_model(2, TorusKind::Dirac, 400).abs_spectrum(KernelPolicy::Drop);
    std::vector<double> one(s.size(), 1.0);
    auto r = regularized_integral(s, one, smoothed_indicator(), 2.0);
    EXPECT_TRUE(r.agree);
    EXPECT_NEAR(r.estimate.value, r.expected, 0.02 * r.expected);
}

TEST(Heat, TorusWeil) {
    auto s = torus_model(2, TorusKind::Dirac, 400).abs_spectrum(KernelPolicy::Drop);
    std::vector<double> one(s.size(), 1.0);
    auto h = heat_trace_check(s, one, 2.0);
    EXPECT_TRUE(h.agree);
    EXPECT_DOUBLE_EQ(h.constant, 1.0);
    EXPECT_NEAR(h.estimate.value, 2.0 * oracle::pi, 0.01 * 2.0 * oracle::pi);
}

TEST(Regularized, MultiplierScalesLinearly) {
    auto s = circle_dirac(100000).abs_spectrum(KernelPolicy::Drop);
    std::vector<double> one(s.size(), 1.0), half(s.size(), 0.5);
    auto a = integral_of(s, one, 1.0), b = integral_of(s, half, 1.0);
    EXPECT_NEAR(b.value, 0.5 * a.value, 1e-9);
}

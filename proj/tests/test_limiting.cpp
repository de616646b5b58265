#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ncg/errors.hpp"
#include "ncg/limiting.hpp"
#include "ncg/models.hpp"
#include "ncg/numeric.hpp"
#include "oracles.hpp"

using namespace ncg;

namespace {

WeightedSpectrum circle_inverse(int N) { return circle_dirac(N).inverse_power(1.0, KernelPolicy::Drop); }

}  // namespace

TEST(LogCesaro, FixesConstants) {
    auto grid = log_grid(2.0, 1e6, 32);
    std::vector<double> f(grid.size(), 0.75);
    for (double v : log_cesaro(grid, f)) EXPECT_NEAR(v, 0.75, 1e-14);
}

TEST(LogCesaro, ShrinksLogOscillation) {
    auto grid = log_grid(2.0, 1e8, 64);
    std::vector<double> f;
    for (double t : grid) f.push_back(1.0 + 1.0 / std::log(t));
    auto m = log_cesaro(grid, f);
    EXPECT_GT(m.back(), 1.0);
    EXPECT_LT(std::abs(m.back() - 1.0), 2.0 * std::abs(f.back() - 1.0) * std::log(std::log(grid.back())));
}

TEST(OmegaLimit, ConvergentSequence) {
    auto e = omega_limit([](double t) { return 3.0 + 1.0 / std::log(t); }, 2.0, 1e9);
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.value, 3.0, 1e-3 * 3.0 + e.error_band);
}

TEST(OmegaLimit, OscillationIsNotMeasurable) {
    auto e = omega_limit([](double t) { return std::sin(std::log(t)); }, 1.0, 1e8);
    EXPECT_FALSE(e.converged);
    EXPECT_GE(e.value - e.error_band, -1.0);
    EXPECT_LE(e.value + e.error_band, 1.0);
}

TEST(OmegaLimit, RejectsBadConfig) {
    LimitProcessConfig cfg;
    cfg.window_decades = 0.0;
    EXPECT_THROW(cfg.validate(), PreconditionError);
}

TEST(Dixmier, HarmonicIsOne) {
    auto e = dixmier_trace(harmonic_profile());
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.value, 1.0, 1e-3);
    EXPECT_LE(e.error_band, 1e-3);
}

TEST(Dixmier, CircleIsTwo) {
    auto e = dixmier_trace(circle_inverse(1000000));
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.value, 2.0, 1e-3);
}

TEST(Dixmier, FirstDiagnosticIsSigmaOverLog2) {
    auto e = dixmier_trace(circle_dirac(1000).inverse_power(1.0, KernelPolicy::Bracket));
    ASSERT_FALSE(e.levels.empty());
    EXPECT_DOUBLE_EQ(e.grid.front(), 1.0);
    EXPECT_NEAR(e.levels[0].front(), oracle::inv_log2, 1e-14);
}

TEST(Dixmier, VanishesOnTraceClass) {
    auto e = dixmier_trace(power_profile(2.0));
    EXPECT_NEAR(e.value, 0.0, 1e-3);
    auto e2 = dixmier_trace(circle_dirac(100000).inverse_power(2.0, KernelPolicy::Drop));
    EXPECT_NEAR(e2.value, 0.0, 2e-3);
}

TEST(Dixmier, LinearInScaleAndTraceWeight) {
    auto s = circle_inverse(100000);
    auto a = dixmier_trace(s), b = dixmier_trace(s.scaled(3.0)), c = dixmier_trace(s.weights_scaled(0.5));
    EXPECT_NEAR(b.value, 3.0 * a.value, 1e-9);
    EXPECT_NEAR(c.value, 0.5 * a.value, 1e-3);
}

TEST(Dixmier, TorusIsPi) {
    auto e = dixmier_trace(torus_model(2, TorusKind::Laplacian, 2000).inverse_power(1.0));
    EXPECT_TRUE(e.converged);
    EXPECT_NEAR(e.value, oracle::pi, 0.02 * oracle::pi);
}

TEST(TruncatedTraces, AgreeOnCircle) {
    auto s = circle_inverse(1000000);
    std::vector<double> one(s.size(), 1.0);
    auto tt = truncated_trace_formulas(one, s);
    EXPECT_TRUE(tt.agree);
    EXPECT_NEAR(tt.by_singular_values.value, 2.0, 0.01);
    EXPECT_NEAR(tt.by_level.value, 2.0, 0.01);
}

TEST(TruncatedTraces, AlternatingSignGivesZero) {
    auto s = circle_inverse(1000000);
    std::vector<double> m(s.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::lround(1.0 / s.atoms()[i].value) % 2 == 0 ? 1.0 : -1.0;
    auto tt = truncated_trace_formulas(m, s);
    EXPECT_TRUE(tt.agree);
    EXPECT_NEAR(tt.reference.value, 0.0, tt.reference.error_band + 1e-3);
    EXPECT_NEAR(tt.by_level.value, 0.0, tt.by_level.error_band + 1e-3);
}

TEST(TruncatedTraces, AgreeOnTorus) {
    auto s = torus_model(2, TorusKind::Laplacian, 2000).inverse_power(1.0);
    std::vector<double> one(s.size(), 1.0);
    auto tt = truncated_trace_formulas(one, s);
    EXPECT_TRUE(tt.agree);
    EXPECT_TRUE(tt.by_singular_values.converged);
    EXPECT_TRUE(tt.by_level.converged);
}

TEST(Bilinear, ProductOfDixmierElementsVanishes) {
    auto s = circle_inverse(100000);
    auto e = bilinear_vanishing_check(s, s);
    EXPECT_NEAR(e.value, 0.0, 1e-3);
}

TEST(Agreement, Bands) {
    LimitEstimate a, b;
    a.value = 1.0;
    a.error_band = 0.1;
    b.value = 1.15;
    b.error_band = 0.1;
    EXPECT_TRUE(agree_within_bands(a, b));
    b.value = 1.25;
    EXPECT_FALSE(agree_within_bands(a, b));
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ncg/errors.hpp"
#include "ncg/symbols.hpp"
#include "oracles.hpp"

using namespace ncg;

namespace {

TrigPolynomial random_trig(std::mt19937_64& rng, int p, int terms, int degree) {
    std::uniform_int_distribution<int> f(-degree, degree);
    std::normal_distribution<double> g;
    TrigPolynomial t(p);
    for (int i = 0; i < terms; ++i) {
        MultiIndex m(p);
        for (auto& x : m) x = f(rng);
        t.add(m, cd(g(rng), g(rng)));
    }
    return t;
}

}  // namespace

TEST(Cosphere, Volumes) {
    const double want[] = {2.0, 2.0 * oracle::pi, 4.0 * oracle::pi, 2.0 * oracle::pi * oracle::pi};
    for (int p = 1; p <= 4; ++p) {
        EXPECT_NEAR(sphere_volume(p), want[p - 1], 1e-14);
        EXPECT_NEAR(cosphere_quadrature(p, 12).volume(), want[p - 1], 1e-13) << p;
    }
}

TEST(Cosphere, SecondMoments) {
    // ∫ ξ₁² = vol/p
    for (int p = 2; p <= 4; ++p) {
        auto q = cosphere_quadrature(p, 16);
        double s = 0.0;
        for (std::size_t i = 0; i < q.weights.size(); ++i) s += q.weights[i] * q.nodes[i][0] * q.nodes[i][0];
        EXPECT_NEAR(s, sphere_volume(p) / p, 1e-13 * sphere_volume(p)) << p;
    }
}

TEST(Residue, LocalDensityOfConstantSymbol) {
    auto q = cosphere_quadrature(2);
    auto one = scalar_symbol(-2, TrigPolynomial::constant(2, 1.0));
    double x[2] = {0.3, 0.1};
    EXPECT_NEAR(local_residue(one, x, q), 1.0 / (2.0 * oracle::pi), 1e-15);
    EXPECT_NEAR(chart_residue(one, q), 2.0 * oracle::pi, 1e-12);
}

TEST(Residue, AnisotropicSymbol) {
    auto q = cosphere_quadrature(2);
    auto s = scalar_symbol(-2, TrigPolynomial::constant(2, 1.0));
    s.principal = [](std::span<const double>, std::span<const double> k) {
        return MatrixXcd::Constant(1, 1, k[0] * k[0]);
    };
    double x[2] = {0.0, 0.0};
    EXPECT_NEAR(local_residue(s, x, q), 1.0 / (4.0 * oracle::pi), 1e-15);
}

TEST(Residue, FoliatedTorusIsPi) {
    auto q = cosphere_quadrature(2);
    auto one = scalar_symbol(-2, TrigPolynomial::constant(2, 1.0));
    std::vector<double> lam{0.25, 0.75};
    EXPECT_NEAR(foliated_residue(one, lam, q), oracle::pi, 1e-12);
}

TEST(Residue, LinearInTransverseMass) {
    auto q = cosphere_quadrature(2);
    auto one = scalar_symbol(-2, TrigPolynomial::constant(2, 1.0));
    double base = foliated_residue(one, std::vector<double>{1.0}, q);
    for (double m : {0.1, 0.5, 2.0, 7.25}) {
        std::vector<double> lam{0.3 * m, 0.7 * m};
        EXPECT_NEAR(foliated_residue(one, lam, q), m * base, 1e-14 * m * base);
    }
}

TEST(Residue, OscillatingCoefficientsIntegrateAway) {
    auto q = cosphere_quadrature(2);
    TrigPolynomial f(2);
    f.add({0, 0}, 1.0);
    f.add({1, 0}, 0.5);
    f.add({-1, 0}, 0.5);
    std::vector<double> lam{1.0};
    EXPECT_NEAR(foliated_residue(scalar_symbol(-2, f), lam, q), oracle::pi, 1e-12);
}

TEST(Residue, MatrixSymbolTracesTheFibre) {
    auto q = cosphere_quadrature(2);
    std::map<MultiIndex, MatrixXcd> c;
    c[{0, 0}] = MatrixXcd::Identity(2, 2);
    auto s = fourier_symbol(-2, 2, c);
    EXPECT_NEAR(chart_residue(s, q), 4.0 * oracle::pi, 1e-12);
}

TEST(ConnesTrace, EigenvalueAndResidueSidesAgree) {
    TrigPolynomial f(2);
    f.add({0, 0}, 1.0);
    f.add({1, 0}, 0.5);
    f.add({-1, 0}, 0.5);
    auto ct = connes_trace_check(f, 2, 2000);
    EXPECT_TRUE(ct.agree);
    EXPECT_NEAR(ct.residue, oracle::pi, 1e-10);
}

TEST(ConnesTrace, MeanZeroGivesZero) {
    TrigPolynomial f(2);
    f.add({1, 0}, 0.5);
    f.add({-1, 0}, 0.5);
    auto ct = connes_trace_check(f, 2, 400);
    EXPECT_NEAR(ct.residue, 0.0, 1e-14);
    EXPECT_NEAR(ct.eigen.reference.value, 0.0, 1e-12);
}

TEST(Hochschild, ConstantArgumentsVanish) {
    auto q = cosphere_quadrature(2);
    auto c1 = TrigPolynomial::constant(2, 2.0), c2 = TrigPolynomial::constant(2, cd(0.0, 1.0));
    std::mt19937_64 rng(3);
    auto a0 = random_trig(rng, 2, 4, 2);
    std::vector<TrigPolynomial> a{a0, c1, c2};
    EXPECT_LT(std::abs(hochschild_pairing(a, q).value), 1e-15);
    std::vector<TrigPolynomial> b{a0, random_trig(rng, 2, 3, 2), c2};
    EXPECT_LT(std::abs(hochschild_pairing(b, q).value), 1e-15);
}

TEST(Hochschild, Antisymmetric) {
    auto q = cosphere_quadrature(2);
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        auto a0 = random_trig(rng, 2, 4, 2), a1 = random_trig(rng, 2, 4, 2), a2 = random_trig(rng, 2, 4, 2);
        std::vector<TrigPolynomial> x{a0, a1, a2}, y{a0, a2, a1};
        cd u = hochschild_pairing(x, q).value, v = hochschild_pairing(y, q).value;
        EXPECT_LT(std::abs(u + v), 1e-10 * std::max(1.0, std::abs(u)));
    }
}

TEST(Hochschild, OneConstantAcrossRandomTriples) {
    auto q = cosphere_quadrature(2);
    std::mt19937_64 rng(17);
    cd first = 0.0;
    int used = 0;
    while (used < 10) {
        auto a0 = random_trig(rng, 2, 4, 2), a1 = random_trig(rng, 2, 4, 2), a2 = random_trig(rng, 2, 4, 2);
        std::vector<TrigPolynomial> a{a0, a1, a2};
        auto h = hochschild_pairing(a, q);
        if (std::abs(h.analytic) < 1e-3) continue;
        if (used == 0) first = h.constant;
        EXPECT_LT(std::abs(h.constant - first), 1e-6 * std::abs(first));
        ++used;
    }
    EXPECT_LT(std::abs(first - hochschild_constant(2)), 1e-12);
    EXPECT_LT(std::abs(hochschild_constant(2) - cd(0.0, -1.0 / (2.0 * oracle::pi))), 1e-15);
}

TEST(Hochschild, StokesKillsExactForms) {
    auto q = cosphere_quadrature(2);
    std::vector<TrigPolynomial> a{TrigPolynomial::constant(2, 1.0), TrigPolynomial::monomial({1, 0}),
                                  TrigPolynomial::monomial({0, 1})};
    auto h = hochschild_pairing(a, q);
    EXPECT_LT(std::abs(h.value), 1e-15);
    EXPECT_LT(std::abs(h.analytic), 1e-15);
}

TEST(Hochschild, FourTorusConstant) {
    auto q = cosphere_quadrature(4, 8);
    std::vector<TrigPolynomial> a{TrigPolynomial::monomial({-1, -1, -1, -1}), TrigPolynomial::monomial({1, 0, 0, 0}),
                                  TrigPolynomial::monomial({0, 1, 0, 0}), TrigPolynomial::monomial({0, 0, 1, 0}),
                                  TrigPolynomial::monomial({0, 0, 0, 1})};
    auto h = hochschild_pairing(a, q);
    EXPECT_LT(std::abs(h.constant - hochschild_constant(4)), 1e-10);
}

TEST(Hochschild, OddDimensionRefused) {
    auto q = cosphere_quadrature(3);
    std::vector<TrigPolynomial> a(4, TrigPolynomial::constant(3, 1.0));
    EXPECT_THROW(hochschild_pairing(a, q), PreconditionError);
}

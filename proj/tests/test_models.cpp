#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "ncg/errors.hpp"
#include "ncg/models.hpp"
#include "oracles.hpp"

using namespace ncg;

namespace {

double shell_count(const DiagonalModel& m, std::int64_t n2) {
    for (const auto& s : m.shells)
        if (s.norm2 == n2) return s.count;
    return 0.0;
}

}  // namespace

TEST(Circle, ShellsAndSpectrum) {
    auto c = circle_dirac(10);
    EXPECT_EQ(c.shells.size(), 11u);
    EXPECT_DOUBLE_EQ(shell_count(c, 0), 1.0);
    EXPECT_DOUBLE_EQ(shell_count(c, 49), 2.0);
    auto ev = c.signed_eigenvalues();
    ASSERT_EQ(ev.size(), 21u);
    EXPECT_DOUBLE_EQ(ev.front(), -10.0);
    EXPECT_DOUBLE_EQ(ev.back(), 10.0);
}

TEST(Torus, SumOfTwoSquares) {
    auto t = torus_model(2, TorusKind::Laplacian, 30);
    EXPECT_DOUBLE_EQ(shell_count(t, 1), 4.0);
    EXPECT_DOUBLE_EQ(shell_count(t, 2), 4.0);
    EXPECT_DOUBLE_EQ(shell_count(t, 3), 0.0);
    EXPECT_DOUBLE_EQ(shell_count(t, 5), 8.0);
    EXPECT_DOUBLE_EQ(shell_count(t, 25), 12.0);
}

TEST(Torus, ThreeDimensionalShells) {
    auto t = torus_model(3, TorusKind::Laplacian, 10);
    EXPECT_DOUBLE_EQ(shell_count(t, 1), 6.0);
    EXPECT_DOUBLE_EQ(shell_count(t, 2), 12.0);
    EXPECT_DOUBLE_EQ(shell_count(t, 3), 8.0);
    EXPECT_DOUBLE_EQ(shell_count(t, 7), 0.0);
}

TEST(Torus, LatticeCountMatchesBallVolume) {
    auto t = torus_model(2, TorusKind::Laplacian, 1000);
    double n = 0.0;
    for (const auto& s : t.shells) n += s.count;
    EXPECT_NEAR(n / (oracle::pi * 1000.0 * 1000.0), 1.0, 1e-3);
}

TEST(Torus, DiracSpinorsDoubleTheWeights) {
    auto lap = torus_model(2, TorusKind::Laplacian, 50).abs_spectrum();
    auto dir = torus_model(2, TorusKind::Dirac, 50).abs_spectrum(KernelPolicy::Keep);
    EXPECT_DOUBLE_EQ(dir.total_weight(), 2.0 * lap.total_weight());
}

TEST(Kernel, Policies) {
    auto c = circle_dirac(1000);
    EXPECT_DOUBLE_EQ(c.abs_spectrum(KernelPolicy::Keep).total_weight(), 2001.0);
    EXPECT_DOUBLE_EQ(c.abs_spectrum(KernelPolicy::Drop).total_weight(), 2000.0);
    EXPECT_DOUBLE_EQ(c.abs_spectrum(KernelPolicy::Bracket).min_value(), 1.0);
    EXPECT_THROW(c.inverse_power(1.0, KernelPolicy::Keep), PreconditionError);
}

TEST(Foliation, MassScalesWeights) {
    auto fam = foliated_family(circle_dirac(100), {0.2, 0.3, 1.5});
    EXPECT_DOUBLE_EQ(fam.mass(), 2.0);
    double tr[3] = {1.0, 2.0, 3.0};
    EXPECT_DOUBLE_EQ(fam.trace(tr), 0.2 + 0.6 + 4.5);
    EXPECT_THROW(foliated_family(circle_dirac(10), {1.0, -1.0}), PreconditionError);
}

TEST(Clifford, Relations) {
    for (int p = 1; p <= 4; ++p) {
        auto g = clifford_generators(p);
        ASSERT_EQ(static_cast<int>(g.size()), p);
        Eigen::Index r = g[0].rows();
        EXPECT_EQ(r, 1 << (p / 2));
        for (int i = 0; i < p; ++i) {
            EXPECT_LT((g[i] - g[i].adjoint()).norm(), 1e-14);
            for (int j = 0; j < p; ++j) {
                MatrixXcd ac = g[i] * g[j] + g[j] * g[i];
                MatrixXcd want = MatrixXcd::Identity(r, r) * (i == j ? 2.0 : 0.0);
                EXPECT_LT((ac - want).norm(), 1e-14) << p << " " << i << " " << j;
            }
        }
        if (p % 2 == 0) {
            auto gam = chirality(p);
            EXPECT_LT((gam * gam - MatrixXcd::Identity(r, r)).norm(), 1e-14);
            for (const auto& gi : g) EXPECT_LT((gam * gi + gi * gam).norm(), 1e-14);
        }
    }
}

TEST(Symbols, WindingAndMinimum) {
    EXPECT_EQ(winding_number(TrigPolynomial::monomial({3})), 3);
    EXPECT_EQ(winding_number(TrigPolynomial::monomial({-2})), -2);
    TrigPolynomial u(1);
    u.add({1}, 1.0);
    u.add({2}, 0.3);
    EXPECT_EQ(winding_number(u), 1);
    EXPECT_NEAR(symbol_min_abs(u), 0.7, 1e-9);
    TrigPolynomial z(1);
    z.add({0}, 1.0);
    z.add({1}, 1.0);
    EXPECT_THROW(winding_number(z), PreconditionError);
}

TEST(Symbols, InverseIsExactForMonomials) {
    auto v = inverse_symbol(TrigPolynomial::monomial({2}, cd(0.0, 2.0)));
    ASSERT_EQ(v.coefficients().size(), 1u);
    EXPECT_NEAR(std::abs(v.coefficient({-2}) - cd(0.0, -0.5)), 0.0, 1e-15);
}

TEST(Symbols, InverseOfGeometricSymbol) {
    TrigPolynomial u(1);
    u.add({0}, 1.0);
    u.add({1}, 0.5);
    auto v = inverse_symbol(u);
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(std::abs(v.coefficient({k}) - std::pow(-0.5, k)), 0.0, 1e-13);
    auto one = u * v;
    EXPECT_NEAR(std::abs(one.coefficient({0}) - 1.0), 0.0, 1e-13);
}

TEST(Toeplitz, CommutatorRankIsWinding) {
    for (int m = -3; m <= 3; ++m) EXPECT_EQ(commutator_rank(TrigPolynomial::monomial({m})), std::abs(m)) << m;
}

TEST(Toeplitz, MultiplicationShiftsModes) {
    auto M = multiplication_matrix(TrigPolynomial::monomial({1}), -3, 3);
    EXPECT_EQ(M.rows(), 7);
    EXPECT_DOUBLE_EQ(M(4, 3).real(), 1.0);
    EXPECT_DOUBLE_EQ(M(3, 4).real(), 0.0);
}

TEST(Doubling, SymmetryOnTheDoubledSpace) {
    std::vector<double> ev{-2.0, -1.0, 0.0, 1.0, 2.0};
    auto d = doubling(ev);
    EXPECT_EQ(d.dim(), 6);
    EXPECT_LT((d.F * d.F - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-14);
    EXPECT_LT((d.F - d.F.transpose()).norm(), 1e-14);
    // F₁ and V anticommute
    EXPECT_LT((d.F1 * d.V + d.V * d.F1).norm(), 1e-14);
}

TEST(Lattice, DiracSquaresToLaplacian) {
    LatticeSpace L(2, 6, 2);
    SparseXcd D = L.dirac();
    SparseXcd D2 = D * D;
    SparseXcd lap = L.diagonal([](double n2) { return n2; });
    EXPECT_LT(MatrixXcd(D2 - lap).norm(), 1e-12);
    SparseXcd F = L.symmetry();
    MatrixXcd FF = MatrixXcd(F * F);
    EXPECT_LT((FF - MatrixXcd::Identity(L.dim(), L.dim())).norm(), 1e-12);
    SparseXcd g = L.grading();
    EXPECT_LT(MatrixXcd(g * F + F * g).norm(), 1e-12);
}

TEST(Lattice, MultiplicationIsTranslation) {
    LatticeSpace L(2, 5, 1);
    SparseXcd M = L.multiplication(TrigPolynomial::monomial({1, 0}));
    auto from = *L.index_of({0, 2}), to = *L.index_of({1, 2});
    EXPECT_DOUBLE_EQ(std::abs(M.coeff(to, from)), 1.0);
    EXPECT_FALSE(L.index_of({6, 0}).has_value());
}

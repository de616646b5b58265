#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "ncg/limiting.hpp"
#include "ncg/models.hpp"
#include "ncg/trig.hpp"

namespace ncg {

// Nodes and weights on the unit sphere S^{p-1} ⊂ R^p.
struct CosphereQuadrature {
    int p = 2;
    std::vector<std::vector<double>> nodes;
    std::vector<double> weights;
    int exactness = 0;  // integrates polynomials up to this total degree exactly

    double volume() const;
};

// p = 1: the two points ±1. p = 2: trapezoid with n nodes. p = 3: Gauss–Legendre in
// cos θ times trapezoid in φ. p = 4: Hopf coordinates, Gauss–Legendre in sin²η.
CosphereQuadrature cosphere_quadrature(int p, int n = 32);
double sphere_volume(int p);  // vol(S^{p-1})

// Principal symbol restricted to the cosphere, on a p-dimensional periodic chart.
struct ClassicalSymbol {
    int order = -2;
    int p = 2;
    int rank = 1;
    std::function<MatrixXcd(std::span<const double> x, std::span<const double> xi)> principal;
    int x_degree = 0;  // trigonometric degree in x (chart grids are exact below Nyquist)
};

// σ(x, ξ) = Σ_m M_m e^{im·x}, constant on the cosphere.
ClassicalSymbol fourier_symbol(int order, int p, const std::map<MultiIndex, MatrixXcd>& coeffs);
// σ(x, ξ) = f(x)·1.
ClassicalSymbol scalar_symbol(int order, const TrigPolynomial& f);

// (2π)^{-p} ∫_{|ξ|=1} tr σ(x, ξ) dξ.
double local_residue(const ClassicalSymbol& s, std::span<const double> x, const CosphereQuadrature& q);
// ∫ over the chart [0, 2π)^p of the residue density on an equispaced grid.
double chart_residue(const ClassicalSymbol& s, const CosphereQuadrature& q, int grid = 0);

// (1/p)·Σ_j Λ_j·∫ res(σ_j): one symbol per leaf.
double foliated_residue(std::span<const ClassicalSymbol> leaves, std::span<const double> lambda,
                        const CosphereQuadrature& q);
// Same symbol on every leaf.
double foliated_residue(const ClassicalSymbol& s, std::span<const double> lambda, const CosphereQuadrature& q);

struct ConnesTraceCheck {
    TruncatedTraces eigen;  // T = diagonal part of f on (1+Δ)^{-p/2}
    double residue = 0.0;   // (1/p)∫ f·res((1+Δ)^{-p/2})
    bool agree = false;
};

ConnesTraceCheck connes_trace_check(const TrigPolynomial& f, int p, int cutoff, const LimitProcessConfig& cfg = {});

struct HochschildValue {
    cd value;        // (1/p)·∫∫ tr(γ a⁰ c(da¹)…c(da^p)) |ξ|^{-p} over chart and cosphere, (2π)^{-p}
    cd analytic;     // ∫_{T^p} a⁰ da¹∧…∧da^p
    cd constant;     // value / analytic (NaN when analytic vanishes)
};

// Even p only; c(da) = -i Σ_j γ_j ∂_j a.
HochschildValue hochschild_pairing(std::span<const TrigPolynomial> a, const CosphereQuadrature& q);
// The normalization relating the two: -i/(2π) for p = 2.
cd hochschild_constant(int p);

}  // namespace ncg

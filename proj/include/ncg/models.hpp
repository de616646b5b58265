#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ncg/spectrum.hpp"
#include "ncg/trig.hpp"

namespace ncg {

using MatrixXcd = Eigen::MatrixXcd;
using SparseXcd = Eigen::SparseMatrix<cd>;

enum class TorusKind { Laplacian, Dirac };

// Keep: |D| with its kernel; Drop: kernel removed; Bracket: ⟨D⟩ = (D²+1)^{1/2}.
enum class KernelPolicy { Keep, Drop, Bracket };
const char* to_string(KernelPolicy k);

// Lattice shell: all points k with |k|² = norm2.
struct Shell {
    std::int64_t norm2;
    double count;
};

class DiagonalModel {
public:
    std::string kind;  // circle-dirac | torus-laplacian | torus-dirac
    int p = 1;
    int cutoff = 0;
    int spinor_rank = 1;
    bool even = false;
    double ball_volume = 2.0;   // volume of the unit ball in R^p
    double point_weight = 1.0;  // τ-weight of one mode (transverse scaling)
    std::vector<Shell> shells;  // increasing norm2

    bool laplacian() const { return kind == "torus-laplacian"; }

    // |D| (Dirac) or 1+Δ (Laplacian) as a τ-discrete spectrum with its tail.
    WeightedSpectrum abs_spectrum(KernelPolicy policy = KernelPolicy::Keep) const;
    // |D|^{-s} (Dirac, kernel per policy) or (1+Δ)^{-s}: compact spectrum.
    WeightedSpectrum inverse_power(double s, KernelPolicy policy = KernelPolicy::Bracket) const;
    // Circle only: eigenvalues -N…N in mode order.
    std::vector<double> signed_eigenvalues() const;
    // Tail tolerance appropriate for lattice-count fluctuations at this cutoff.
    double tail_tolerance() const;
};

DiagonalModel circle_dirac(int N);
DiagonalModel torus_model(int p, TorusKind kind, int R);

struct FoliatedFamily {
    DiagonalModel leaf;
    std::vector<double> lambda;  // transverse weights Λ_j

    double mass() const;
    // τ_Λ-spectrum of 1⊗X: each leaf atom weight multiplied by the Λ-mass.
    WeightedSpectrum spectrum(const WeightedSpectrum& leaf_spectrum) const;
    // τ_Λ(X) = Σ_j Λ_j Tr(X_j)
    double trace(std::span<const double> leaf_traces) const;
};

FoliatedFamily foliated_family(DiagonalModel leaf, std::vector<double> lambda);

// Concrete semifinite pair (M_n(C), c·Tr).
struct WeightedMatrixAlgebra {
    int n = 1;
    double c = 1.0;

    cd trace(const MatrixXcd& x) const { return c * x.trace(); }
    // Generalized s-numbers of x relative to c·Tr.
    WeightedSpectrum s_numbers(const MatrixXcd& x) const;
};

// Symmetry on H ⊕ Ker D for a diagonal D given by its eigenvalues.
struct Doubling {
    int n = 0;                       // dim H
    std::vector<int> kernel;         // indices of kernel modes in H
    Eigen::MatrixXd F1;              // sign(D), 0 on the kernel
    Eigen::MatrixXd V;               // exchanges Ker D with its copy
    Eigen::MatrixXd F;               // F1 + V on H ⊕ Ker D

    MatrixXcd embed(const MatrixXcd& a) const;  // a ⊕ 0
    int dim() const { return n + static_cast<int>(kernel.size()); }
};

Doubling doubling(std::span<const double> eigenvalues);

// Laurent symbols u(θ) = Σ c_m e^{imθ} on the circle (TrigPolynomial with p = 1).
double symbol_min_abs(const TrigPolynomial& u, int samples = 4096);
int winding_number(const TrigPolynomial& u, int samples = 4096);
// Fourier coefficients of 1/u, truncated once they fall below `tol`·max.
TrigPolynomial inverse_symbol(const TrigPolynomial& u, double tol = 1e-14);

// Multiplication by u on the modes lo…hi (rows and columns), truncated.
MatrixXcd multiplication_matrix(const TrigPolynomial& u, int lo, int hi);
// Rectangular block with rows r0…r1 and columns c0…c1 of multiplication by u.
MatrixXcd multiplication_block(const TrigPolynomial& u, int r0, int r1, int c0, int c1);

struct ToeplitzModel {
    TrigPolynomial symbol{1};
    int cutoff = 512;        // M
    double trace_scale = 1.0;

    MatrixXcd compressed(int last_mode) const;  // P u P on modes 0…last_mode
    MatrixXcd parametrix(int last_mode) const;  // P u^{-1} P on modes 0…last_mode
    // Section whose kernel is ker T restricted to modes 0…cutoff, computed exactly.
    MatrixXcd kernel_section() const;
    MatrixXcd cokernel_section() const;
};

ToeplitzModel toeplitz(TrigPolynomial u, int cutoff = 512, double trace_scale = 1.0);

// Numerical rank of [F, u] on the circle modes -L…L (F = sign, F(0) = +1).
int commutator_rank(const TrigPolynomial& u, int L = 64);

// Euclidean Clifford generators γ_1…γ_p (Hermitian, γ_iγ_j + γ_jγ_i = 2δ_ij) of
// rank 2^{⌊p/2⌋}, and the chirality for even p.
std::vector<MatrixXcd> clifford_generators(int p);
MatrixXcd chirality(int p);

// Truncated lattice Z^p ∩ {|k| ≤ R} ⊗ C^s with sparse operators.
class LatticeSpace {
public:
    LatticeSpace(int p, int R, int spinor_rank);

    int p() const { return p_; }
    int radius() const { return R_; }
    int spinor_rank() const { return s_; }
    Eigen::Index points() const { return static_cast<Eigen::Index>(pts_.size()); }
    Eigen::Index dim() const { return points() * s_; }
    const std::vector<MultiIndex>& lattice_points() const { return pts_; }
    double norm2(Eigen::Index point) const;
    std::optional<Eigen::Index> index_of(const MultiIndex& k) const;

    // Multiplication by a trigonometric polynomial (matrix coefficients act on spinors).
    SparseXcd multiplication(const TrigPolynomial& a) const;
    SparseXcd dirac() const;                       // Σ k_j γ_j
    SparseXcd symmetry() const;                    // D/|D|, γ_1 on the kernel
    SparseXcd grading() const;                     // chirality (even p)
    SparseXcd diagonal(const std::function<double(double)>& of_norm2) const;
    SparseXcd phase(double alpha) const;           // |D|^{iα}, 1 on the kernel

    // Σ over points with |k| ≤ r of the spinor trace of the diagonal blocks.
    cd interior_trace(const SparseXcd& x, double r) const;
    // Spinor-traced diagonal of x per point.
    std::vector<cd> point_diagonal(const SparseXcd& x) const;

private:
    int p_, R_, s_;
    std::vector<MultiIndex> pts_;
    std::vector<Eigen::Index> box_;  // (2R+1)^p → point index or -1
    Eigen::Index box_index(const MultiIndex& k) const;
};

}  // namespace ncg

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ncg/limiting.hpp"
#include "ncg/models.hpp"

namespace ncg {

struct KernelDimension {
    int dim = 0;
    double threshold = 0.0;
    double gap_ratio = std::numeric_limits<double>::infinity();  // smallest kept / largest dropped
};

// dim ker T from singular values below rel·‖T‖. Throws IllConditioned unless the
// values straddling the threshold are separated by a factor of at least 10³.
KernelDimension kernel_dimension(const MatrixXcd& T, double rel = 1e-8);

struct IndexResult {
    double value = 0.0;  // scale·(kernel − cokernel)
    int kernel = 0;
    int cokernel = 0;
    double gap_ratio = std::numeric_limits<double>::infinity();
};

IndexResult tau_index(const MatrixXcd& T, double scale = 1.0);
IndexResult tau_index(const ToeplitzModel& m);

struct FredholmPair {
    MatrixXcd T, S;
    double scale = 1.0;
    double p = 1.0;               // declared summability of the remainders
    Eigen::Index interior = -1;   // trace over the first `interior` basis vectors; -1 for all

    MatrixXcd A() const;  // 1 − ST
    MatrixXcd B() const;  // 1 − TS
    double trace(const MatrixXcd& x) const;
    double remainder_norm(double q) const;  // max(‖A‖_q, ‖B‖_q) against scale·Tr
};

// Square sections of T_u and T_{u^{-1}} wide enough that powers up to n_max are
// exact on the interior modes 0…cutoff.
FredholmPair toeplitz_pair(const ToeplitzModel& m, int n_max);

// τ(Aⁿ) − τ(Bⁿ). Refuses n < p.
double calderon_index(const FredholmPair& pair, int n);

struct PairingValue {
    double value = 0.0;    // normalized so that it equals the index for every admissible k
    double literal = 0.0;  // the cocycle formula as written, before the (−1)^k normalization
    int k = 0;
};

struct OddOptions {
    int modes = 64;        // circle modes −modes…modes
    double scale = 1.0;    // trace scale c
    double p = 1.0;        // summability exponent of the triple; 0 declares finite-rank commutators
    bool doubled = false;  // use F = F₁ + V on H ⊕ Ker D instead of F(0) = +1
};

// φ_{2k+1}♯Tr(u⁻¹, u, …, u⁻¹, u) on the circle with F = sign(D).
PairingValue odd_pairing(const TrigPolynomial& u, int k, const OddOptions& opt = {});

// Finite even model: grading γ, symmetry F (F² = 1, γF = −Fγ) on one space.
struct EvenModel {
    MatrixXcd F, gamma;
    double scale = 1.0;
    double p = 0.0;  // 0 declares finite-rank commutators

    EvenModel amplified(int N) const;  // F⊗1_N, γ⊗1_N
};

// (H ⊕ Ker D) ⊗ C² for the circle truncated at `modes`: γ = diag(1, −1), F = σ₁ ⊗ (F₁ + V).
EvenModel doubled_circle_even(int modes);

PairingValue even_pairing(const EvenModel& m, const MatrixXcd& e, int k);
// (−1)^{p/2}/2 · τ(γF[F,e]^{p+1}) for even p.
double even_pairing_minimal(const EvenModel& m, const MatrixXcd& e, int p);
// τ-index of e F e from eH₊ to eH₋, by kernel counting.
IndexResult even_index(const EvenModel& m, const MatrixXcd& e);

struct HypertraceResult {
    LimitEstimate lhs_re, lhs_im, rhs_re, rhs_im;
    double residual = 0.0;
    double band = 0.0;
    bool within = false;
};

// |∫_ω AT − ∫_ω TA| on the lattice, with ∫_ω X = τ_ω(X⟨D⟩^{-p}) from truncated traces.
HypertraceResult hypertrace_check(const LatticeSpace& L, const SparseXcd& T, const TrigPolynomial& A,
                                  const LimitProcessConfig& cfg = {});

// φ_{2k}(a⁰,…,a^{2k}) = (−1)^k τ(γ a⁰[F,a¹]…[F,a^{2k}]) with τ summed over |k| ≤ radius.
cd chern_cochain(const LatticeSpace& L, std::span<const TrigPolynomial> a, double radius);
// (bφ_{2k})(a⁰,…,a^{2k+1}).
cd chern_coboundary(const LatticeSpace& L, std::span<const TrigPolynomial> a, double radius);

}  // namespace ncg

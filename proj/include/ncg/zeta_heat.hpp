#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ncg/limiting.hpp"
#include "ncg/spectrum.hpp"

namespace ncg {

// N(λ) = τ(E_λ) for a positive τ-discrete spectrum (Discrete orientation).
double counting(const WeightedSpectrum& s, double lambda);

struct DimensionEstimate {
    double d = 0.0;          // snapped to the declared tail exponent when consistent
    double raw_slope = 0.0;  // least-squares slope of log N against log λ
    double residual = 0.0;   // max deviation of the fit, in log N
    bool snapped = false;
};

DimensionEstimate spectral_dimension(const WeightedSpectrum& s, double decades = 2.0);

struct ZetaValue {
    std::complex<double> value;
    double tail_bound = 0.0;
};

// Refuses Re z >= -d_T - margin.
ZetaValue zeta(const WeightedSpectrum& s, std::complex<double> z, double margin = 1e-9);

struct ResidueOptions {
    double margin = 0.5;  // x_j = -d - margin·2^{-j}
    int levels = 8;
    double stability = 1e-2;  // relative disagreement tolerated between the last two extrapolants
};

struct ResidueResult {
    double d = 0.0;
    double A = 0.0;
    double trace = 0.0;  // -A/d
    double error = 0.0;
    std::vector<double> xs;
    std::vector<double> gs;  // (x + d)·ζ(x)
    bool snapped = false;
};

ResidueResult residue_to_dixmier(const WeightedSpectrum& s, const ResidueOptions& opt = {});

LimitEstimate weyl_ratio(const WeightedSpectrum& s, const LimitProcessConfig& cfg = {});

struct DecayFunction {
    std::string name;
    std::function<double(double)> f;
    // |f| vanishes identically beyond this point (infinity when it only decays).
    double support = std::numeric_limits<double>::infinity();
};

DecayFunction gaussian_decay();          // e^{-x²}
DecayFunction exponential_decay();       // e^{-x}
DecayFunction smoothed_indicator();      // 1 on [0,1], C^∞ step down to 0 on [1,2]

// C_p(f) = p ∫_0^∞ f(t) t^{p-1} dt. Refuses f that is not integrable against t^{p-1}.
double cp_constant(const DecayFunction& f, double p);

struct RegularizedResult {
    LimitEstimate estimate;
    double constant = 0.0;  // C_p(f), Γ(p/2+1) or f(0)
    LimitEstimate reference;  // τ_ω(T·|D|^{-p})
    double expected = 0.0;    // constant · reference
    bool agree = false;
};

// D_abs: |D| (or ⟨D⟩) as a Discrete spectrum; T: one multiplier per atom of D_abs.
RegularizedResult regularized_integral(const WeightedSpectrum& D_abs, std::span<const double> T,
                                       const DecayFunction& f, double p, const LimitProcessConfig& cfg = {});
RegularizedResult heat_trace_check(const WeightedSpectrum& D_abs, std::span<const double> T, double p,
                                   const LimitProcessConfig& cfg = {});
RegularizedResult mellin_plateau(const WeightedSpectrum& D_abs, std::span<const double> T, const DecayFunction& f,
                                 double p, const LimitProcessConfig& cfg = {});

// τ_ω(T·|D|^{-p}) with the kernel of D discarded.
LimitEstimate integral_of(const WeightedSpectrum& D_abs, std::span<const double> T, double p,
                          const LimitProcessConfig& cfg = {});

}  // namespace ncg

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ncg/spectrum.hpp"

namespace ncg {

struct LimitProcessConfig {
    int points_per_decade = 64;
    int cesaro_iterations = 3;
    double window_decades = 2.0;
    double tolerance = 1e-3;  // relative to max(|value|, sup of |f| on the window, reference_scale)
    double reference_scale = 0.0;

    void validate() const;
};

struct LimitEstimate {
    double value = 0.0;
    double error_band = 0.0;
    bool converged = false;
    // Range of the final Cesàro iterate over the window.
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double fit_residual = 0.0;
    std::string method;
    std::vector<double> grid;
    std::vector<std::vector<double>> levels;  // f, Mf, M²f, …
};

// M(f)(t) = (1/log t)·(log t₀·f(t₀) + ∫_{t₀}^t f(s) ds/s), trapezoid in log s.
// f is extended by its first sample on [1, t₀], so constants are fixed exactly.
std::vector<double> log_cesaro(std::span<const double> grid, std::span<const double> f);

LimitEstimate omega_limit(std::span<const double> grid, std::span<const double> f,
                          const LimitProcessConfig& cfg = {});
LimitEstimate omega_limit(const std::function<double(double)>& f, double t_lo, double t_hi,
                          const LimitProcessConfig& cfg = {});

LimitEstimate dixmier_trace(const SingularValueFunction& f, const LimitProcessConfig& cfg = {});
LimitEstimate dixmier_trace(const WeightedSpectrum& s, const LimitProcessConfig& cfg = {});

// τ_ω(T·A) for a diagonal T given by one multiplier per atom of A
// (multiplier = τ(T·E)/τ(E) on the atom's spectral projection E).
LimitEstimate signed_dixmier_trace(std::span<const double> multipliers, const WeightedSpectrum& A,
                                   const LimitProcessConfig& cfg = {});

struct TruncatedTraces {
    LimitEstimate by_singular_values;  // τ(T·1_{(μ_t(A),∞)}(A)·A)/log(1+t)
    LimitEstimate by_level;            // τ(T·1_{(1/t,∞)}(A)·A)/log(1+t)
    LimitEstimate reference;           // τ_ω(T·A)
    bool agree = false;
};

TruncatedTraces truncated_trace_formulas(std::span<const double> multipliers, const WeightedSpectrum& A,
                                         const LimitProcessConfig& cfg = {});

// Pointwise product μ_t(S₁)μ_t(S₂) (which dominates the product's s-numbers
// up to a dilation by 2) fed through dixmier_trace.
WeightedSpectrum product_bound_spectrum(const WeightedSpectrum& s1, const WeightedSpectrum& s2);
LimitEstimate bilinear_vanishing_check(const WeightedSpectrum& s1, const WeightedSpectrum& s2,
                                       const LimitProcessConfig& cfg = {});

// Estimates are compatible when their intervals overlap.
bool agree_within_bands(const LimitEstimate& a, const LimitEstimate& b, double slack = 0.0);

}  // namespace ncg

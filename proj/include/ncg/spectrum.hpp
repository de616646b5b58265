#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ncg {

struct Atom {
    double value;
    double weight;
};

// Counting model N(λ) ≈ c·λ^d past the enumerated range.
struct PowerTail {
    double c;
    double d;
};

// Compact: the tail counts mass{value ≥ 1/λ} (values accumulate at 0).
// Discrete: the tail counts mass{value ≤ λ} (values grow without bound).
enum class Orientation { Compact, Discrete };

class WeightedSpectrum {
public:
    WeightedSpectrum() = default;
    explicit WeightedSpectrum(std::vector<Atom> atoms, std::optional<PowerTail> tail = std::nullopt,
                              Orientation orientation = Orientation::Compact,
                              double tail_tolerance = 0.05);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<PowerTail>& tail() const { return tail_; }
    Orientation orientation() const { return orientation_; }
    double tail_tolerance() const { return tail_tolerance_; }

    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }
    double total_weight() const { return cum_w_.empty() ? 0.0 : cum_w_.back(); }
    double max_value() const;
    double min_value() const;

    // Prefix sums over the decreasing order: entry k covers atoms [0, k).
    const std::vector<double>& cumulative_weight() const { return cum_w_; }
    const std::vector<double>& cumulative_moment() const { return cum_vw_; }

    double mass_above(double v) const;     // values > v
    double mass_at_least(double v) const;  // values >= v
    double mass_at_most(double v) const;   // values <= v

    // Power law fitted to the last enumerated decade; nullopt when too short.
    std::optional<PowerTail> fit_tail() const;

    WeightedSpectrum scaled(double lambda) const;
    WeightedSpectrum weights_scaled(double m) const;
    WeightedSpectrum powered(double s) const;
    WeightedSpectrum without_tail() const;
    WeightedSpectrum with_tail(std::optional<PowerTail> tail, Orientation orientation) const;
    WeightedSpectrum mapped(const std::function<double(double)>& f) const;  // tail dropped
    WeightedSpectrum dropping_values_below(double v) const;

    static WeightedSpectrum direct_sum(const WeightedSpectrum& a, const WeightedSpectrum& b);

    std::string cutoff_note;

private:
    void rebuild();
    void check_tail() const;

    std::vector<Atom> atoms_;
    std::vector<double> cum_w_;
    std::vector<double> cum_vw_;
    std::optional<PowerTail> tail_;
    Orientation orientation_ = Orientation::Compact;
    double tail_tolerance_ = 0.05;
};

struct SigmaValue {
    double value;
    double tail_bound;
};

// Non-increasing rearrangement t -> μ_t. Step functions come from a
// WeightedSpectrum; profiles are closed-form synthetic inputs.
class SingularValueFunction {
public:
    virtual ~SingularValueFunction() = default;
    virtual double mu(double t) const = 0;
    virtual SigmaValue sigma(double t) const = 0;
    // mu/sigma are exact for t below this.
    virtual double resolved_mass() const = 0;
    virtual bool finite_rank() const = 0;
    // μ_t ~ C·t^{-α} at infinity, when declared.
    virtual std::optional<double> declared_exponent() const = 0;
    // ∫_0^∞ μ_t^p dt, +inf when divergent.
    virtual double power_integral(double p) const = 0;
    // lim σ_t / log t, when it exists (only meaningful for α = 1).
    virtual double log_slope_limit() const = 0;
    // Points where μ jumps, restricted to (lo, hi).
    virtual std::vector<double> breakpoints(double lo, double hi) const = 0;
};

class StepSingularValues final : public SingularValueFunction {
public:
    // The spectrum must outlive this view.
    explicit StepSingularValues(const WeightedSpectrum& s, double extrapolation_decades = 3.0);

    double mu(double t) const override;
    SigmaValue sigma(double t) const override;
    double resolved_mass() const override;
    bool finite_rank() const override;
    std::optional<double> declared_exponent() const override;
    double power_integral(double p) const override;
    double log_slope_limit() const override;
    std::vector<double> breakpoints(double lo, double hi) const override;

    const WeightedSpectrum& spectrum() const { return *s_; }

private:
    const WeightedSpectrum* s_;
    double extrapolation_decades_;
};

class ProfileSingularValues final : public SingularValueFunction {
public:
    ProfileSingularValues(std::string name, std::function<double(double)> mu,
                          std::function<double(double)> sigma, double exponent,
                          std::function<double(double)> power_integral, double log_slope);

    double mu(double t) const override { return mu_(t); }
    SigmaValue sigma(double t) const override { return {sigma_(t), 0.0}; }
    double resolved_mass() const override;
    bool finite_rank() const override { return false; }
    std::optional<double> declared_exponent() const override { return exponent_; }
    double power_integral(double p) const override { return power_integral_(p); }
    double log_slope_limit() const override { return log_slope_; }
    std::vector<double> breakpoints(double, double) const override { return {}; }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::function<double(double)> mu_;
    std::function<double(double)> sigma_;
    double exponent_;
    std::function<double(double)> power_integral_;
    double log_slope_;
};

// μ_t = (1+t)^{-a}.
ProfileSingularValues power_profile(double a);
inline ProfileSingularValues harmonic_profile() { return power_profile(1.0); }

// Unit cells [k, k+1) of the profile, each atom carrying the cell average.
WeightedSpectrum atomize(const SingularValueFunction& f, std::size_t cells);

double mu(const WeightedSpectrum& s, double t);
SigmaValue sigma(const WeightedSpectrum& s, double t);
double norm_p(const SingularValueFunction& f, double p);
double norm_p(const WeightedSpectrum& s, double p);

struct Norm1InfResult {
    double value;
    double grid_error;
    double tail_bound;
    double argmax_t;  // +inf when the sup is the asymptotic limit
};

Norm1InfResult norm_1inf(const SingularValueFunction& f, int points_per_decade = 64);
Norm1InfResult norm_1inf(const WeightedSpectrum& s, int points_per_decade = 64);

enum class Membership { Yes, No, Indeterminate };
const char* to_string(Membership m);

struct IdealClassification {
    double p = 1.0;
    Membership tau_compact = Membership::Indeterminate;
    Membership trace_class = Membership::Indeterminate;  // L¹
    Membership dixmier = Membership::Indeterminate;      // L^{1,∞}
    Membership weak_p = Membership::Indeterminate;       // L^{p,∞}
    double exponent = 0.0;                               // α in μ_t ~ t^{-α}
    double data_exponent = 0.0;
    double fit_residual = 0.0;
    double sup_sigma_over_log = 0.0;
    double sup_sigma_over_power = 0.0;
    std::string basis;
};

struct ClassifyOptions {
    double window = 0.05;   // allowed |α_data − α_declared|
    double decades = 2.0;   // resolved decades used for the slope fit
};

IdealClassification classify(const SingularValueFunction& f, double p, const ClassifyOptions& opt = {});
IdealClassification classify(const WeightedSpectrum& s, double p, const ClassifyOptions& opt = {});

// Throws std::logic_error when the inclusion chain is broken.
void check_inclusion_chain(const IdealClassification& c);

}  // namespace ncg

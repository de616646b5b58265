#include "ncg/limiting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncg/errors.hpp"
#include "ncg/numeric.hpp"

namespace ncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinDecades = 2.0;

}  // namespace

void LimitProcessConfig::validate() const {
    if (points_per_decade < 4) throw PreconditionError("need at least 4 grid points per decade");
    if (cesaro_iterations < 1) throw PreconditionError("cesaro_iterations must be >= 1");
    if (!(window_decades > 0.0)) throw PreconditionError("window must be positive");
    if (!(tolerance > 0.0)) throw PreconditionError("tolerance must be positive");
}

std::vector<double> log_cesaro(std::span<const double> grid, std::span<const double> f) {
    if (grid.size() != f.size() || grid.size() < 2) throw PreconditionError("log_cesaro: bad sample sizes");
    if (!(grid.front() >= 1.0)) throw PreconditionError("log_cesaro: grid must start at t >= 1");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw PreconditionError("log_cesaro: grid must increase strictly");
    if (std::log10(grid.back() / grid.front()) < kMinDecades - 1e-9)
        throw PreconditionError("log_cesaro: grid spans fewer than 2 decades");

    std::vector<double> out(grid.size());
    double l0 = std::log(grid.front());
    double acc = l0 * f[0];
    out[0] = f[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double li = std::log(grid[i]);
        double lp = std::log(grid[i - 1]);
        acc += 0.5 * (f[i] + f[i - 1]) * (li - lp);
        out[i] = acc / li;
    }
    return out;
}

LimitEstimate omega_limit(std::span<const double> grid, std::span<const double> f, const LimitProcessConfig& cfg) {
    cfg.validate();
    for (double v : f)
        if (!std::isfinite(v)) throw PreconditionError("omega_limit: samples must be bounded");

    LimitEstimate est;
    est.grid.assign(grid.begin(), grid.end());
    est.levels.emplace_back(f.begin(), f.end());
    for (int j = 0; j < cfg.cesaro_iterations; ++j) est.levels.push_back(log_cesaro(grid, est.levels.back()));

    double t_win = grid.back() / std::pow(10.0, cfg.window_decades);
    if (t_win < grid.front()) throw PreconditionError("omega_limit: window exceeds the grid");
    std::size_t w0 = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t_win) - grid.begin());
    std::size_t nw = grid.size() - w0;
    if (nw < 8) throw PreconditionError("omega_limit: window holds fewer than 8 samples");

    std::vector<double> u(nw), y(nw);
    double scale = 0.0;
    for (std::size_t i = 0; i < nw; ++i) {
        u[i] = 1.0 / std::log1p(grid[w0 + i]);
        y[i] = f[w0 + i];
        scale = std::max(scale, std::abs(y[i]));
    }
    const auto& last = est.levels.back();
    auto [lo_it, hi_it] = std::minmax_element(last.begin() + static_cast<std::ptrdiff_t>(w0), last.end());
    est.bracket_lo = *lo_it;
    est.bracket_hi = *hi_it;

    // Extrapolate the raw samples to u = 1/log(1+t) → 0.
    double kq = 0.0, kl = 0.0;
    auto quad = poly_fit(u, y, 2, &kq);
    auto lin = poly_fit(u, y, 1, &kl);
    double rq = 0.0, rl = 0.0;
    for (std::size_t i = 0; i < nw; ++i) {
        rq = std::max(rq, std::abs(y[i] - poly_eval(quad, u[i])));
        rl = std::max(rl, std::abs(y[i] - poly_eval(lin, u[i])));
    }
    // The curvature term is kept only when it explains the data beyond the noise floor.
    bool curved = rq < 0.5 * rl;
    double L = curved ? quad[0] : lin[0];
    double residual = curved ? rq : rl;
    double band = std::max(std::abs(quad[0] - lin[0]), (curved ? kq : kl) * residual);
    est.fit_residual = residual;
    scale = std::max({scale, std::abs(L), cfg.reference_scale});

    // Geometric plateau: ranges over the last two decades shrink by r < 1/2, so the
    // remainder past the grid is at most range_top·r/(1-r).
    auto decade_range = [&](double a, double b) {
        double lo = kInf, hi = -kInf;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid[i] >= a && grid[i] <= b) {
                lo = std::min(lo, f[i]);
                hi = std::max(hi, f[i]);
            }
        return hi - lo;
    };
    double top = decade_range(grid.back() / 10.0, grid.back());
    double prev = decade_range(grid.back() / 100.0, grid.back() / 10.0);
    double ratio = prev > 0.0 ? top / prev : (top == 0.0 ? 0.0 : kInf);
    double plateau_band = top / (1.0 - ratio);

    if (band <= cfg.tolerance * scale) {
        est.value = L;
        est.error_band = band;
        est.converged = true;
        est.method = "extrapolated";
    } else if (cfg.window_decades >= 2.0 && ratio < 0.5 && plateau_band <= cfg.tolerance * scale) {
        est.value = f.back();
        est.error_band = plateau_band;
        est.converged = true;
        est.method = "plateau";
    } else {
        est.value = 0.5 * (est.bracket_lo + est.bracket_hi);
        est.error_band = 0.5 * (est.bracket_hi - est.bracket_lo);
        est.converged = false;
        est.method = "cesaro-window";
    }
    return est;
}

LimitEstimate omega_limit(const std::function<double(double)>& f, double t_lo, double t_hi,
                          const LimitProcessConfig& cfg) {
    cfg.validate();
    auto grid = log_grid(t_lo, t_hi, cfg.points_per_decade);
    std::vector<double> ys(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ys[i] = f(grid[i]);
    return omega_limit(grid, ys, cfg);
}

namespace {

void require_dixmier_class(const SingularValueFunction& f) {
    auto cls = classify(f, 1.0);
    if (cls.dixmier == Membership::Indeterminate)
        throw Indeterminate("L^{1,inf} membership could not be decided (basis: " + cls.basis + ")");
    if (cls.dixmier == Membership::No) throw PreconditionError("spectrum is not in L^{1,inf}");
}

double estimator_horizon(const SingularValueFunction& f) {
    double hi = f.resolved_mass();
    if (std::isinf(hi)) {
        if (!f.finite_rank()) return 1e8;
        auto b = f.breakpoints(0.0, kInf);
        return std::max(1e6, b.empty() ? 0.0 : b.back() * 1e4);
    }
    return hi;
}

}  // namespace

LimitEstimate dixmier_trace(const SingularValueFunction& f, const LimitProcessConfig& cfg) {
    require_dixmier_class(f);
    if (classify(f, 1.0).trace_class == Membership::Yes) {
        cfg.validate();
        LimitEstimate zero;
        zero.converged = true;
        zero.method = "trace-class";
        return zero;
    }
    double hi = estimator_horizon(f);
    if (hi < std::pow(10.0, kMinDecades + 1.0))
        throw PreconditionError("enumerated mass too small for the limit estimator");
    auto est = omega_limit([&f](double t) { return f.sigma(t).value / std::log1p(t); }, 1.0, hi, cfg);
    if (est.converged && est.value < 0.0 && -est.value <= est.error_band + 1e-15) est.value = 0.0;
    return est;
}

LimitEstimate dixmier_trace(const WeightedSpectrum& s, const LimitProcessConfig& cfg) {
    return dixmier_trace(StepSingularValues(s), cfg);
}

namespace {

void check_multipliers(std::span<const double> m, const WeightedSpectrum& A) {
    if (m.size() != A.size()) throw PreconditionError("one multiplier per atom is required");
    for (double x : m)
        if (!std::isfinite(x)) throw PreconditionError("multipliers must be bounded");
    if (A.orientation() != Orientation::Compact) throw PreconditionError("A must be a compact-type spectrum");
}

// Part of T·A with multipliers of one sign, carrying a tail inherited from A.
WeightedSpectrum signed_part(std::span<const double> m, const WeightedSpectrum& A, double sign) {
    std::vector<Atom> at;
    const auto& atoms = A.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double x = sign * m[i];
        if (x > 0.0 && atoms[i].value > 0.0) at.push_back({x * atoms[i].value, atoms[i].weight});
    }
    std::optional<PowerTail> tail;
    if (A.tail() && !at.empty()) {
        const auto& cw = A.cumulative_weight();
        double total = A.total_weight();
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (cw[i + 1] < total / 10.0) continue;
            double x = std::max(sign * m[i], 0.0);
            num += atoms[i].weight * std::pow(x, A.tail()->d);
            den += atoms[i].weight;
        }
        if (den > 0.0 && num > 0.0) tail = PowerTail{A.tail()->c * num / den, A.tail()->d};
        // A vanishing part on the last decade contributes nothing asymptotically.
    }
    WeightedSpectrum out(std::move(at), tail, Orientation::Compact, A.tail_tolerance());
    return out;
}

}  // namespace

LimitEstimate signed_dixmier_trace(std::span<const double> multipliers, const WeightedSpectrum& A,
                                   const LimitProcessConfig& cfg) {
    check_multipliers(multipliers, A);
    require_dixmier_class(StepSingularValues(A));
    auto pos = signed_part(multipliers, A, 1.0);
    auto neg = signed_part(multipliers, A, -1.0);
    LimitEstimate zero;
    zero.converged = true;
    zero.method = "empty";
    auto ep = pos.empty() ? zero : dixmier_trace(pos, cfg);
    auto en = neg.empty() ? zero : dixmier_trace(neg, cfg);
    LimitEstimate out = ep.grid.empty() ? en : ep;
    out.value = ep.value - en.value;
    out.error_band = ep.error_band + en.error_band;
    out.converged = ep.converged && en.converged;
    out.bracket_lo = ep.bracket_lo - en.bracket_hi;
    out.bracket_hi = ep.bracket_hi - en.bracket_lo;
    out.method = "positive-minus-negative";
    return out;
}

TruncatedTraces truncated_trace_formulas(std::span<const double> multipliers, const WeightedSpectrum& A,
                                         const LimitProcessConfig& cfg) {
    check_multipliers(multipliers, A);
    StepSingularValues sv(A);
    require_dixmier_class(sv);
    const auto& atoms = A.atoms();
    const auto& cw = A.cumulative_weight();
    std::vector<double> pref(atoms.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms.size(); ++i)
        pref[i + 1] = pref[i] + multipliers[i] * atoms[i].weight * atoms[i].value;

    double hi1 = estimator_horizon(sv);
    double vmin = A.min_value();
    double hi2 = A.tail() ? (vmin > 0.0 ? 1.0 / vmin : kInf) : std::max(1e6, vmin > 0.0 ? 1e4 / vmin : 1e6);
    if (hi1 < 1e3 || hi2 < 1e3) throw PreconditionError("enumeration too short for truncated traces");

    TruncatedTraces out;
    out.reference = signed_dixmier_trace(multipliers, A, cfg);
    // Cancellation makes |T|·A the natural scale for the tolerance.
    std::vector<double> absm(multipliers.begin(), multipliers.end());
    for (auto& x : absm) x = std::abs(x);
    LimitProcessConfig scaled = cfg;
    scaled.reference_scale = std::max(cfg.reference_scale, std::abs(signed_dixmier_trace(absm, A, cfg).value));
    out.by_singular_values = omega_limit(
        [&](double t) {
            // atoms strictly above μ_t: those before the atom containing t
            auto it = std::upper_bound(cw.begin() + 1, cw.end(), t);
            std::size_t k = static_cast<std::size_t>(it - cw.begin()) - 1;
            return pref[std::min(k, atoms.size())] / std::log1p(t);
        },
        1.0, hi1, scaled);
    out.by_level = omega_limit(
        [&](double t) {
            double lvl = 1.0 / t;
            auto it = std::partition_point(atoms.begin(), atoms.end(), [lvl](const Atom& a) { return a.value > lvl; });
            return pref[static_cast<std::size_t>(it - atoms.begin())] / std::log1p(t);
        },
        1.0, hi2, scaled);
    double slack = cfg.tolerance * std::max(1.0, std::abs(out.reference.value));
    out.agree = agree_within_bands(out.by_singular_values, out.reference, slack) &&
                agree_within_bands(out.by_level, out.reference, slack) &&
                agree_within_bands(out.by_singular_values, out.by_level, slack);
    return out;
}

WeightedSpectrum product_bound_spectrum(const WeightedSpectrum& s1, const WeightedSpectrum& s2) {
    StepSingularValues a(s1), b(s2);
    double r1 = a.resolved_mass(), r2 = b.resolved_mass();
    double end = std::min(std::min(r1, r2), std::min(s1.tail() ? r1 : s1.total_weight(),
                                                     s2.tail() ? r2 : s2.total_weight()));
    std::vector<double> cuts = a.breakpoints(0.0, end);
    auto cb = b.breakpoints(0.0, end);
    cuts.insert(cuts.end(), cb.begin(), cb.end());
    cuts.push_back(end);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Atom> at;
    double prev = 0.0;
    for (double c : cuts) {
        if (c <= prev) continue;
        double mid = 0.5 * (prev + c);
        double v = a.mu(mid) * b.mu(mid);
        if (v > 0.0) at.push_back({v, c - prev});
        prev = c;
    }
    std::optional<PowerTail> tail;
    if (s1.tail() && s2.tail()) {
        double a1 = 1.0 / s1.tail()->d, a2 = 1.0 / s2.tail()->d;
        double C = std::pow(s1.tail()->c, a1) * std::pow(s2.tail()->c, a2);
        double d = 1.0 / (a1 + a2);
        tail = PowerTail{std::pow(C, d), d};
    }
    return WeightedSpectrum(std::move(at), tail, Orientation::Compact,
                            std::max(s1.tail_tolerance(), s2.tail_tolerance()));
}

LimitEstimate bilinear_vanishing_check(const WeightedSpectrum& s1, const WeightedSpectrum& s2,
                                       const LimitProcessConfig& cfg) {
    require_dixmier_class(StepSingularValues(s1));
    require_dixmier_class(StepSingularValues(s2));
    return dixmier_trace(product_bound_spectrum(s1, s2), cfg);
}

bool agree_within_bands(const LimitEstimate& a, const LimitEstimate& b, double slack) {
    return std::abs(a.value - b.value) <= a.error_band + b.error_band + slack;
}

}  // namespace ncg

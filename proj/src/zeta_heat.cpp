#include "ncg/zeta_heat.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ncg/errors.hpp"
#include "ncg/numeric.hpp"

namespace ncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_discrete(const WeightedSpectrum& s) {
    if (s.tail() && s.orientation() != Orientation::Discrete)
        throw PreconditionError("expected a tau-discrete spectrum (values growing to infinity)");
}

void require_positive(const WeightedSpectrum& s) {
    if (!s.empty() && !(s.min_value() > 0.0)) throw PreconditionError("spectrum values must be bounded below by eps > 0");
}

// Adaptive quadrature over [a, b], split geometrically for wide ranges.
double integrate(const std::function<double(double)>& g, double a, double b) {
    if (!(b > a)) return 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    std::vector<double> cuts{a};
    double x = a > 0.0 ? a : std::min(b, 1.0);
    if (a <= 0.0 && x < b) cuts.push_back(x);
    while (x * 2.0 < b) {
        x *= 2.0;
        cuts.push_back(x);
    }
    cuts.push_back(b);
    double sum = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] > cuts[i - 1]) sum += GK::integrate(g, cuts[i - 1], cuts[i], 12, 1e-13);
    return sum;
}

// Smallest power of two past which |f(x)|·x^p stays below `threshold`·scale.
double decay_radius(const DecayFunction& f, double p, double threshold) {
    if (std::isfinite(f.support)) return f.support;
    double scale = 0.0;
    for (double x = 0.0; x <= 1.0; x += 1.0 / 64.0) scale = std::max(scale, std::abs(f.f(x)));
    scale = std::max(scale, 1e-300);
    for (int k = 0; k < 60; ++k) {
        double X = std::ldexp(1.0, k);
        bool small = true;
        for (int j = 0; j < 4 && small; ++j) {
            double y = std::ldexp(X, j);
            small = std::abs(f.f(y)) * std::pow(y, p) <= threshold * scale;
        }
        if (small) return X;
    }
    throw PreconditionError("f is not integrable against t^(p-1): " + f.name);
}

// Weighted mean multiplier over the top decade of values.
double top_decade_multiplier(const WeightedSpectrum& s, std::span<const double> T) {
    double vmax = s.max_value(), num = 0.0, den = 0.0;
    const auto& at = s.atoms();
    for (std::size_t i = 0; i < at.size() && at[i].value >= vmax / 10.0; ++i) {
        num += at[i].weight * T[i];
        den += at[i].weight;
    }
    return den > 0.0 ? num / den : 0.0;
}

void check_multipliers(std::span<const double> T, const WeightedSpectrum& s) {
    if (T.size() != s.size()) throw PreconditionError("one multiplier per atom is required");
    for (double x : T)
        if (!std::isfinite(x)) throw PreconditionError("multipliers must be bounded");
}

// Σ over atoms with value <= vcap of w·m·φ(v).
template <class Phi>
double atom_sum(const WeightedSpectrum& s, std::span<const double> T, double vcap, Phi phi) {
    const auto& at = s.atoms();
    auto first = std::partition_point(at.begin(), at.end(), [vcap](const Atom& a) { return a.value > vcap; });
    double sum = 0.0;
    for (auto it = first; it != at.end(); ++it) {
        std::size_t i = static_cast<std::size_t>(it - at.begin());
        if (T[i] != 0.0) sum += it->weight * T[i] * phi(it->value);
    }
    return sum;
}

}  // namespace

double counting(const WeightedSpectrum& s, double lambda) {
    require_discrete(s);
    require_positive(s);
    if (lambda <= s.max_value() || !s.tail()) {
        if (lambda > s.max_value() && !s.cutoff_note.empty())
            throw TailUncertain("lambda beyond the enumerated range and no tail declared", s.total_weight());
        return s.mass_at_most(lambda);
    }
    return s.tail()->c * std::pow(lambda, s.tail()->d);
}

DimensionEstimate spectral_dimension(const WeightedSpectrum& s, double decades) {
    require_discrete(s);
    require_positive(s);
    if (s.empty() || s.max_value() / s.min_value() < 1e3)
        throw PreconditionError("spectral_dimension needs at least 3 decades of enumerated growth");
    double hi = s.max_value();
    std::vector<double> xs, ys;
    for (double l : log_grid(hi / std::pow(10.0, decades), hi, 16)) {
        double n = s.mass_at_most(l);
        if (n <= 0.0) continue;
        xs.push_back(std::log(l));
        ys.push_back(std::log(n));
    }
    auto fit = linear_fit(xs, ys);
    DimensionEstimate out;
    out.raw_slope = fit.slope;
    out.residual = fit.max_residual;
    out.d = fit.slope;
    if (fit.max_residual > 0.05) throw Indeterminate("counting function does not follow a power law");
    if (s.tail() && std::abs(fit.slope - s.tail()->d) <= 0.02) {
        out.d = s.tail()->d;
        out.snapped = true;
    }
    return out;
}

ZetaValue zeta(const WeightedSpectrum& s, std::complex<double> z, double margin) {
    require_discrete(s);
    require_positive(s);
    ZetaValue out{{0.0, 0.0}, 0.0};
    if (s.empty()) return out;
    const auto& tail = s.tail();
    if (tail && !(z.real() < -tail->d - margin))
        throw PreconditionError("zeta diverges for Re z >= -d_T; requested Re z = " + format_number(z.real()));

    std::complex<double> sum{0.0, 0.0};
    const auto& at = s.atoms();
    if (z.imag() == 0.0) {
        double acc = 0.0;
        for (auto it = at.rbegin(); it != at.rend(); ++it) acc += it->weight * std::pow(it->value, z.real());
        sum = acc;
    } else {
        for (auto it = at.rbegin(); it != at.rend(); ++it) sum += it->weight * std::exp(z * std::log(it->value));
    }
    if (tail) {
        double lmax = s.max_value();
        std::complex<double> e = z + tail->d;
        sum += tail->c * tail->d * std::exp(e * std::log(lmax)) / (-e);
        double mismatch = std::abs(tail->c * std::pow(lmax, tail->d) - s.total_weight());
        out.tail_bound = (mismatch + at.front().weight) * std::pow(lmax, z.real());
    }
    out.value = sum;
    return out;
}

ResidueResult residue_to_dixmier(const WeightedSpectrum& s, const ResidueOptions& opt) {
    if (!s.tail()) throw PreconditionError("residue needs an infinite spectrum (declared tail)");
    auto dim = spectral_dimension(s);
    if (!(dim.d > 0.0)) throw PreconditionError("spectral dimension must be positive");
    ResidueResult out;
    out.d = dim.d;
    out.snapped = dim.snapped;
    std::vector<double> hs;
    double bound = 0.0;
    for (int j = 0; j < opt.levels; ++j) {
        double h = opt.margin * std::ldexp(1.0, -j);
        double x = -dim.d - h;
        auto zv = zeta(s, {x, 0.0});
        hs.push_back(h);
        out.xs.push_back(x);
        out.gs.push_back(-h * zv.value.real());
        bound = std::max(bound, h * zv.tail_bound);
    }
    double err = 0.0;
    out.A = neville_at_zero(hs, out.gs, &err);
    out.error = err + bound;
    out.trace = -out.A / out.d;
    if (!(out.error <= opt.stability * std::abs(out.A)))
        throw Indeterminate("residue extrapolation unstable: A = " + format_number(out.A) +
                            ", spread = " + format_number(out.error));
    return out;
}

LimitEstimate weyl_ratio(const WeightedSpectrum& s, const LimitProcessConfig& cfg) {
    auto dim = spectral_dimension(s);
    double lo = std::max(1.0, s.min_value());
    double hi = s.max_value();
    return omega_limit([&](double l) { return s.mass_at_most(l) / std::pow(l, dim.d); }, lo, hi, cfg);
}

DecayFunction gaussian_decay() { return {"exp(-x^2)", [](double x) { return std::exp(-x * x); }, kInf}; }

DecayFunction exponential_decay() { return {"exp(-x)", [](double x) { return std::exp(-x); }, kInf}; }

DecayFunction smoothed_indicator() {
    auto psi = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    return {"smoothed 1_[0,1]",
            [psi](double x) {
                if (x <= 1.0) return 1.0;
                if (x >= 2.0) return 0.0;
                double a = psi(2.0 - x), b = psi(x - 1.0);
                return a / (a + b);
            },
            2.0};
}

double cp_constant(const DecayFunction& f, double p) {
    if (!(p > 0.0)) throw PreconditionError("p must be positive");
    double X = decay_radius(f, p, 1e-15);
    return p * integrate([&](double t) { return f.f(t) * std::pow(t, p - 1.0); }, 0.0, X);
}

LimitEstimate integral_of(const WeightedSpectrum& D_abs, std::span<const double> T, double p,
                          const LimitProcessConfig& cfg) {
    check_multipliers(T, D_abs);
    require_discrete(D_abs);
    std::vector<Atom> at;
    std::vector<double> m;
    const auto& a = D_abs.atoms();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].value > 0.0) {
            at.push_back(a[i]);
            m.push_back(T[i]);
        }
    }
    WeightedSpectrum inv = WeightedSpectrum(std::move(at), D_abs.tail(), Orientation::Discrete,
                                            D_abs.tail_tolerance()).powered(-p);
    std::reverse(m.begin(), m.end());
    return signed_dixmier_trace(m, inv, cfg);
}

namespace {

RegularizedResult finish(LimitEstimate est, double constant, LimitEstimate ref, const LimitProcessConfig& cfg) {
    RegularizedResult r;
    r.estimate = std::move(est);
    r.constant = constant;
    r.reference = std::move(ref);
    r.expected = constant * r.reference.value;
    double slack = cfg.tolerance * std::max(1.0, std::abs(r.expected));
    r.agree = std::abs(r.estimate.value - r.expected) <=
              r.estimate.error_band + std::abs(constant) * r.reference.error_band + slack;
    return r;
}

void require_estimable(const WeightedSpectrum& D_abs, double p) {
    require_discrete(D_abs);
    if (!(p > 0.0)) throw PreconditionError("p must be positive");
    if (!D_abs.tail()) throw PreconditionError("a finite model has no asymptotics to regularize");
}

}  // namespace

RegularizedResult regularized_integral(const WeightedSpectrum& D_abs, std::span<const double> T,
                                       const DecayFunction& f, double p, const LimitProcessConfig& cfg) {
    require_estimable(D_abs, p);
    check_multipliers(T, D_abs);
    require_positive(D_abs);
    double cp = cp_constant(f, p);
    double radius = decay_radius(f, p, 1e-17);
    double reach = decay_radius(f, p, 1e-6);
    double vmax = D_abs.max_value();
    double hi = std::pow(vmax / reach, p);
    double mbar = top_decade_multiplier(D_abs, T);
    const auto& tail = *D_abs.tail();

    auto g = [&](double lambda) {
        double s = std::pow(lambda, 1.0 / p);
        double sum = atom_sum(D_abs, T, radius * s, [&](double v) { return f.f(v / s); });
        double x0 = vmax / s;
        if (mbar != 0.0 && x0 < radius) {
            double I = integrate([&](double x) { return f.f(x) * std::pow(x, tail.d - 1.0); }, x0, radius);
            sum += mbar * tail.c * tail.d * std::pow(s, tail.d) * I;
        }
        return sum / lambda;
    };
    auto est = omega_limit(g, 1.0, hi, cfg);
    return finish(std::move(est), cp, integral_of(D_abs, T, p, cfg), cfg);
}

RegularizedResult heat_trace_check(const WeightedSpectrum& D_abs, std::span<const double> T, double p,
                                   const LimitProcessConfig& cfg) {
    require_estimable(D_abs, p);
    check_multipliers(T, D_abs);
    double vmax = D_abs.max_value();
    double hi = std::pow(vmax / 4.0, p);
    double mbar = top_decade_multiplier(D_abs, T);
    const auto& tail = *D_abs.tail();
    // s = t^{-p}: t^p·τ(T e^{-t²D²}) = τ(T e^{-(|D|/s^{1/p})²}) / s
    auto g = [&](double s) {
        double t = std::pow(s, -1.0 / p);
        double sum = atom_sum(D_abs, T, 6.5 / t, [t](double v) { return std::exp(-(t * v) * (t * v)); });
        if (mbar != 0.0) {
            double x0 = t * vmax;
            // ∫_{x0}^∞ e^{-x²} x^{d-1} dx = Γ(d/2, x0²)/2
            double I = 0.5 * boost::math::tgamma(tail.d / 2.0, x0 * x0);
            sum += mbar * tail.c * tail.d * std::pow(t, -tail.d) * I;
        }
        return sum / s;
    };
    auto est = omega_limit(g, 1.0, hi, cfg);
    return finish(std::move(est), std::tgamma(p / 2.0 + 1.0), integral_of(D_abs, T, p, cfg), cfg);
}

RegularizedResult mellin_plateau(const WeightedSpectrum& D_abs, std::span<const double> T, const DecayFunction& f,
                                 double p, const LimitProcessConfig& cfg) {
    require_estimable(D_abs, p);
    check_multipliers(T, D_abs);
    require_positive(D_abs);
    double f0 = f.f(0.0);
    double sup = 0.0;
    for (double x = 0.0; x <= 4.0; x += 1.0 / 64.0) sup = std::max(sup, std::abs(f.f(x)));
    for (double x : {1e6, 1e8, 1e10})
        if (std::isinf(f.support) && std::abs(f.f(x)) * std::log(x) > 1e-3 * std::max(sup, 1e-300))
            throw PreconditionError("f must vanish at infinity with log-integrable derivative: " + f.name);
    double radius = decay_radius(f, 0.0, 1e-17);
    double reach = decay_radius(f, 0.0, 1e-6);
    double vmax = D_abs.max_value();
    double hi = std::pow(vmax / reach, p);
    double mbar = top_decade_multiplier(D_abs, T);
    const auto& tail = *D_abs.tail();

    auto h = [&](double lambda) {
        double s = std::pow(lambda, 1.0 / p);
        double sum = atom_sum(D_abs, T, radius * s, [&](double v) { return f.f(v / s) * std::pow(v, -p); });
        double x0 = vmax / s;
        if (mbar != 0.0 && x0 < radius) {
            double I = integrate([&](double x) { return f.f(x) * std::pow(x, tail.d - p - 1.0); }, x0, radius);
            sum += mbar * tail.c * tail.d * std::pow(s, tail.d - p) * I;
        }
        return sum / std::log1p(lambda);
    };
    auto est = omega_limit(h, 1.0, hi, cfg);
    return finish(std::move(est), f0, integral_of(D_abs, T, p, cfg), cfg);
}

}  // namespace ncg

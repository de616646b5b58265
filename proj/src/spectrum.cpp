#include "ncg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ncg/errors.hpp"
#include "ncg/numeric.hpp"

namespace ncg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ∫_a^b (c/s)^{1/d} ds
double tail_sigma(const PowerTail& tail, double a, double b) {
    if (b <= a) return 0.0;
    double alpha = 1.0 / tail.d;
    double k = std::pow(tail.c, alpha);
    if (std::abs(alpha - 1.0) < 1e-14) return k * std::log(b / a);
    return k * (std::pow(b, 1.0 - alpha) - std::pow(a, 1.0 - alpha)) / (1.0 - alpha);
}

}  // namespace

WeightedSpectrum::WeightedSpectrum(std::vector<Atom> atoms, std::optional<PowerTail> tail,
                                   Orientation orientation, double tail_tolerance)
    : atoms_(std::move(atoms)), tail_(tail), orientation_(orientation), tail_tolerance_(tail_tolerance) {
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.value) || a.value < 0.0)
            throw PreconditionError("atom value must be finite and nonnegative");
        if (!std::isfinite(a.weight) || a.weight <= 0.0)
            throw PreconditionError("atom weight must be finite and positive");
    }
    if (tail_ && !(tail_->c > 0.0 && tail_->d > 0.0 && std::isfinite(tail_->c) && std::isfinite(tail_->d)))
        throw PreconditionError("tail requires c > 0 and d > 0");
    rebuild();
    check_tail();
}

void WeightedSpectrum::rebuild() {
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.value > b.value; });
    std::vector<Atom> merged;
    merged.reserve(atoms_.size());
    for (const auto& a : atoms_) {
        if (!merged.empty() && merged.back().value == a.value)
            merged.back().weight += a.weight;
        else
            merged.push_back(a);
    }
    atoms_ = std::move(merged);
    cum_w_.assign(atoms_.size() + 1, 0.0);
    cum_vw_.assign(atoms_.size() + 1, 0.0);
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        cum_w_[k + 1] = cum_w_[k] + atoms_[k].weight;
        cum_vw_[k + 1] = cum_vw_[k] + atoms_[k].value * atoms_[k].weight;
    }
}

double WeightedSpectrum::max_value() const { return atoms_.empty() ? 0.0 : atoms_.front().value; }
double WeightedSpectrum::min_value() const { return atoms_.empty() ? 0.0 : atoms_.back().value; }

double WeightedSpectrum::mass_above(double v) const {
    auto it = std::partition_point(atoms_.begin(), atoms_.end(), [v](const Atom& a) { return a.value > v; });
    return cum_w_[static_cast<std::size_t>(it - atoms_.begin())];
}

double WeightedSpectrum::mass_at_least(double v) const {
    auto it = std::partition_point(atoms_.begin(), atoms_.end(), [v](const Atom& a) { return a.value >= v; });
    return cum_w_[static_cast<std::size_t>(it - atoms_.begin())];
}

double WeightedSpectrum::mass_at_most(double v) const { return total_weight() - mass_above(v); }

namespace {

struct LogPoint {
    double x;
    double y;
};

// Samples of (log scale, log count) over the last enumerated decade.
std::vector<LogPoint> decade_samples(const WeightedSpectrum& s) {
    std::vector<LogPoint> pts;
    const auto& at = s.atoms();
    if (at.size() < 32) return pts;
    if (s.orientation() == Orientation::Compact) {
        double total = s.total_weight();
        const auto& cw = s.cumulative_weight();
        auto first = std::lower_bound(cw.begin() + 1, cw.end(), total / 10.0);
        std::size_t k0 = static_cast<std::size_t>(first - cw.begin()) - 1;
        std::size_t n = at.size();
        if (n - k0 < 8) return pts;
        for (int j = 0; j <= 16; ++j) {
            double frac = std::pow(10.0, -1.0 + j / 16.0);
            auto it = std::lower_bound(cw.begin() + 1, cw.end(), frac * total);
            std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cw.begin()) - 1, n - 1);
            if (at[k].value <= 0.0) continue;
            pts.push_back({std::log(1.0 / at[k].value), std::log(cw[k + 1])});
        }
    } else {
        double vmax = s.max_value();
        if (vmax <= 0.0) return pts;
        for (int j = 0; j <= 16; ++j) {
            double v = vmax * std::pow(10.0, -1.0 + j / 16.0);
            double m = s.mass_at_most(v);
            if (m <= 0.0) continue;
            pts.push_back({std::log(v), std::log(m)});
        }
    }
    return pts;
}

}  // namespace

std::optional<PowerTail> WeightedSpectrum::fit_tail() const {
    auto pts = decade_samples(*this);
    if (pts.size() < 4) return std::nullopt;
    std::vector<double> xs, ys;
    for (const auto& p : pts) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    auto fit = linear_fit(xs, ys);
    if (!(fit.slope > 0.0)) return std::nullopt;
    return PowerTail{std::exp(fit.intercept), fit.slope};
}

void WeightedSpectrum::check_tail() const {
    if (!tail_) return;
    for (const auto& p : decade_samples(*this)) {
        double model = std::log(tail_->c) + tail_->d * p.x;
        if (std::abs(std::expm1(p.y - model)) > tail_tolerance_)
            throw PreconditionError("declared tail disagrees with the last enumerated decade");
    }
}

WeightedSpectrum WeightedSpectrum::scaled(double lambda) const {
    double s = std::abs(lambda);
    std::vector<Atom> at = atoms_;
    for (auto& a : at) a.value *= s;
    std::optional<PowerTail> t;
    if (tail_ && s > 0.0) {
        double f = std::pow(s, tail_->d);
        t = PowerTail{orientation_ == Orientation::Compact ? tail_->c * f : tail_->c / f, tail_->d};
    }
    WeightedSpectrum out(std::move(at), t, orientation_, tail_tolerance_);
    out.cutoff_note = cutoff_note;
    return out;
}

WeightedSpectrum WeightedSpectrum::weights_scaled(double m) const {
    if (!(m > 0.0)) throw PreconditionError("weight scale must be positive");
    std::vector<Atom> at = atoms_;
    for (auto& a : at) a.weight *= m;
    std::optional<PowerTail> t;
    if (tail_) t = PowerTail{tail_->c * m, tail_->d};
    WeightedSpectrum out(std::move(at), t, orientation_, tail_tolerance_);
    out.cutoff_note = cutoff_note;
    return out;
}

WeightedSpectrum WeightedSpectrum::powered(double s) const {
    if (s == 0.0) throw PreconditionError("power must be nonzero");
    std::vector<Atom> at = atoms_;
    for (auto& a : at) {
        if (s < 0.0 && a.value == 0.0) throw PreconditionError("negative power of a spectrum with kernel");
        a.value = std::pow(a.value, s);
    }
    Orientation o = orientation_;
    if (s < 0.0) o = (o == Orientation::Compact) ? Orientation::Discrete : Orientation::Compact;
    std::optional<PowerTail> t;
    if (tail_) t = PowerTail{tail_->c, tail_->d / std::abs(s)};
    WeightedSpectrum out(std::move(at), t, o, tail_tolerance_);
    out.cutoff_note = cutoff_note;
    return out;
}

WeightedSpectrum WeightedSpectrum::without_tail() const {
    WeightedSpectrum out(atoms_, std::nullopt, orientation_, tail_tolerance_);
    out.cutoff_note = cutoff_note;
    return out;
}

WeightedSpectrum WeightedSpectrum::with_tail(std::optional<PowerTail> tail, Orientation orientation) const {
    WeightedSpectrum out(atoms_, tail, orientation, tail_tolerance_);
    out.cutoff_note = cutoff_note;
    return out;
}

WeightedSpectrum WeightedSpectrum::mapped(const std::function<double(double)>& f) const {
    std::vector<Atom> at = atoms_;
    for (auto& a : at) a.value = f(a.value);
    return WeightedSpectrum(std::move(at), std::nullopt, orientation_, tail_tolerance_);
}

WeightedSpectrum WeightedSpectrum::dropping_values_below(double v) const {
    std::vector<Atom> at;
    for (const auto& a : atoms_)
        if (a.value >= v) at.push_back(a);
    WeightedSpectrum out(std::move(at), tail_, orientation_, tail_tolerance_);
    out.cutoff_note = cutoff_note;
    return out;
}

WeightedSpectrum WeightedSpectrum::direct_sum(const WeightedSpectrum& a, const WeightedSpectrum& b) {
    if (a.tail_ && b.tail_ && a.orientation_ != b.orientation_)
        throw PreconditionError("direct sum of spectra with opposite orientation");
    Orientation o = a.tail_ ? a.orientation_ : b.orientation_;
    std::optional<PowerTail> t;
    if (a.tail_ && b.tail_) {
        if (std::abs(a.tail_->d - b.tail_->d) < 1e-12)
            t = PowerTail{a.tail_->c + b.tail_->c, a.tail_->d};
        else
            t = a.tail_->d > b.tail_->d ? a.tail_ : b.tail_;
    } else {
        t = a.tail_ ? a.tail_ : b.tail_;
    }
    // Both enumerations are complete only on the common resolved range.
    double lo = -kInf, hi = kInf;
    if (a.tail_ && b.tail_) {
        if (o == Orientation::Compact)
            lo = std::max(a.min_value(), b.min_value());
        else
            hi = std::min(a.max_value(), b.max_value());
    }
    std::vector<Atom> at;
    for (const auto* s : {&a, &b})
        for (const auto& x : s->atoms_)
            if (x.value >= lo && x.value <= hi) at.push_back(x);
    WeightedSpectrum out(std::move(at), t, o, std::max(a.tail_tolerance_, b.tail_tolerance_));
    out.cutoff_note = a.cutoff_note.empty() ? b.cutoff_note : a.cutoff_note;
    return out;
}

// ---------------------------------------------------------------------------

StepSingularValues::StepSingularValues(const WeightedSpectrum& s, double extrapolation_decades)
    : s_(&s), extrapolation_decades_(extrapolation_decades) {
    if (s.tail() && s.orientation() == Orientation::Discrete)
        throw PreconditionError("singular values of an unbounded spectrum are infinite");
}

double StepSingularValues::mu(double t) const {
    if (!(t > 0.0)) throw PreconditionError("mu requires t > 0");
    const auto& cw = s_->cumulative_weight();
    double total = s_->total_weight();
    if (t < total) {
        auto it = std::upper_bound(cw.begin() + 1, cw.end(), t);
        return s_->atoms()[static_cast<std::size_t>(it - cw.begin()) - 1].value;
    }
    const auto& tail = s_->tail();
    if (!tail) return 0.0;
    double v = std::pow(tail->c / t, 1.0 / tail->d);
    if (t > total * std::pow(10.0, extrapolation_decades_))
        throw TailUncertain("t lies beyond the tail's extrapolation range", v);
    return v;
}

SigmaValue StepSingularValues::sigma(double t) const {
    if (!(t > 0.0)) throw PreconditionError("sigma requires t > 0");
    const auto& cw = s_->cumulative_weight();
    const auto& cm = s_->cumulative_moment();
    double total = s_->total_weight();
    if (t < total) {
        auto it = std::upper_bound(cw.begin() + 1, cw.end(), t);
        std::size_t k = static_cast<std::size_t>(it - cw.begin()) - 1;
        return {cm[k] + s_->atoms()[k].value * (t - cw[k]), 0.0};
    }
    double base = cm.empty() ? 0.0 : cm.back();
    const auto& tail = s_->tail();
    if (!tail) return {base, 0.0};
    double extra = tail_sigma(*tail, total, t);
    if (t > total * std::pow(10.0, extrapolation_decades_))
        throw TailUncertain("t lies beyond the tail's extrapolation range", base + extra);
    return {base + extra, s_->tail_tolerance() * extra};
}

double StepSingularValues::resolved_mass() const {
    return s_->tail() ? s_->total_weight() : kInf;
}

bool StepSingularValues::finite_rank() const { return !s_->tail(); }

std::optional<double> StepSingularValues::declared_exponent() const {
    if (!s_->tail()) return std::nullopt;
    return 1.0 / s_->tail()->d;
}

double StepSingularValues::power_integral(double p) const {
    double sum = 0.0;
    for (const auto& a : s_->atoms()) sum += a.weight * std::pow(a.value, p);
    const auto& tail = s_->tail();
    if (!tail) return sum;
    double r = p / tail->d;
    if (r <= 1.0) return kInf;
    double total = s_->total_weight();
    return sum + std::pow(tail->c, r) * std::pow(total, 1.0 - r) / (r - 1.0);
}

double StepSingularValues::log_slope_limit() const {
    const auto& tail = s_->tail();
    if (!tail) return 0.0;
    if (std::abs(tail->d - 1.0) < 1e-14) return tail->c;
    return tail->d < 1.0 ? 0.0 : kInf;
}

std::vector<double> StepSingularValues::breakpoints(double lo, double hi) const {
    const auto& cw = s_->cumulative_weight();
    auto a = std::upper_bound(cw.begin(), cw.end(), lo);
    auto b = std::lower_bound(cw.begin(), cw.end(), hi);
    return a < b ? std::vector<double>(a, b) : std::vector<double>{};
}

ProfileSingularValues::ProfileSingularValues(std::string name, std::function<double(double)> mu,
                                             std::function<double(double)> sigma, double exponent,
                                             std::function<double(double)> power_integral, double log_slope)
    : name_(std::move(name)),
      mu_(std::move(mu)),
      sigma_(std::move(sigma)),
      exponent_(exponent),
      power_integral_(std::move(power_integral)),
      log_slope_(log_slope) {}

double ProfileSingularValues::resolved_mass() const { return kInf; }

ProfileSingularValues power_profile(double a) {
    if (!(a > 0.0)) throw PreconditionError("profile exponent must be positive");
    auto mu = [a](double t) { return std::pow(1.0 + t, -a); };
    std::function<double(double)> sig;
    if (a == 1.0)
        sig = [](double t) { return std::log1p(t); };
    else
        sig = [a](double t) { return std::expm1((1.0 - a) * std::log1p(t)) / (1.0 - a); };
    auto pint = [a](double p) { return a * p > 1.0 ? 1.0 / (a * p - 1.0) : kInf; };
    double slope = a == 1.0 ? 1.0 : (a > 1.0 ? 0.0 : kInf);
    return ProfileSingularValues("(1+t)^-" + format_number(a), mu, sig, a, pint, slope);
}

WeightedSpectrum atomize(const SingularValueFunction& f, std::size_t cells) {
    std::vector<Atom> at;
    at.reserve(cells);
    double prev = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
        double next = f.sigma(static_cast<double>(k + 1)).value;
        at.push_back({next - prev, 1.0});
        prev = next;
    }
    std::optional<PowerTail> tail;
    if (auto alpha = f.declared_exponent()) {
        // μ_t ~ t^{-α} gives mass{μ ≥ 1/λ} ~ λ^{1/α}; c from the last cell.
        double t = static_cast<double>(cells);
        double v = f.mu(t);
        double d = 1.0 / *alpha;
        tail = PowerTail{t * std::pow(v, d), d};
    }
    WeightedSpectrum out(std::move(at), tail);
    out.cutoff_note = std::to_string(cells) + " unit cells";
    return out;
}

double mu(const WeightedSpectrum& s, double t) { return StepSingularValues(s).mu(t); }
SigmaValue sigma(const WeightedSpectrum& s, double t) { return StepSingularValues(s).sigma(t); }

double norm_p(const SingularValueFunction& f, double p) {
    if (!(p >= 1.0)) throw PreconditionError("norm_p requires p >= 1");
    double v = f.power_integral(p);
    return std::isinf(v) ? kInf : std::pow(v, 1.0 / p);
}

double norm_p(const WeightedSpectrum& s, double p) { return norm_p(StepSingularValues(s), p); }

Norm1InfResult norm_1inf(const SingularValueFunction& f, int points_per_decade) {
    auto cls = classify(f, 1.0);
    if (cls.dixmier == Membership::Indeterminate)
        throw Indeterminate("L^{1,inf} membership could not be decided");
    if (cls.dixmier == Membership::No) throw PreconditionError("spectrum is not in L^{1,inf}");

    double hi = f.resolved_mass();
    std::vector<double> bps;
    if (std::isinf(hi)) {
        bps = f.breakpoints(0.0, kInf);
        hi = bps.empty() ? 1e12 : bps.back() * 10.0;
    } else {
        bps = f.breakpoints(0.0, hi);
    }
    double lo = 1e-6;
    if (!bps.empty()) lo = std::min(lo, bps.front() * 1e-3);
    std::vector<double> ts = log_grid(lo, hi, points_per_decade);
    ts.insert(ts.end(), bps.begin(), bps.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    Norm1InfResult out{0.0, 0.0, 0.0, 0.0};
    std::vector<double> r(ts.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        r[i] = f.sigma(ts[i]).value / std::log1p(ts[i]);
        if (r[i] > r[best]) best = i;
    }
    out.value = r[best];
    out.argmax_t = ts[best];
    if (best > 0) out.grid_error = std::max(out.grid_error, std::abs(r[best] - r[best - 1]));
    if (best + 1 < ts.size()) out.grid_error = std::max(out.grid_error, std::abs(r[best] - r[best + 1]));

    // Beyond the resolved range: the declared tail, then its limit.
    if (const auto* step = dynamic_cast<const StepSingularValues*>(&f)) {
        const auto& tail = step->spectrum().tail();
        if (tail) {
            double total = step->spectrum().total_weight();
            double base = step->spectrum().cumulative_moment().back();
            for (double t : log_grid(total, total * 1e12, points_per_decade)) {
                double v = (base + tail_sigma(*tail, total, t)) / std::log1p(t);
                if (v > out.value) {
                    out.value = v;
                    out.argmax_t = t;
                    out.tail_bound = step->spectrum().tail_tolerance() * tail_sigma(*tail, total, t) / std::log1p(t);
                }
            }
            double lim = f.log_slope_limit();
            if (std::isfinite(lim) && lim > out.value) {
                out.value = lim;
                out.argmax_t = kInf;
                out.tail_bound = step->spectrum().tail_tolerance() * lim;
                out.grid_error = 0.0;
            }
        }
    } else {
        double lim = f.log_slope_limit();
        if (std::isfinite(lim) && lim > out.value) {
            out.value = lim;
            out.argmax_t = kInf;
            out.grid_error = 0.0;
        }
    }
    return out;
}

Norm1InfResult norm_1inf(const WeightedSpectrum& s, int points_per_decade) {
    return norm_1inf(StepSingularValues(s), points_per_decade);
}

const char* to_string(Membership m) {
    switch (m) {
        case Membership::Yes: return "yes";
        case Membership::No: return "no";
        case Membership::Indeterminate: return "indeterminate";
    }
    return "?";
}

void check_inclusion_chain(const IdealClassification& c) {
    auto implies = [](Membership a, Membership b) {
        return !(a == Membership::Yes && b == Membership::No);
    };
    bool ok = implies(c.trace_class, c.dixmier) && implies(c.trace_class, c.tau_compact) &&
              implies(c.dixmier, c.tau_compact) && implies(c.weak_p, c.tau_compact);
    if (c.p >= 1.0) ok = ok && implies(c.dixmier, c.weak_p) && implies(c.trace_class, c.weak_p);
    if (!ok) throw std::logic_error("ideal classification violates the inclusion chain");
}

IdealClassification classify(const SingularValueFunction& f, double p, const ClassifyOptions& opt) {
    if (!(p >= 1.0)) throw PreconditionError("classify requires p >= 1");
    IdealClassification out;
    out.p = p;

    double hi = f.resolved_mass();
    bool closed_form = std::isinf(hi) && !f.finite_rank();
    if (std::isinf(hi)) {
        auto b = f.breakpoints(0.0, kInf);
        hi = closed_form ? 1e8 : (b.empty() ? 1.0 : b.back());
    }
    double stat_lo = 1e-3;
    for (double t : log_grid(stat_lo, hi, 16)) {
        double s = f.sigma(t).value;
        out.sup_sigma_over_log = std::max(out.sup_sigma_over_log, s / std::log1p(t));
        if (p > 1.0) out.sup_sigma_over_power = std::max(out.sup_sigma_over_power, s / std::pow(t, 1.0 - 1.0 / p));
    }
    if (p == 1.0) out.sup_sigma_over_power = out.sup_sigma_over_log;

    if (f.finite_rank()) {
        out.tau_compact = out.trace_class = out.dixmier = out.weak_p = Membership::Yes;
        out.exponent = out.data_exponent = kInf;
        out.basis = "finite";
        check_inclusion_chain(out);
        return out;
    }

    double lo = hi / std::pow(10.0, opt.decades);
    std::optional<double> alpha_data;
    if (lo >= 1.0) {
        std::vector<double> xs, ys;
        for (double t : log_grid(lo, hi * 0.999, 16)) {
            double m = f.mu(t);
            if (m <= 0.0) continue;
            xs.push_back(std::log(t));
            ys.push_back(std::log(m));
        }
        if (xs.size() >= 4) {
            auto fit = linear_fit(xs, ys);
            alpha_data = -fit.slope;
            out.fit_residual = fit.max_residual;
        }
    }
    auto declared = f.declared_exponent();
    double alpha;
    if (declared && alpha_data) {
        out.data_exponent = *alpha_data;
        if (std::abs(*alpha_data - *declared) > opt.window) {
            out.exponent = *alpha_data;
            out.basis = "conflict";
            check_inclusion_chain(out);
            return out;
        }
        alpha = *declared;
        out.basis = closed_form ? "profile" : "tail";
    } else if (declared) {
        alpha = *declared;
        out.data_exponent = alpha;
        out.basis = "declared";
    } else if (alpha_data) {
        alpha = *alpha_data;
        out.data_exponent = alpha;
        out.basis = "data";
    } else {
        out.basis = "insufficient";
        check_inclusion_chain(out);
        return out;
    }
    out.exponent = alpha;

    auto decide = [&](bool yes, double threshold) {
        if (out.basis == "data" && std::abs(alpha - threshold) <= opt.window) return Membership::Indeterminate;
        return yes ? Membership::Yes : Membership::No;
    };
    out.tau_compact = decide(alpha > 0.0, 0.0);
    out.trace_class = decide(alpha > 1.0, 1.0);
    out.dixmier = decide(alpha >= 1.0, 1.0);
    out.weak_p = decide(alpha >= 1.0 / p, 1.0 / p);
    check_inclusion_chain(out);
    return out;
}

IdealClassification classify(const WeightedSpectrum& s, double p, const ClassifyOptions& opt) {
    return classify(StepSingularValues(s), p, opt);
}

}  // namespace ncg

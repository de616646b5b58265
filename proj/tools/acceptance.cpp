// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ncg/index.hpp"
#include "ncg/limiting.hpp"
#include "ncg/models.hpp"
#include "ncg/proptest.hpp"
#include "ncg/symbols.hpp"
#include "ncg/zeta_heat.hpp"

using namespace ncg;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Verdict {
    bool pass = true;
    std::string detail;
};

void note(Verdict& v, bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
void note(Verdict& v, bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += buf;
    if (!ok) {
        v.detail += " [x]";
        v.pass = false;
    }
}

bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

Verdict harmonic() {
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    auto e = dixmier_trace(harmonic_profile());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    note(v, e.converged && std::abs(e.value - 1.0) <= 1e-3, "tau_w = %.9f +- %.1e", e.value, e.error_band);
    note(v, secs < 1.0, "%.3f s", secs);
    return v;
}

Verdict circle_triangle() {
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    auto c = circle_dirac(1000000);
    auto abs = c.abs_spectrum(KernelPolicy::Drop);
    auto d = dixmier_trace(c.inverse_power(1.0, KernelPolicy::Drop));
    auto r = residue_to_dixmier(abs);
    auto w = weyl_ratio(abs);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double vals[3] = {d.value, r.trace, w.value};
    bool ok = d.converged && w.converged;
    for (int i = 0; i < 3; ++i) {
        ok = ok && rel_close(vals[i], 2.0, 0.01);
        for (int j = 0; j < i; ++j) ok = ok && rel_close(vals[i], vals[j], 0.01);
    }
    note(v, ok, "dixmier %.6f, -A/d %.6f, weyl %.6f", vals[0], vals[1], vals[2]);
    note(v, secs < 10.0, "%.2f s", secs);
    return v;
}

Verdict torus_foliation() {
    Verdict v;
    std::vector<double> lambda{0.25, 0.75};
    auto fam = foliated_family(torus_model(2, TorusKind::Laplacian, 2000), lambda);
    auto s = fam.leaf.inverse_power(1.0).weights_scaled(fam.mass());
    auto e = dixmier_trace(s);
    note(v, e.converged && rel_close(e.value, kPi, 0.02), "eigenvalues %.6f +- %.1e", e.value, e.error_band);

    auto q = cosphere_quadrature(2);
    auto one = scalar_symbol(-2, TrigPolynomial::constant(2, 1.0));
    double res = foliated_residue(one, lambda, q);
    note(v, std::abs(res - kPi) <= 1e-6, "residue %.12f", res);

    double worst = 0.0;
    for (double m : {0.1, 0.5, 2.0, 3.75, 10.0}) {
        std::vector<double> scaled{0.25 * m, 0.75 * m};
        worst = std::max(worst, std::abs(foliated_residue(one, scaled, q) - m * res) / (m * res));
    }
    note(v, worst <= 4.0 * 2.220446e-16, "linearity %.1e", worst);
    return v;
}

Verdict weil() {
    Verdict v;
    auto s = torus_model(2, TorusKind::Dirac, 400).abs_spectrum(KernelPolicy::Drop);
    std::vector<double> one(s.size(), 1.0);
    auto h = heat_trace_check(s, one, 2.0);
    note(v, h.estimate.converged && rel_close(h.estimate.value, h.expected, 0.01),
         "t^2 tau(e^{-t^2 D^2}) -> %.6f, Gamma(2) tau_w = %.6f", h.estimate.value, h.expected);
    return v;
}

Verdict cp_integrals() {
    Verdict v;
    auto circle = circle_dirac(1000000).abs_spectrum(KernelPolicy::Drop);
    auto torus = torus_model(2, TorusKind::Dirac, 800).abs_spectrum(KernelPolicy::Drop);
    struct Case {
        const char* name;
        const WeightedSpectrum* s;
        double p;
    } cases[] = {{"circle", &circle, 1.0}, {"torus", &torus, 2.0}};
    for (const auto& c : cases) {
        std::vector<double> one(c.s->size(), 1.0);
        for (const auto& f : {gaussian_decay(), smoothed_indicator()}) {
            auto r = regularized_integral(*c.s, one, f, c.p);
            note(v, r.estimate.converged && rel_close(r.estimate.value, r.expected, 0.02), "%s %s %.5f vs %.5f",
                 c.name, f.name.c_str(), r.estimate.value, r.expected);
        }
    }
    return v;
}

Verdict index_three_ways() {
    Verdict v;
    double worst = 0.0;
    bool ok = true;
    for (int m = -3; m <= 3; ++m) {
        auto u = TrigPolynomial::monomial({m});
        for (double c : {1.0, 1.0 / 3.0}) {
            auto model = toeplitz(u, 512, c);
            auto pair = toeplitz_pair(model, 2);
            OddOptions o;
            o.scale = c;
            double want = -m * c;
            double got[5] = {tau_index(model).value, calderon_index(pair, 1), calderon_index(pair, 2),
                             odd_pairing(u, 1, o).value, odd_pairing(u, 2, o).value};
            for (double g : got) {
                worst = std::max(worst, std::abs(g - want));
                ok = ok && std::abs(g - want) <= 1e-8;
            }
        }
    }
    note(v, ok, "m in -3..3, c in {1, 1/3}: kernel, Calderon n=1,2, cocycle k=1,2; max deviation %.1e", worst);
    return v;
}

Verdict additivity() {
    Verdict v;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> d(-4, 4);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        int a = d(rng), b = d(rng);
        auto u = TrigPolynomial::monomial({a}), w = TrigPolynomial::monomial({b});
        double iu = tau_index(toeplitz(u, 512)).value, iw = tau_index(toeplitz(w, 512)).value;
        double iuw = tau_index(toeplitz(u * w, 512)).value;
        double cal = calderon_index(toeplitz_pair(toeplitz(u * w, 512), 1), 1);
        worst = std::max({worst, std::abs(iuw - iu - iw), std::abs(cal - iu - iw)});
    }
    note(v, worst <= 1e-8, "10 random pairs, max |Ind(uv) - Ind(u) - Ind(v)| = %.1e", worst);
    return v;
}

Verdict property_suite() {
    Verdict v;
    auto r = run_property_suite(42, 200);
    long cases = 0, failures = 0;
    double worst = 0.0;
    for (const auto& o : r.outcomes) {
        cases += o.cases;
        failures += o.failures;
        worst = std::max(worst, o.worst);
    }
    note(v, r.passed() && r.outcomes.size() == 12, "%zu properties, %ld cases, %ld failures, worst %.1e",
         r.outcomes.size(), cases, failures, worst);
    return v;
}

Verdict truncated_traces() {
    Verdict v;
    auto circle = circle_dirac(1000000).inverse_power(1.0, KernelPolicy::Drop);
    std::vector<double> one(circle.size(), 1.0), alt(circle.size());
    for (std::size_t i = 0; i < alt.size(); ++i)
        alt[i] = std::lround(1.0 / circle.atoms()[i].value) % 2 == 0 ? 1.0 : -1.0;
    auto torus = torus_model(2, TorusKind::Laplacian, 2000).inverse_power(1.0);
    std::vector<double> tone(torus.size(), 1.0);

    auto check = [&](const char* name, const TruncatedTraces& t) {
        bool conv = t.by_singular_values.converged && t.by_level.converged && t.reference.converged;
        note(v, t.agree && conv, "%s %.5f / %.5f / %.5f", name, t.by_singular_values.value, t.by_level.value,
             t.reference.value);
    };
    check("circle", truncated_trace_formulas(one, circle));
    auto a = truncated_trace_formulas(alt, circle);
    check("alternating", a);
    note(v, std::abs(a.reference.value) <= a.reference.error_band + 1e-3, "alternating reference ~ 0");
    check("torus", truncated_trace_formulas(tone, torus));
    return v;
}

TrigPolynomial random_trig(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> f(-2, 2);
    std::normal_distribution<double> g;
    TrigPolynomial t(2);
    for (int i = 0; i < 4; ++i) t.add({f(rng), f(rng)}, cd(g(rng), g(rng)));
    return t;
}

Verdict hochschild() {
    Verdict v;
    auto q = cosphere_quadrature(2);
    std::mt19937_64 rng(7);
    double anti = 0.0, zero = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        auto a0 = random_trig(rng), a1 = random_trig(rng), a2 = random_trig(rng);
        std::vector<TrigPolynomial> x{a0, a1, a2}, y{a0, a2, a1};
        cd h = hochschild_pairing(x, q).value;
        anti = std::max(anti, std::abs(h + hochschild_pairing(y, q).value) / std::max(1.0, std::abs(h)));
        std::vector<TrigPolynomial> c{a0, TrigPolynomial::constant(2, 1.5), a2};
        zero = std::max(zero, std::abs(hochschild_pairing(c, q).value));
        std::vector<TrigPolynomial> c2{a0, a1, TrigPolynomial::constant(2, cd(0.0, 2.0))};
        zero = std::max(zero, std::abs(hochschild_pairing(c2, q).value));
    }
    note(v, anti <= 1e-10, "antisymmetry %.1e", anti);
    note(v, zero <= 1e-10, "constants %.1e", zero);

    std::vector<cd> ratios;
    while (ratios.size() < 10) {
        std::vector<TrigPolynomial> a{random_trig(rng), random_trig(rng), random_trig(rng)};
        auto h = hochschild_pairing(a, q);
        if (std::abs(h.analytic) > 1e-3) ratios.push_back(h.constant);
    }
    double spread = 0.0;
    for (const auto& r : ratios) spread = std::max(spread, std::abs(r - ratios[0]) / std::abs(ratios[0]));
    note(v, spread <= 1e-6, "ratio %.10f%+.10fi over 10 triples, spread %.1e", ratios[0].real(), ratios[0].imag(),
         spread);
    return v;
}

Verdict non_measurable() {
    Verdict v;
    auto e = omega_limit([](double t) { return std::sin(std::log(t)); }, 1.0, 1e8);
    double lo = e.value - e.error_band, hi = e.value + e.error_band;
    note(v, !e.converged && lo >= -1.0 && hi <= 1.0, "converged=%s, band [%.3f, %.3f]",
         e.converged ? "true" : "false", lo, hi);
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<Verdict()> run;
    } criteria[] = {
        {"harmonic baseline", harmonic},
        {"circle dixmier / residue / weyl", circle_triangle},
        {"torus foliation identity", torus_foliation},
        {"heat trace", weil},
        {"C_p(f) regularized integrals", cp_integrals},
        {"kernel = Calderon = cocycle", index_three_ways},
        {"index additivity", additivity},
        {"s-number property suite", property_suite},
        {"truncated-trace formulas", truncated_traces},
        {"Hochschild locality", hochschild},
        {"non-measurable detection", non_measurable},
    };
    int failed = 0, n = 0;
    for (const auto& c : criteria) {
        ++n;
        auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("threw: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d %s  %-32s %s (%.2f s)\n", n, v.pass ? "PASS" : "FAIL", c.title, v.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}

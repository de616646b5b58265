#include "ncg/cli.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "ncg/errors.hpp"
#include "ncg/index.hpp"
#include "ncg/json_io.hpp"
#include "ncg/models.hpp"
#include "ncg/proptest.hpp"
#include "ncg/spectrum.hpp"
#include "ncg/symbols.hpp"
#include "ncg/zeta_heat.hpp"

namespace ncg {

namespace {

struct Outcome {
    json result;
    std::string csv;
    bool indeterminate = false;
    bool failed = false;
};

bool is_kind(const std::string& s) {
    return s == "circle-dirac" || s == "torus-laplacian" || s == "torus-dirac" || s == "harmonic" || s == "power";
}

// Inline JSON when the text starts like a document, otherwise a file path.
json read_document(const std::string& text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw SchemaError("", "empty document");
    if (text[first] == '{' || text[first] == '[') return parse_document(text);
    return load_document(text);
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

ModelDescriptor descriptor(const RunConfig& cfg, const char* default_op) {
    ModelDescriptor m;
    if (is_kind(cfg.model)) {
        m.kind = cfg.model;
        m.p = m.kind == "torus-laplacian" || m.kind == "torus-dirac" ? 2 : 1;
        m.op = default_op;
    } else {
        m = model_from_json(read_document(cfg.model));
    }
    if (cfg.cutoff) m.cutoff = parse_cutoff(*cfg.cutoff);
    if (cfg.p && is_kind(cfg.model)) m.p = static_cast<int>(*cfg.p);
    if (!cfg.lambda.empty()) m.lambda_weights = cfg.lambda;
    return m;
}

// The spectrum an invocation works on: --input file, else the emitted model.
WeightedSpectrum spectrum_for(const RunConfig& cfg, const char* default_op) {
    if (!cfg.input.empty()) {
        if (!cfg.model.empty()) throw SchemaError("", "give either --input or --model, not both");
        return spectrum_from_json(read_document(cfg.input));
    }
    if (cfg.model.empty()) throw SchemaError("", "one of --input or --model is required");
    return emit_model(descriptor(cfg, default_op));
}

// Order of |D| (or of 1+Δ) for heat and regularized integrals.
double operator_dimension(const RunConfig& cfg, const WeightedSpectrum& s) {
    if (cfg.p) return *cfg.p;
    if (cfg.input.empty()) {
        auto m = descriptor(cfg, "abs");
        if (m.kind == "torus-laplacian") return m.p / 2.0;
        if (m.kind == "circle-dirac" || m.kind == "torus-dirac") return m.p;
    }
    return spectral_dimension(s).d;
}

std::vector<double> default_points(const WeightedSpectrum& s) {
    std::vector<double> t;
    double top = std::max(1.0, s.total_weight());
    for (double x = 1.0; x <= top; x *= 10.0) t.push_back(x);
    return t;
}

std::string trailing_levels_csv(const LimitEstimate& e) {
    std::ostringstream s;
    s << "t,f";
    for (std::size_t l = 1; l < e.levels.size(); ++l) s << ",M" << (l == 1 ? "" : std::to_string(l)) << "f";
    s << "\n";
    for (std::size_t i = 0; i < e.grid.size(); ++i) {
        s << fmt(e.grid[i]);
        for (const auto& lv : e.levels) s << "," << fmt(lv[i]);
        s << "\n";
    }
    return s.str();
}

std::string estimate_header(const std::string& name, const LimitEstimate& e) {
    std::ostringstream s;
    s << "# " << name << "=" << fmt(e.value) << " band=" << fmt(e.error_band)
      << " converged=" << (e.converged ? "true" : "false") << " method=" << e.method << "\n";
    return s.str();
}

Outcome do_mu_sigma(const RunConfig& cfg, bool want_sigma) {
    auto s = spectrum_for(cfg, "inverse");
    auto pts = cfg.points.empty() ? default_points(s) : cfg.points;
    Outcome o;
    json rows = json::array();
    std::ostringstream csv;
    csv << (want_sigma ? "t,sigma,tail_bound\n" : "t,mu\n");
    for (double t : pts) {
        if (!(t >= 0.0)) throw SchemaError("/t", "points must be nonnegative");
        if (want_sigma) {
            auto v = sigma(s, t);
            rows.push_back({{"t", t}, {"sigma", v.value}, {"tail_bound", v.tail_bound}});
            csv << fmt(t) << "," << fmt(v.value) << "," << fmt(v.tail_bound) << "\n";
        } else {
            double v = mu(s, t);
            rows.push_back({{"t", t}, {"mu", v}});
            csv << fmt(t) << "," << fmt(v) << "\n";
        }
    }
    o.result = {{want_sigma ? "sigma" : "mu", rows}, {"cutoff_note", s.cutoff_note}};
    o.csv = csv.str();
    return o;
}

Outcome do_classify(const RunConfig& cfg) {
    auto s = spectrum_for(cfg, "inverse");
    auto c = classify(s, cfg.p.value_or(1.0));
    Outcome o;
    o.result = to_json(c);
    std::ostringstream csv;
    csv << "p,tau_compact,trace_class,dixmier,weak_p,exponent,fit_residual\n"
        << fmt(c.p) << "," << to_string(c.tau_compact) << "," << to_string(c.trace_class) << ","
        << to_string(c.dixmier) << "," << to_string(c.weak_p) << "," << fmt(c.exponent) << ","
        << fmt(c.fit_residual) << "\n";
    o.csv = csv.str();
    o.indeterminate = c.dixmier == Membership::Indeterminate || c.weak_p == Membership::Indeterminate;
    return o;
}

Outcome do_dixmier(const RunConfig& cfg) {
    auto s = spectrum_for(cfg, "inverse");
    auto e = dixmier_trace(s, cfg.limit);
    Outcome o;
    o.result = to_json(e, true);
    o.result["cutoff_note"] = s.cutoff_note;
    o.csv = estimate_header("trace", e) + trailing_levels_csv(e);
    o.indeterminate = !e.converged;
    return o;
}

Outcome do_zeta(const RunConfig& cfg) {
    auto s = spectrum_for(cfg, "abs");
    auto dim = spectral_dimension(s);
    auto r = residue_to_dixmier(s);
    auto w = weyl_ratio(s, cfg.limit);
    Outcome o;
    o.result = {{"d", r.d},
                {"raw_slope", dim.raw_slope},
                {"residual", dim.residual},
                {"snapped", r.snapped},
                {"A", r.A},
                {"trace", r.trace},
                {"weyl_ratio", to_json(w)},
                {"bands", {{"trace", r.error}, {"weyl_ratio", w.error_band}}},
                {"xs", r.xs},
                {"gs", r.gs},
                {"cutoff_note", s.cutoff_note}};
    std::ostringstream csv;
    csv << "# d=" << fmt(r.d) << " A=" << fmt(r.A) << " trace=" << fmt(r.trace) << " band=" << fmt(r.error) << "\n"
        << "x,g\n";
    for (std::size_t i = 0; i < r.xs.size(); ++i) csv << fmt(r.xs[i]) << "," << fmt(r.gs[i]) << "\n";
    o.csv = csv.str();
    o.indeterminate = !w.converged;
    return o;
}

DecayFunction decay_named(const std::string& name) {
    if (name == "gaussian") return gaussian_decay();
    if (name == "indicator") return smoothed_indicator();
    if (name == "exponential") return exponential_decay();
    throw SchemaError("/function", "unknown function '" + name + "' (gaussian, indicator, exponential, heat)");
}

Outcome do_heat(const RunConfig& cfg) {
    auto s = spectrum_for(cfg, "abs");
    double p = operator_dimension(cfg, s);
    std::vector<double> T(s.size(), 1.0);
    auto r = cfg.function == "heat" ? heat_trace_check(s, T, p, cfg.limit)
                                    : regularized_integral(s, T, decay_named(cfg.function), p, cfg.limit);
    Outcome o;
    o.result = {{"function", cfg.function},
                {"p", p},
                {"estimate", to_json(r.estimate)},
                {"constant", r.constant},
                {"reference", to_json(r.reference)},
                {"expected", r.expected},
                {"agree", r.agree},
                {"bands", {{"estimate", r.estimate.error_band}, {"reference", r.reference.error_band}}},
                {"cutoff_note", s.cutoff_note}};
    o.csv = estimate_header("integral", r.estimate) + "# constant=" + fmt(r.constant) +
            " expected=" + fmt(r.expected) + "\n" + trailing_levels_csv(r.estimate);
    o.indeterminate = !r.estimate.converged || !r.reference.converged;
    return o;
}

Outcome do_residue(const RunConfig& cfg) {
    if (cfg.symbol.empty()) throw SchemaError("", "--symbol is required");
    auto sym = symbol_from_json(read_document(cfg.symbol));
    auto q = cosphere_quadrature(sym.p);
    std::vector<double> lambda = cfg.lambda;
    if (lambda.empty() && !cfg.model.empty()) lambda = descriptor(cfg, "inverse").lambda_weights;
    if (lambda.empty()) lambda = {1.0};
    double mass = 0.0;
    for (double l : lambda) mass += l;
    double chart = chart_residue(sym, q);
    double fol = foliated_residue(sym, lambda, q);
    Outcome o;
    o.result = {{"p", sym.p},
                {"order", sym.order},
                {"chart_residue", chart},
                {"foliated_residue", fol},
                {"lambda_mass", mass},
                {"quadrature_exactness", q.exactness}};
    std::ostringstream csv;
    csv << "p,order,chart_residue,foliated_residue,lambda_mass\n"
        << sym.p << "," << sym.order << "," << fmt(chart) << "," << fmt(fol) << "," << fmt(mass) << "\n";
    if (!cfg.model.empty()) {
        auto s = emit_model(descriptor(cfg, "inverse"));
        auto e = dixmier_trace(s, cfg.limit);
        bool agree = std::abs(e.value - fol) <= e.error_band + cfg.limit.tolerance * std::abs(fol);
        o.result["eigenvalue_side"] = to_json(e);
        o.result["agree"] = agree;
        csv << "# eigenvalue_side=" << fmt(e.value) << " band=" << fmt(e.error_band)
            << " agree=" << (agree ? "true" : "false") << "\n";
        o.indeterminate = !e.converged;
    }
    o.csv = csv.str();
    return o;
}

TrigPolynomial circle_symbol(const RunConfig& cfg) {
    if (cfg.symbol.empty()) throw SchemaError("", "--symbol is required");
    return trig_from_json(read_document(cfg.symbol), 1);
}

int odd_modes(const TrigPolynomial& u, int k) {
    int spread = u.degree() + inverse_symbol(u).degree();
    return std::max(64, (2 * k + 2) * spread + 8);
}

Outcome do_index(const RunConfig& cfg) {
    auto u = circle_symbol(cfg);
    int M = cfg.cutoff ? parse_cutoff(*cfg.cutoff) : 512;
    auto ns = cfg.orders.empty() ? std::vector<int>{1, 2} : cfg.orders;
    auto model = toeplitz(u, M, cfg.scale);
    auto ker = tau_index(model);
    int n_max = *std::max_element(ns.begin(), ns.end());
    auto pair = toeplitz_pair(model, n_max);

    Outcome o;
    json cal = json::object(), pairing = json::object();
    double worst = 0.0;
    std::ostringstream csv;
    csv << "method,order,value\nkernel,0," << fmt(ker.value) << "\n";
    for (int n : ns) {
        double v = calderon_index(pair, n);
        cal[std::to_string(n)] = v;
        worst = std::max(worst, std::abs(v - ker.value));
        csv << "calderon," << n << "," << fmt(v) << "\n";
    }
    for (int k : {1, 2}) {
        OddOptions opt;
        opt.modes = odd_modes(u, k);
        opt.scale = cfg.scale;
        opt.doubled = cfg.doubled;
        auto pv = odd_pairing(u, k, opt);
        pairing[std::to_string(k)] = pv.value;
        worst = std::max(worst, std::abs(pv.value - ker.value));
        csv << "cocycle," << k << "," << fmt(pv.value) << "\n";
    }
    bool agree = worst <= 1e-8 * std::max(1.0, std::abs(ker.value));
    o.result = {{"winding", winding_number(u)},
                {"cutoff", M},
                {"scale", cfg.scale},
                {"index_kernel", ker.value},
                {"kernel", ker.kernel},
                {"cokernel", ker.cokernel},
                {"index_calderon", cal},
                {"pairing", pairing},
                {"bands", {{"max_disagreement", worst}}},
                {"agree", agree}};
    if (std::isfinite(ker.gap_ratio)) o.result["gap_ratio"] = ker.gap_ratio;
    o.csv = csv.str();
    o.indeterminate = !agree;
    return o;
}

Outcome do_cocycle(const RunConfig& cfg) {
    if (cfg.symbol.empty()) throw SchemaError("", "--symbol is required");
    auto doc = read_document(cfg.symbol);
    Outcome o;
    std::ostringstream csv;
    if (doc.is_object() && doc.contains("tuple")) {
        int p = doc.contains("p") ? doc["p"].get<int>() : 2;
        const auto& t = doc["tuple"];
        if (!t.is_array() || static_cast<int>(t.size()) != p + 1)
            throw SchemaError("/tuple", "expected p + 1 trigonometric polynomials");
        std::vector<TrigPolynomial> a;
        for (std::size_t i = 0; i < t.size(); ++i) a.push_back(trig_from_json(t[i], p, "/tuple/" + std::to_string(i)));
        auto h = hochschild_pairing(a, cosphere_quadrature(p));
        auto c = hochschild_constant(p);
        auto pair = [](cd z) { return json{z.real(), z.imag()}; };
        o.result = {{"p", p},
                    {"value", pair(h.value)},
                    {"analytic", pair(h.analytic)},
                    {"ratio", pair(h.constant)},
                    {"expected_constant", pair(c)}};
        csv << "quantity,re,im\nvalue," << fmt(h.value.real()) << "," << fmt(h.value.imag()) << "\nanalytic,"
            << fmt(h.analytic.real()) << "," << fmt(h.analytic.imag()) << "\n";
        o.csv = csv.str();
        return o;
    }
    auto u = trig_from_json(doc, 1);
    auto ks = cfg.orders.empty() ? std::vector<int>{1, 2} : cfg.orders;
    json rows = json::array();
    csv << "k,literal,value\n";
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int k : ks) {
        OddOptions opt;
        opt.modes = odd_modes(u, k);
        opt.scale = cfg.scale;
        opt.doubled = cfg.doubled;
        if (cfg.p) opt.p = *cfg.p;
        auto pv = odd_pairing(u, k, opt);
        json row{{"k", k}, {"literal", pv.literal}, {"value", pv.value}};
        if (std::isfinite(prev) && prev != 0.0) row["ratio_to_previous"] = pv.literal / prev;
        prev = pv.literal;
        rows.push_back(row);
        csv << k << "," << fmt(pv.literal) << "," << fmt(pv.value) << "\n";
    }
    o.result = {{"winding", winding_number(u)}, {"pairings", rows}};
    o.csv = csv.str();
    return o;
}

Outcome do_proptest(const RunConfig& cfg) {
    auto r = run_property_suite(cfg.seed, cfg.models);
    Outcome o;
    json rows = json::array();
    std::ostringstream csv;
    csv << "property,cases,failures,worst\n";
    for (const auto& p : r.outcomes) {
        rows.push_back({{"property", p.name}, {"cases", p.cases}, {"failures", p.failures}, {"worst", p.worst},
                        {"first_failure", p.first_failure}});
        csv << p.name << "," << p.cases << "," << p.failures << "," << fmt(p.worst) << "\n";
    }
    o.result = {{"seed", r.seed}, {"models", r.models}, {"noise", r.noise}, {"passed", r.passed()},
                {"properties", rows}};
    o.csv = csv.str();
    o.failed = !r.passed();
    return o;
}

Outcome do_emit(const RunConfig& cfg) {
    if (cfg.model.empty()) throw SchemaError("", "--model is required");
    Outcome o;
    o.result = to_json(emit_model(descriptor(cfg, "inverse")));
    return o;
}

void write_atomically(const std::string& path, const std::string& body) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw PreconditionError("cannot write " + tmp.string());
        f << body;
        f.flush();
        if (!f) throw PreconditionError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw PreconditionError("cannot move output into " + path + ": " + ec.message());
    }
}

}  // namespace

int parse_cutoff(double value) {
    if (!std::isfinite(value) || value < 1.0 || value != std::floor(value) || value > 2e9)
        throw SchemaError("/cutoff", "cutoff must be a positive integer");
    return static_cast<int>(value);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.limit.validate();
        if (cfg.format != "json" && cfg.format != "csv") throw SchemaError("/format", "format must be json or csv");
        Outcome o;
        const auto& c = cfg.subcommand;
        if (c == "mu") o = do_mu_sigma(cfg, false);
        else if (c == "sigma") o = do_mu_sigma(cfg, true);
        else if (c == "classify") o = do_classify(cfg);
        else if (c == "dixmier") o = do_dixmier(cfg);
        else if (c == "zeta") o = do_zeta(cfg);
        else if (c == "heat") o = do_heat(cfg);
        else if (c == "residue") o = do_residue(cfg);
        else if (c == "index") o = do_index(cfg);
        else if (c == "cocycle") o = do_cocycle(cfg);
        else if (c == "proptest") o = do_proptest(cfg);
        else if (c == "model-emit") o = do_emit(cfg);
        else throw SchemaError("", "unknown subcommand '" + c + "'");

        bool as_csv = cfg.format == "csv" && !o.csv.empty();
        std::string body = as_csv ? o.csv : o.result.dump(2) + "\n";
        if (cfg.out.empty()) out << body;
        else write_atomically(cfg.out, body);

        if (o.failed) {
            err << "error: property violated\n";
            return kExitFailure;
        }
        if (o.indeterminate && !cfg.allow_indeterminate) {
            err << "indeterminate: estimate did not converge (rerun with --allow-indeterminate to accept)\n";
            return kExitIndeterminate;
        }
        return kExitOk;
    } catch (const SchemaError& e) {
        err << "schema error: " << (e.pointer().empty() ? "(document)" : "") << e.what() << "\n";
        return kExitSchema;
    } catch (const TailUncertain& e) {
        err << "indeterminate: " << e.what() << " (bound " << e.bound() << ")\n";
        return kExitIndeterminate;
    } catch (const IllConditioned& e) {
        err << "indeterminate: " << e.what() << " (gap ratio " << e.gap_ratio() << ")\n";
        return kExitIndeterminate;
    } catch (const Indeterminate& e) {
        err << "indeterminate: " << e.what() << "\n";
        return kExitIndeterminate;
    } catch (const PreconditionError& e) {
        err << "refused: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const json::exception& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitSchema;
    }
}

}  // namespace ncg

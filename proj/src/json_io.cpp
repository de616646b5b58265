#include "ncg/json_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ncg/errors.hpp"

namespace ncg {

namespace {

std::string child(const std::string& ptr, const std::string& key) {
    std::string k;
    for (char ch : key) {
        if (ch == '~') k += "~0";
        else if (ch == '/') k += "~1";
        else k += ch;
    }
    return ptr + "/" + k;
}

std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

void require_object(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw SchemaError(ptr, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw SchemaError(child(ptr, k), "unknown field");
}

const json& field(const json& j, const std::string& ptr, const char* key) {
    if (!j.contains(key)) throw SchemaError(child(ptr, key), "required field is missing");
    return j.at(key);
}

double number(const json& j, const std::string& ptr) {
    if (!j.is_number()) throw SchemaError(ptr, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(ptr, "expected a finite number");
    return v;
}

int integer(const json& j, const std::string& ptr) {
    double v = number(j, ptr);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw SchemaError(ptr, "expected an integer");
    return static_cast<int>(v);
}

std::string text(const json& j, const std::string& ptr) {
    if (!j.is_string()) throw SchemaError(ptr, "expected a string");
    return j.get<std::string>();
}

cd complex_value(const json& j, const std::string& ptr) {
    if (j.is_number()) return {number(j, ptr), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {number(j[0], child(ptr, 0)), number(j[1], child(ptr, 1))};
    throw SchemaError(ptr, "expected a number or [re, im]");
}

MultiIndex multi_index(const json& j, int p, const std::string& ptr) {
    MultiIndex m;
    if (j.is_number()) {
        m.push_back(integer(j, ptr));
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) m.push_back(integer(j[i], child(ptr, i)));
    } else if (j.is_string()) {
        std::stringstream ss(j.get<std::string>());
        std::string part;
        while (std::getline(ss, part, ',')) {
            try {
                std::size_t used = 0;
                m.push_back(std::stoi(part, &used));
                if (part.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(part);
            } catch (const std::exception&) {
                throw SchemaError(ptr, "frequency '" + j.get<std::string>() + "' is not a list of integers");
            }
        }
    } else {
        throw SchemaError(ptr, "expected a frequency (integer, list, or \"m1,m2\")");
    }
    if (static_cast<int>(m.size()) != p)
        throw SchemaError(ptr, "frequency has dimension " + std::to_string(m.size()) + ", expected " + std::to_string(p));
    return m;
}

MatrixXcd matrix_value(const json& j, const std::string& ptr) {
    if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number())) {
        return MatrixXcd::Constant(1, 1, complex_value(j, ptr));
    }
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw SchemaError(ptr, "expected a matrix (list of rows)");
    auto rows = static_cast<Eigen::Index>(j.size()), cols = static_cast<Eigen::Index>(j[0].size());
    MatrixXcd M(rows, cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
            throw SchemaError(child(ptr, r), "rows must share one length");
        for (std::size_t c = 0; c < j[r].size(); ++c)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_value(j[r][c], child(child(ptr, r), c));
    }
    return M;
}

Orientation orientation_from(const std::string& s, const std::string& ptr) {
    if (s == "compact") return Orientation::Compact;
    if (s == "discrete") return Orientation::Discrete;
    throw SchemaError(ptr, "orientation must be \"compact\" or \"discrete\"");
}

KernelPolicy kernel_from(const std::string& s, const std::string& ptr) {
    if (s == "keep") return KernelPolicy::Keep;
    if (s == "drop") return KernelPolicy::Drop;
    if (s == "bracket") return KernelPolicy::Bracket;
    throw SchemaError(ptr, "kernel must be keep, drop, or bracket");
}

const char* kernel_name(KernelPolicy k) {
    switch (k) {
        case KernelPolicy::Keep: return "keep";
        case KernelPolicy::Drop: return "drop";
        case KernelPolicy::Bracket: return "bracket";
    }
    return "bracket";
}

}  // namespace

json to_json(const WeightedSpectrum& s) {
    json atoms = json::array();
    for (const auto& a : s.atoms()) atoms.push_back({a.value, a.weight});
    json j;
    j["atoms"] = std::move(atoms);
    j["tail"] = s.tail() ? json{{"c", s.tail()->c}, {"d", s.tail()->d}} : json(nullptr);
    j["orientation"] = s.orientation() == Orientation::Compact ? "compact" : "discrete";
    j["tail_tolerance"] = s.tail_tolerance();
    j["cutoff_note"] = s.cutoff_note;
    return j;
}

WeightedSpectrum spectrum_from_json(const json& j) {
    require_object(j, "", {"atoms", "tail", "orientation", "tail_tolerance", "cutoff_note"});
    const auto& a = field(j, "", "atoms");
    if (!a.is_array()) throw SchemaError("/atoms", "expected an array of [value, weight]");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto ptr = child("/atoms", i);
        if (!a[i].is_array() || a[i].size() != 2) throw SchemaError(ptr, "expected [value, weight]");
        double v = number(a[i][0], child(ptr, 0)), w = number(a[i][1], child(ptr, 1));
        if (v < 0.0) throw SchemaError(child(ptr, 0), "values must be nonnegative");
        if (!(w > 0.0)) throw SchemaError(child(ptr, 1), "weights must be positive");
        atoms.push_back({v, w});
    }
    std::optional<PowerTail> tail;
    if (j.contains("tail") && !j["tail"].is_null()) {
        require_object(j["tail"], "/tail", {"c", "d"});
        double c = number(field(j["tail"], "/tail", "c"), "/tail/c");
        double d = number(field(j["tail"], "/tail", "d"), "/tail/d");
        if (!(c > 0.0)) throw SchemaError("/tail/c", "must be positive");
        if (!(d > 0.0)) throw SchemaError("/tail/d", "must be positive");
        tail = PowerTail{c, d};
    }
    Orientation o = j.contains("orientation") ? orientation_from(text(j["orientation"], "/orientation"), "/orientation")
                                              : Orientation::Compact;
    double tol = j.contains("tail_tolerance") ? number(j["tail_tolerance"], "/tail_tolerance") : 0.05;
    WeightedSpectrum s;
    try {
        s = WeightedSpectrum(std::move(atoms), tail, o, tol);
    } catch (const PreconditionError& e) {
        throw SchemaError("", e.what());
    }
    if (j.contains("cutoff_note")) s.cutoff_note = text(j["cutoff_note"], "/cutoff_note");
    return s;
}

TrigPolynomial trig_from_json(const json& j, int p, const std::string& ptr) {
    const json* coeffs = &j;
    std::string cptr = ptr;
    if (j.is_object() && j.contains("coeffs")) {
        require_object(j, ptr, {"coeffs"});
        coeffs = &j["coeffs"];
        cptr = child(ptr, "coeffs");
    }
    TrigPolynomial t(p);
    if (coeffs->is_object()) {
        for (const auto& [k, v] : coeffs->items())
            t.add(multi_index(json(k), p, child(cptr, k)), complex_value(v, child(cptr, k)));
    } else if (coeffs->is_array()) {
        for (std::size_t i = 0; i < coeffs->size(); ++i) {
            const auto& e = (*coeffs)[i];
            auto eptr = child(cptr, i);
            if (!e.is_array() || e.size() != 2) throw SchemaError(eptr, "expected [frequency, coefficient]");
            t.add(multi_index(e[0], p, child(eptr, 0)), complex_value(e[1], child(eptr, 1)));
        }
    } else {
        throw SchemaError(cptr, "expected coefficients as an object or a list");
    }
    return t;
}

json to_json(const TrigPolynomial& t) {
    json c = json::array();
    for (const auto& [m, a] : t.coefficients()) c.push_back({m, {a.real(), a.imag()}});
    return json{{"coeffs", c}};
}

ClassicalSymbol symbol_from_json(const json& j) {
    require_object(j, "", {"order", "p", "coeffs"});
    int order = integer(field(j, "", "order"), "/order");
    int p = j.contains("p") ? integer(j["p"], "/p") : -order;
    if (p < 1 || p > 4) throw SchemaError(j.contains("p") ? "/p" : "/order", "leaf dimension must be in 1…4");
    const auto& c = field(j, "", "coeffs");
    if (!c.is_array() || c.empty()) throw SchemaError("/coeffs", "expected a non-empty list of [m-vector, matrix]");
    std::map<MultiIndex, MatrixXcd> coeffs;
    Eigen::Index rank = -1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto ptr = child("/coeffs", i);
        if (!c[i].is_array() || c[i].size() != 2) throw SchemaError(ptr, "expected [m-vector, matrix]");
        auto m = multi_index(c[i][0], p, child(ptr, 0));
        auto M = matrix_value(c[i][1], child(ptr, 1));
        if (M.rows() != M.cols()) throw SchemaError(child(ptr, 1), "symbol matrices must be square");
        if (rank >= 0 && M.rows() != rank) throw SchemaError(child(ptr, 1), "matrix size differs from earlier entries");
        rank = M.rows();
        auto it = coeffs.find(m);
        if (it == coeffs.end()) coeffs.emplace(m, M);
        else it->second += M;
    }
    return fourier_symbol(order, p, coeffs);
}

ModelDescriptor model_from_json(const json& j) {
    require_object(j, "", {"kind", "p", "cutoff", "lambda_weights", "kernel", "operator", "exponent", "symbol_coeffs"});
    ModelDescriptor m;
    m.kind = text(field(j, "", "kind"), "/kind");
    static const std::set<std::string> kinds{"circle-dirac", "torus-laplacian", "torus-dirac", "harmonic", "power"};
    if (!kinds.count(m.kind)) throw SchemaError("/kind", "unknown model kind '" + m.kind + "'");
    m.p = m.kind == "circle-dirac" || m.kind == "harmonic" || m.kind == "power" ? 1 : 2;
    if (j.contains("p")) m.p = integer(j["p"], "/p");
    if (m.p < 1 || m.p > 4) throw SchemaError("/p", "p must be in 1…4");
    if (m.kind == "circle-dirac" && m.p != 1) throw SchemaError("/p", "the circle has p = 1");
    if (j.contains("cutoff")) m.cutoff = integer(j["cutoff"], "/cutoff");
    if (m.cutoff < 1) throw SchemaError("/cutoff", "cutoff must be >= 1");
    if (j.contains("lambda_weights")) {
        const auto& l = j["lambda_weights"];
        if (!l.is_array()) throw SchemaError("/lambda_weights", "expected a list of positive numbers");
        for (std::size_t i = 0; i < l.size(); ++i) {
            double v = number(l[i], child("/lambda_weights", i));
            if (!(v > 0.0)) throw SchemaError(child("/lambda_weights", i), "transverse weights must be positive");
            m.lambda_weights.push_back(v);
        }
    }
    if (j.contains("kernel")) m.kernel = kernel_from(text(j["kernel"], "/kernel"), "/kernel");
    if (j.contains("operator")) {
        m.op = text(j["operator"], "/operator");
        if (m.op != "inverse" && m.op != "abs") throw SchemaError("/operator", "operator must be inverse or abs");
    }
    if (j.contains("exponent")) m.exponent = number(j["exponent"], "/exponent");
    if (m.kind == "harmonic") m.exponent = 1.0;
    if (!(m.exponent > 0.0)) throw SchemaError("/exponent", "exponent must be positive");
    if (j.contains("symbol_coeffs")) m.symbol = trig_from_json(j["symbol_coeffs"], m.p, "/symbol_coeffs");
    return m;
}

json to_json(const ModelDescriptor& m) {
    json j{{"kind", m.kind}, {"p", m.p}, {"cutoff", m.cutoff}, {"kernel", kernel_name(m.kernel)},
           {"operator", m.op}, {"exponent", m.exponent}};
    if (!m.lambda_weights.empty()) j["lambda_weights"] = m.lambda_weights;
    if (m.symbol) j["symbol_coeffs"] = to_json(*m.symbol)["coeffs"];
    return j;
}

DiagonalModel diagonal_model(const ModelDescriptor& m) {
    if (m.kind == "circle-dirac") return circle_dirac(m.cutoff);
    if (m.kind == "torus-laplacian") return torus_model(m.p, TorusKind::Laplacian, m.cutoff);
    if (m.kind == "torus-dirac") return torus_model(m.p, TorusKind::Dirac, m.cutoff);
    throw PreconditionError("model kind '" + m.kind + "' has no Dirac operator");
}

WeightedSpectrum emit_model(const ModelDescriptor& m) {
    WeightedSpectrum s;
    if (m.kind == "harmonic" || m.kind == "power") {
        s = atomize(power_profile(m.exponent), static_cast<std::size_t>(m.cutoff));
    } else {
        auto d = diagonal_model(m);
        if (m.op == "abs") {
            s = d.abs_spectrum(m.kernel);
        } else {
            double power = d.laplacian() ? m.p / 2.0 : m.p;
            s = d.inverse_power(power, m.kernel);
        }
    }
    if (!m.lambda_weights.empty()) {
        auto fam = foliated_family(DiagonalModel{}, m.lambda_weights);
        auto note = s.cutoff_note;
        s = s.weights_scaled(fam.mass());
        s.cutoff_note = note;
    }
    return s;
}

json to_json(const LimitEstimate& e, bool with_levels) {
    json j{{"value", e.value},
           {"error_band", e.error_band},
           {"converged", e.converged},
           {"method", e.method},
           {"bracket", {e.bracket_lo, e.bracket_hi}},
           {"fit_residual", e.fit_residual}};
    if (with_levels) {
        j["grid"] = e.grid;
        j["levels"] = e.levels;
    }
    return j;
}

json to_json(const IdealClassification& c) {
    return json{{"p", c.p},
                {"tau_compact", to_string(c.tau_compact)},
                {"trace_class", to_string(c.trace_class)},
                {"dixmier", to_string(c.dixmier)},
                {"weak_p", to_string(c.weak_p)},
                {"exponent", c.exponent},
                {"data_exponent", c.data_exponent},
                {"fit_residual", c.fit_residual},
                {"sup_sigma_over_log", c.sup_sigma_over_log},
                {"sup_sigma_over_power", c.sup_sigma_over_power},
                {"basis", c.basis}};
}

json parse_document(const std::string& body) {
    if (body.find_first_not_of(" \t\r\n") == std::string::npos) throw SchemaError("", "empty document");
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("malformed JSON: ") + e.what());
    }
}

json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str());
}

}  // namespace ncg

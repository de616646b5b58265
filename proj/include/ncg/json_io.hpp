#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncg/index.hpp"
#include "ncg/limiting.hpp"
#include "ncg/models.hpp"
#include "ncg/spectrum.hpp"
#include "ncg/symbols.hpp"
#include "ncg/trig.hpp"

namespace ncg {

using json = nlohmann::json;

// {atoms: [[value, weight], …], tail: {c, d} | null, orientation, tail_tolerance, cutoff_note}
json to_json(const WeightedSpectrum& s);
WeightedSpectrum spectrum_from_json(const json& j);

// Either {"coeffs": {"m": a, "m1,m2": [re, im], …}} or {"coeffs": [[m-vector, a], …]}.
TrigPolynomial trig_from_json(const json& j, int p, const std::string& pointer = "");
json to_json(const TrigPolynomial& t);

// {order, p?, coeffs: [[m-vector, matrix], …]} with matrix a number, [re, im], or rows.
ClassicalSymbol symbol_from_json(const json& j);

struct ModelDescriptor {
    std::string kind = "circle-dirac";  // circle-dirac | torus-laplacian | torus-dirac | harmonic | power
    int p = 1;
    int cutoff = 1000;
    std::vector<double> lambda_weights;  // transverse weights; empty means mass 1
    KernelPolicy kernel = KernelPolicy::Bracket;
    std::string op = "inverse";  // inverse: order −p operator; abs: |D| or 1+Δ
    double exponent = 1.0;       // power profiles μ_t = (1+t)^{-exponent}
    std::optional<TrigPolynomial> symbol;
};

ModelDescriptor model_from_json(const json& j);
json to_json(const ModelDescriptor& m);

// The WeightedSpectrum a descriptor denotes (power profiles are atomized over `cutoff` cells).
WeightedSpectrum emit_model(const ModelDescriptor& m);
// The diagonal model itself (circle and torus kinds only).
DiagonalModel diagonal_model(const ModelDescriptor& m);

json to_json(const LimitEstimate& e, bool with_levels = false);
json to_json(const IdealClassification& c);

// Parses a whole document; empty or malformed input is a schema error at "".
json parse_document(const std::string& text);
json load_document(const std::string& path);

}  // namespace ncg

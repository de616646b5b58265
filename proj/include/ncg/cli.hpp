#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncg/limiting.hpp"

namespace ncg {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,  // a property suite found a violation
    kExitSchema = 2,   // malformed descriptor or bad usage
    kExitIndeterminate = 3,
    kExitPrecondition = 4,
};

struct RunConfig {
    // mu | sigma | classify | dixmier | zeta | heat | residue | index | cocycle | proptest | model-emit
    std::string subcommand;

    std::string model;   // kind name, JSON file, or inline JSON
    std::string input;   // WeightedSpectrum file (alternative to model)
    std::string symbol;  // JSON file or inline JSON
    std::optional<double> cutoff;
    std::optional<double> p;
    std::vector<double> lambda;

    LimitProcessConfig limit;
    std::string format = "json";  // json | csv
    std::uint64_t seed = 1;
    int models = 200;
    bool allow_indeterminate = false;
    std::string out;  // empty: write to the output stream

    std::vector<double> points;  // t values for mu / sigma
    std::vector<int> orders;     // Calderon n, or cocycle k
    std::string function = "gaussian";  // heat: gaussian | indicator | exponential | heat
    double scale = 1.0;
    bool doubled = false;
};

// One computation. Results go to `out` (or cfg.out, written atomically);
// diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// "1e6" → 1000000; throws SchemaError on non-integral or non-positive values.
int parse_cutoff(double value);

}  // namespace ncg

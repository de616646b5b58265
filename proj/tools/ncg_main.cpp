#include <iostream>

#include <CLI11.hpp>

#include "ncg/cli.hpp"

int main(int argc, char** argv) {
    ncg::RunConfig cfg;
    CLI::App app{"ncg: semifinite spectral computations on model operators"};
    app.require_subcommand(1);

    std::optional<double> cutoff, p;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "model kind (circle-dirac, torus-laplacian, torus-dirac, harmonic, power), JSON file, or inline JSON");
        sub->add_option("--input", cfg.input, "WeightedSpectrum JSON file");
        sub->add_option("--cutoff", cutoff, "mode cutoff (1e6 accepted)");
        sub->add_option("--p", p, "dimension / exponent override");
        sub->add_option("--lambda", cfg.lambda, "transverse weights")->delimiter(',');
        sub->add_option("--cesaro-iters", cfg.limit.cesaro_iterations, "log-Cesaro iterations")->capture_default_str();
        sub->add_option("--window-decades", cfg.limit.window_decades, "extrapolation window")->capture_default_str();
        sub->add_option("--tol", cfg.limit.tolerance, "relative convergence tolerance")->capture_default_str();
        sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
        sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        sub->add_flag("--allow-indeterminate", cfg.allow_indeterminate, "exit 0 on non-converged estimates");
        sub->add_option("--out", cfg.out, "write output here (atomically) instead of stdout");
    };

    struct Entry {
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {"mu", "generalized s-numbers mu_t"},
        {"sigma", "sigma_t = integral of mu over [0, t]"},
        {"classify", "ideal membership"},
        {"dixmier", "Dixmier trace with log-Cesaro diagnostics"},
        {"zeta", "spectral dimension, zeta residue, Weyl ratio"},
        {"heat", "regularized integrals and the heat-trace check"},
        {"residue", "foliated Wodzicki residue of a symbol"},
        {"index", "Toeplitz index three ways"},
        {"cocycle", "odd Chern character pairings or the Hochschild pairing"},
        {"proptest", "s-number property suite"},
    };
    for (const auto& s : entries) {
        auto* sub = app.add_subcommand(s.name, s.help);
        common(sub);
        sub->callback([&cfg, name = std::string(s.name)] { cfg.subcommand = name; });
        std::string n = s.name;
        if (n == "mu" || n == "sigma") sub->add_option("--t", cfg.points, "evaluation points")->delimiter(',');
        if (n == "residue" || n == "index" || n == "cocycle")
            sub->add_option("--symbol", cfg.symbol, "symbol JSON (file or inline)");
        if (n == "index" || n == "cocycle") {
            sub->add_option("--orders", cfg.orders, "Calderon powers n (index) or cocycle degrees k")->delimiter(',');
            sub->add_option("--scale", cfg.scale, "trace scale c")->capture_default_str();
            sub->add_flag("--doubled", cfg.doubled, "use the doubled symmetry F1 + V");
        }
        if (n == "heat")
            sub->add_option("--function", cfg.function, "gaussian, indicator, exponential, or heat")->capture_default_str();
        if (n == "proptest") sub->add_option("--models", cfg.models, "number of random models")->capture_default_str();
    }
    auto* model = app.add_subcommand("model", "model descriptors");
    model->require_subcommand(1);
    auto* emit = model->add_subcommand("emit", "write the WeightedSpectrum a descriptor denotes");
    common(emit);
    emit->callback([&cfg] { cfg.subcommand = "model-emit"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ncg::kExitSchema;
    }
    cfg.cutoff = cutoff;
    cfg.p = p;
    return ncg::run(cfg, std::cout, std::cerr);
}

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ncg/cli.hpp"
#include "ncg/errors.hpp"
#include "ncg/json_io.hpp"

using namespace ncg;

namespace {

struct Ran {
    int code;
    std::string out, err;
    json doc() const { return json::parse(out); }
};

Ran run_cli(const RunConfig& cfg) {
    std::ostringstream o, e;
    int code = run(cfg, o, e);
    return {code, o.str(), e.str()};
}

RunConfig config(const std::string& sub) {
    RunConfig c;
    c.subcommand = sub;
    return c;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ncg_test_" + name)).string();
}

std::string schema_pointer(const std::function<void()>& f) {
    try {
        f();
    } catch (const SchemaError& e) {
        return e.pointer();
    }
    return "<no error>";
}

int shell(const std::string& cmd) {
    int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

}  // namespace

TEST(SpectrumJson, RoundTrip) {
    WeightedSpectrum s({{1.0, 2.0}, {0.5, 2.0}}, PowerTail{2.0, 1.0});
    s.cutoff_note = "two modes";
    auto back = spectrum_from_json(to_json(s));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_DOUBLE_EQ(back.atoms()[1].value, 0.5);
    ASSERT_TRUE(back.tail().has_value());
    EXPECT_DOUBLE_EQ(back.tail()->c, 2.0);
    EXPECT_EQ(back.cutoff_note, "two modes");
    EXPECT_EQ(to_json(back).dump(), to_json(s).dump());
}

TEST(SpectrumJson, PointersNameTheOffendingField) {
    EXPECT_EQ(schema_pointer([] { spectrum_from_json(json::parse(R"({"atoms":[[1,1],[2,-1]]})")); }), "/atoms/1/1");
    EXPECT_EQ(schema_pointer([] { spectrum_from_json(json::parse(R"({"atoms":[[1,"x"]]})")); }), "/atoms/0/1");
    EXPECT_EQ(schema_pointer([] { spectrum_from_json(json::parse(R"({})")); }), "/atoms");
    EXPECT_EQ(schema_pointer([] { spectrum_from_json(json::parse(R"({"atoms":[],"tail":{"c":1}})")); }), "/tail/d");
    EXPECT_EQ(schema_pointer([] { spectrum_from_json(json::parse(R"({"atoms":[],"colour":1})")); }), "/colour");
}

TEST(TrigJson, BothLayouts) {
    auto a = trig_from_json(json::parse(R"({"coeffs":{"1":1,"-2":[0,0.5]}})"), 1);
    EXPECT_EQ(a.coefficient({1}), cd(1.0, 0.0));
    EXPECT_EQ(a.coefficient({-2}), cd(0.0, 0.5));
    auto b = trig_from_json(json::parse(R"({"coeffs":[[[1,0],2],[[0,-1],[1,1]]]})"), 2);
    EXPECT_EQ(b.coefficient({1, 0}), cd(2.0, 0.0));
    auto c = trig_from_json(json::parse(R"({"coeffs":{"1,0":2}})"), 2);
    EXPECT_EQ(c.coefficient({1, 0}), cd(2.0, 0.0));
    EXPECT_EQ(schema_pointer([] { trig_from_json(json::parse(R"({"coeffs":{"1,0":2}})"), 1); }), "/coeffs/1,0");
    EXPECT_EQ(schema_pointer([] { trig_from_json(json::parse(R"({"coeffs":{"a":2}})"), 1); }), "/coeffs/a");
}

TEST(SymbolJson, MatrixCoefficients) {
    auto s = symbol_from_json(json::parse(R"({"order":-2,"coeffs":[[[0,0],[[1,0],[0,1]]]]})"));
    EXPECT_EQ(s.p, 2);
    EXPECT_EQ(s.rank, 2);
    EXPECT_EQ(schema_pointer([] { symbol_from_json(json::parse(R"({"order":-2,"coeffs":[[[0,0],[[1,0]]]]})")); }),
              "/coeffs/0/1");
}

TEST(ModelJson, Descriptor) {
    auto m = model_from_json(json::parse(R"({"kind":"torus-laplacian","p":2,"cutoff":50,"lambda_weights":[0.5,1.5]})"));
    EXPECT_EQ(m.kind, "torus-laplacian");
    EXPECT_EQ(m.cutoff, 50);
    auto s = emit_model(m);
    auto base = emit_model(model_from_json(json::parse(R"({"kind":"torus-laplacian","cutoff":50})")));
    EXPECT_DOUBLE_EQ(s.total_weight(), 2.0 * base.total_weight());
    EXPECT_EQ(model_from_json(to_json(m)).cutoff, 50);
    EXPECT_EQ(schema_pointer([] { model_from_json(json::parse(R"({"kind":"sphere"})")); }), "/kind");
    EXPECT_EQ(schema_pointer([] { model_from_json(json::parse(R"({})")); }), "/kind");
    EXPECT_EQ(schema_pointer([] { model_from_json(json::parse(R"({"kind":"circle-dirac","lambda_weights":[1,0]})")); }),
              "/lambda_weights/1");
}

TEST(Documents, EmptyAndMalformed) {
    EXPECT_EQ(schema_pointer([] { parse_document(""); }), "");
    EXPECT_EQ(schema_pointer([] { parse_document("{\"a\":"); }), "");
}

TEST(Cli, DixmierCircle) {
    auto c = config("dixmier");
    c.model = "circle-dirac";
    c.cutoff = 1e6;
    auto r = run_cli(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto d = r.doc();
    EXPECT_NEAR(d["value"].get<double>(), 2.0, 1e-3);
    EXPECT_TRUE(d.contains("error_band"));
    EXPECT_TRUE(d["converged"].get<bool>());
}

TEST(Cli, DixmierCsvColumns) {
    auto c = config("dixmier");
    c.model = "harmonic";
    c.cutoff = 1e6;
    c.format = "csv";
    auto r = run_cli(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("\nt,f,Mf,M2f,M3f\n"), std::string::npos);
    EXPECT_EQ(r.out.rfind("# trace=", 0), 0u);
}

TEST(Cli, IndexThreeWays) {
    auto c = config("index");
    c.symbol = R"({"coeffs":{"1":1}})";
    auto r = run_cli(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto d = r.doc();
    EXPECT_NEAR(d["index_kernel"].get<double>(), -1.0, 1e-12);
    for (auto& [n, v] : d["index_calderon"].items()) EXPECT_NEAR(v.get<double>(), -1.0, 1e-8) << n;
    for (auto& [k, v] : d["pairing"].items()) EXPECT_NEAR(v.get<double>(), -1.0, 1e-8) << k;
    EXPECT_TRUE(d["agree"].get<bool>());
}

TEST(Cli, IndexWithTraceScale) {
    auto c = config("index");
    c.symbol = R"({"coeffs":{"-2":1}})";
    c.scale = 1.0 / 3.0;
    auto r = run_cli(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NEAR(r.doc()["index_kernel"].get<double>(), 2.0 / 3.0, 1e-12);
}

TEST(Cli, EmptyModelFileIsSchemaError) {
    auto path = temp_path("empty.json");
    std::ofstream(path).close();
    auto c = config("dixmier");
    c.model = path;
    auto r = run_cli(c);
    EXPECT_EQ(r.code, kExitSchema);
    EXPECT_TRUE(r.out.empty());
    std::filesystem::remove(path);
}

TEST(Cli, UnknownKindReportsPointer) {
    auto c = config("dixmier");
    c.model = R"({"kind":"sphere"})";
    auto r = run_cli(c);
    EXPECT_EQ(r.code, kExitSchema);
    EXPECT_NE(r.err.find("/kind"), std::string::npos);
}

TEST(Cli, PreconditionExitCode) {
    auto c = config("zeta");
    c.model = "torus-dirac";
    c.cutoff = 50;
    EXPECT_EQ(run_cli(c).code, kExitPrecondition);
}

TEST(Cli, IndeterminateUnlessAllowed) {
    auto c = config("dixmier");
    c.model = "circle-dirac";
    c.cutoff = 1e5;
    c.limit.tolerance = 1e-12;
    auto r = run_cli(c);
    EXPECT_EQ(r.code, kExitIndeterminate);
    EXPECT_FALSE(r.doc()["converged"].get<bool>());
    c.allow_indeterminate = true;
    EXPECT_EQ(run_cli(c).code, kExitOk);
}

TEST(Cli, UndecidableMembershipIsIndeterminate) {
    std::vector<Atom> at;
    for (int k = 1; k <= 20000; ++k) {
        double t = k + 0.5, u = std::log(std::log(t + 2.0));
        at.push_back({(1.0 + 0.9 * std::sin(3.0 * u)) / t, 1.0});
    }
    auto path = temp_path("wobble.json");
    std::ofstream(path) << to_json(WeightedSpectrum(at, PowerTail{1.0, 1.0}, Orientation::Compact, 1.0)).dump();
    auto c = config("dixmier");
    c.input = path;
    EXPECT_EQ(run_cli(c).code, kExitIndeterminate);
    std::filesystem::remove(path);
}

TEST(Cli, ModelEmitFeedsOtherSubcommands) {
    auto path = temp_path("circle_spectrum.json");
    auto e = config("model-emit");
    e.model = "circle-dirac";
    e.cutoff = 100000;
    e.out = path;
    ASSERT_EQ(run_cli(e).code, kExitOk);
    auto m = config("mu");
    m.input = path;
    m.points = {0.5, 2.5, 100.5};
    auto r = run_cli(m);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto rows = r.doc()["mu"];
    EXPECT_DOUBLE_EQ(rows[0]["mu"].get<double>(), 1.0);
    EXPECT_NEAR(rows[1]["mu"].get<double>(), 1.0 / std::sqrt(2.0), 1e-15);
    auto d = config("dixmier");
    d.input = path;
    auto rd = run_cli(d);
    ASSERT_EQ(rd.code, kExitOk) << rd.err;
    EXPECT_NEAR(rd.doc()["value"].get<double>(), 2.0, 0.01);
    std::filesystem::remove(path);
}

TEST(Cli, OutputIsAtomicAndComplete) {
    auto path = temp_path("prop.json");
    auto c = config("proptest");
    c.models = 10;
    c.out = path;
    ASSERT_EQ(run_cli(c).code, kExitOk);
    std::ifstream in(path);
    auto d = json::parse(in);
    EXPECT_TRUE(d["passed"].get<bool>());
    for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::temp_directory_path()))
        EXPECT_EQ(entry.path().string().find(path + ".tmp"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(Cli, SeedDeterminism) {
    auto c = config("proptest");
    c.models = 15;
    c.seed = 99;
    auto a = run_cli(c), b = run_cli(c);
    EXPECT_EQ(a.out, b.out);
    c.seed = 100;
    EXPECT_NE(run_cli(c).out, a.out);
}

TEST(Cli, HochschildTuple) {
    auto c = config("cocycle");
    c.symbol = R"({"p":2,"tuple":[{"coeffs":{"-1,-1":1}},{"coeffs":{"1,0":1}},{"coeffs":{"0,1":1}}]})";
    auto r = run_cli(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto d = r.doc();
    EXPECT_NEAR(d["ratio"][1].get<double>(), d["expected_constant"][1].get<double>(), 1e-12);
}

TEST(Cli, OddCocycleRatios) {
    auto c = config("cocycle");
    c.symbol = R"({"coeffs":{"2":1}})";
    auto r = run_cli(c);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    auto rows = r.doc()["pairings"];
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NEAR(rows[0]["value"].get<double>(), -2.0, 1e-8);
    EXPECT_NEAR(rows[1]["ratio_to_previous"].get<double>(), -1.0, 1e-8);
}

TEST(Binary, ExitCodes) {
    std::string bin = NCG_CLI_PATH;
    EXPECT_EQ(shell(bin + " dixmier --model circle-dirac --cutoff 1e5"), 0);
    EXPECT_EQ(shell(bin + " dixmier --model circle-dirac --cutoff 2.5"), 2);
    EXPECT_EQ(shell(bin + " dixmier --no-such-flag"), 2);
    EXPECT_EQ(shell(bin + " index --symbol '{\"coeffs\":{\"0\":1,\"1\":1}}'"), 4);
    EXPECT_EQ(shell(bin + " model emit --model '{\"kind\":\"circle-dirac\",\"cutoff\":-1}'"), 2);
}

#include "ncg/proptest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "ncg/models.hpp"
#include "ncg/spectrum.hpp"

namespace ncg {

bool PropertySuiteReport::passed() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.failures == 0 && o.cases > 0; });
}

namespace {

class Recorder {
public:
    explicit Recorder(double noise) : noise_(noise) {}

    // Records lhs <= rhs up to noise·scale.
    void leq(const std::string& name, double lhs, double rhs, double scale, int model) {
        check(name, lhs - rhs, scale, model);
    }
    void eq(const std::string& name, double lhs, double rhs, double scale, int model) {
        check(name, std::abs(lhs - rhs), scale, model);
    }

    std::vector<PropertyOutcome> take(const std::vector<std::string>& order) {
        std::vector<PropertyOutcome> out;
        for (const auto& n : order) {
            auto o = by_name_[n];
            o.name = n;
            out.push_back(o);
        }
        return out;
    }

private:
    void check(const std::string& name, double violation, double scale, int model) {
        auto& o = by_name_[name];
        ++o.cases;
        double rel = violation / std::max(1.0, scale);
        if (rel > o.worst) o.worst = rel;
        if (rel > noise_) {
            if (o.failures == 0) {
                std::ostringstream s;
                s << "model " << model << ": violation " << violation;
                o.first_failure = s.str();
            }
            ++o.failures;
        }
    }

    double noise_;
    std::map<std::string, PropertyOutcome> by_name_;
};

MatrixXcd random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cd{g(rng), g(rng)};
    return m;
}

// f(|T|) through the singular value decomposition.
MatrixXcd abs_function(const MatrixXcd& T, const std::function<double(double)>& f) {
    Eigen::JacobiSVD<MatrixXcd> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = f(s(i));
    const MatrixXcd& V = svd.matrixV();
    return V * s.cast<cd>().asDiagonal() * V.adjoint();
}

double op_norm(const MatrixXcd& x) { return Eigen::JacobiSVD<MatrixXcd>(x).singularValues()(0); }

const std::vector<std::string> kNames = {
    "mu scaling",
    "mu of f(|T|)",
    "mu of a sum",
    "mu of a product",
    "mu two-sided bound",
    "mu monotone",
    "sigma superadditive",
    "sigma subadditive",
    "sigma interpolation bound",
    "sigma attained by shifted split",
    "sigma truncation split bound",
    "trace rearrangement",
};

}  // namespace

PropertySuiteReport run_property_suite(std::uint64_t seed, int models, double noise) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(2, 8);
    std::uniform_real_distribution<double> weight(0.1, 3.0), unit(0.0, 1.0);
    std::normal_distribution<double> g;
    Recorder rec(noise);

    for (int model = 0; model < models; ++model) {
        int n = dim(rng);
        WeightedMatrixAlgebra alg{n, weight(rng)};
        double c = alg.c;
        MatrixXcd T = random_matrix(n, rng), S = random_matrix(n, rng);
        MatrixXcd A = random_matrix(n, rng), B = random_matrix(n, rng);
        auto sT = alg.s_numbers(T), sS = alg.s_numbers(S);
        auto sigma_of = [&](const MatrixXcd& x, double t) { return sigma(alg.s_numbers(x), t).value; };

        std::vector<double> grid;
        for (int k = 0; k < n; ++k) grid.push_back((k + 1.0 / 3.0) * c);
        double scale = op_norm(T) + op_norm(S);

        cd lambda{g(rng), g(rng)};
        auto sLT = alg.s_numbers(lambda * T);
        auto f = [](double x) { return x * x + 0.5 * x; };
        auto sfT = alg.s_numbers(abs_function(T, f));
        MatrixXcd sum = T + S, prod = T * S, sandwich = A * T * B;
        auto sSum = alg.s_numbers(sum), sProd = alg.s_numbers(prod), sSand = alg.s_numbers(sandwich);
        double nA = op_norm(A), nB = op_norm(B);
        MatrixXcd P = T.adjoint() * T, Q = P + S.adjoint() * S;
        auto sP = alg.s_numbers(P), sQ = alg.s_numbers(Q);

        for (double t : grid) {
            double mt = mu(sT, t);
            rec.eq(kNames[0], mu(sLT, t), std::abs(lambda) * mt, std::abs(lambda) * scale, model);
            rec.eq(kNames[1], mu(sfT, t), f(mt), f(scale), model);
            rec.leq(kNames[4], mu(sSand, t), nA * mt * nB, nA * nB * scale, model);
            rec.leq(kNames[5], mu(sP, t), mu(sQ, t), op_norm(Q), model);
            for (double s : grid) {
                double ms = mu(sS, s);
                rec.leq(kNames[2], mu(sSum, t + s), mt + ms, scale, model);
                rec.leq(kNames[3], mu(sProd, t + s), mt * ms, scale * scale, model);
            }
        }

        // σ on positive pairs, at arbitrary (including jump) points.
        MatrixXcd T1 = T.adjoint() * T, T2 = S.adjoint() * S;
        double pscale = c * n * (op_norm(T1) + op_norm(T2));
        for (int rep = 0; rep < 4; ++rep) {
            double t1 = unit(rng) * c * n, t2 = unit(rng) * c * n;
            rec.leq(kNames[6], sigma_of(T1, t1) + sigma_of(T2, t2), sigma_of(T1 + T2, t1 + t2), pscale, model);
            rec.leq(kNames[7], sigma_of(T1 + T2, t1), sigma_of(T1, t1) + sigma_of(T2, t1), pscale, model);
        }

        // σ_t(T) = inf{‖T₁‖₁ + t‖T₂‖ : T = T₁ + T₂}.
        Eigen::JacobiSVD<MatrixXcd> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        auto trace_norm = [&](const MatrixXcd& x) { return c * Eigen::JacobiSVD<MatrixXcd>(x).singularValues().sum(); };
        double tscale = c * n * op_norm(T);
        for (double t : grid) {
            double st = sigma(sT, t).value, mt = mu(sT, t);
            for (int rep = 0; rep < 3; ++rep) {
                MatrixXcd X = random_matrix(n, rng) * (unit(rng) * op_norm(T) / std::sqrt(n));
                rec.leq(kNames[8], st, trace_norm(X) + t * op_norm(T - X), tscale, model);
            }
            Eigen::VectorXd shifted(sv.size()), top(sv.size());
            for (Eigen::Index i = 0; i < sv.size(); ++i) {
                shifted(i) = std::max(sv(i) - mt, 0.0);
                top(i) = sv(i) > mt ? sv(i) : 0.0;
            }
            MatrixXcd Ts = svd.matrixU() * shifted.cast<cd>().asDiagonal() * svd.matrixV().adjoint();
            MatrixXcd Tt = svd.matrixU() * top.cast<cd>().asDiagonal() * svd.matrixV().adjoint();
            rec.eq(kNames[9], st, trace_norm(Ts) + t * op_norm(T - Ts), tscale, model);
            rec.leq(kNames[10], st, trace_norm(Tt) + t * op_norm(T - Tt), tscale, model);
        }

        // τ(f(|T|)) = ∫ f(μ_t) dt, the integral taken cell by cell between jumps of μ.
        auto h = [](double x) { return x * x * x + std::sqrt(x); };
        double lhs = (alg.trace(abs_function(T, h))).real();
        std::vector<double> cuts{0.0};
        for (const auto& a : sT.atoms()) cuts.push_back(cuts.back() + a.weight);
        double rhs = 0.0;
        for (std::size_t i = 1; i < cuts.size(); ++i)
            rhs += (cuts[i] - cuts[i - 1]) * h(mu(sT, 0.5 * (cuts[i] + cuts[i - 1])));
        rec.eq(kNames[11], lhs, rhs, c * n * h(op_norm(T)), model);
    }

    PropertySuiteReport r;
    r.seed = seed;
    r.models = models;
    r.noise = noise;
    r.outcomes = rec.take(kNames);
    return r;
}

}  // namespace ncg

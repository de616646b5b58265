#include "ncg/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/legendre.hpp>

#include "ncg/errors.hpp"

namespace ncg {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss–Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    auto zeros = boost::math::legendre_p_zeros<long double>(n);
    x.clear();
    w.clear();
    for (long double z : zeros) {
        long double dp = boost::math::legendre_p_prime<long double>(n, z);
        auto wt = static_cast<double>(2.0L / ((1.0L - z * z) * dp * dp));
        x.push_back(static_cast<double>(z));
        w.push_back(wt);
        if (z != 0.0L) {
            x.push_back(static_cast<double>(-z));
            w.push_back(wt);
        }
    }
}

// Equispaced nodes of [0, 2π)^p, visited in lexicographic order.
template <class Fn>
void for_grid(int p, int G, Fn fn) {
    std::vector<int> idx(static_cast<std::size_t>(p), 0);
    std::vector<double> x(static_cast<std::size_t>(p), 0.0);
    while (true) {
        for (int j = 0; j < p; ++j) x[static_cast<std::size_t>(j)] = 2.0 * kPi * idx[static_cast<std::size_t>(j)] / G;
        fn(std::span<const double>(x));
        int j = p - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == G) idx[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
    }
}

}  // namespace

double sphere_volume(int p) {
    if (p < 1) throw PreconditionError("sphere dimension must be >= 0");
    return 2.0 * std::pow(kPi, p / 2.0) / std::tgamma(p / 2.0);
}

double CosphereQuadrature::volume() const {
    long double v = 0.0L;
    for (double w : weights) v += w;
    return static_cast<double>(v);
}

CosphereQuadrature cosphere_quadrature(int p, int n) {
    if (n < 2) throw PreconditionError("quadrature needs at least 2 nodes per direction");
    CosphereQuadrature q;
    q.p = p;
    switch (p) {
        case 1:
            q.nodes = {{1.0}, {-1.0}};
            q.weights = {1.0, 1.0};
            q.exactness = std::numeric_limits<int>::max();
            break;
        case 2:
            for (int j = 0; j < n; ++j) {
                double t = 2.0 * kPi * j / n;
                q.nodes.push_back({std::cos(t), std::sin(t)});
                q.weights.push_back(2.0 * kPi / n);
            }
            q.exactness = n - 1;
            break;
        case 3: {
            std::vector<double> z, w;
            gauss_legendre(n, z, w);
            int m = 2 * n;
            for (std::size_t i = 0; i < z.size(); ++i) {
                double r = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
                for (int j = 0; j < m; ++j) {
                    double phi = 2.0 * kPi * j / m;
                    q.nodes.push_back({r * std::cos(phi), r * std::sin(phi), z[i]});
                    q.weights.push_back(w[i] * 2.0 * kPi / m);
                }
            }
            q.exactness = std::min(2 * n - 1, m - 1);
            break;
        }
        case 4: {
            // (√(1-t) e^{iξ₁}, √t e^{iξ₂}), measure ½ dt dξ₁ dξ₂ with t ∈ [0, 1].
            std::vector<double> z, w;
            gauss_legendre(n, z, w);
            int m = 2 * n;
            for (std::size_t i = 0; i < z.size(); ++i) {
                double t = 0.5 * (z[i] + 1.0);
                double a = std::sqrt(1.0 - t), b = std::sqrt(t);
                for (int j = 0; j < m; ++j)
                    for (int k = 0; k < m; ++k) {
                        double s1 = 2.0 * kPi * j / m, s2 = 2.0 * kPi * k / m;
                        q.nodes.push_back({a * std::cos(s1), a * std::sin(s1), b * std::cos(s2), b * std::sin(s2)});
                        q.weights.push_back(0.5 * 0.5 * w[i] * (2.0 * kPi / m) * (2.0 * kPi / m));
                    }
            }
            q.exactness = std::min(2 * n - 1, m - 1);
            break;
        }
        default: throw PreconditionError("cosphere quadrature is provided for p in {1, 2, 3, 4}");
    }
    return q;
}

ClassicalSymbol fourier_symbol(int order, int p, const std::map<MultiIndex, MatrixXcd>& coeffs) {
    if (coeffs.empty()) throw PreconditionError("symbol has no coefficients");
    Eigen::Index r = coeffs.begin()->second.rows();
    int deg = 0;
    for (const auto& [m, M] : coeffs) {
        if (static_cast<int>(m.size()) != p) throw PreconditionError("symbol multi-index has the wrong dimension");
        if (M.rows() != r || M.cols() != r) throw PreconditionError("symbol matrices must share one square size");
        for (int x : m) deg = std::max(deg, std::abs(x));
    }
    ClassicalSymbol s;
    s.order = order;
    s.p = p;
    s.rank = static_cast<int>(r);
    s.x_degree = deg;
    s.principal = [coeffs, r](std::span<const double> x, std::span<const double>) {
        MatrixXcd out = MatrixXcd::Zero(r, r);
        for (const auto& [m, M] : coeffs) {
            double ph = 0.0;
            for (std::size_t j = 0; j < m.size(); ++j) ph += m[j] * x[j];
            out += std::polar(1.0, ph) * M;
        }
        return out;
    };
    return s;
}

ClassicalSymbol scalar_symbol(int order, const TrigPolynomial& f) {
    std::map<MultiIndex, MatrixXcd> c;
    for (const auto& [m, a] : f.coefficients()) c[m] = MatrixXcd::Constant(1, 1, a);
    if (c.empty()) c[MultiIndex(static_cast<std::size_t>(f.dimension()), 0)] = MatrixXcd::Zero(1, 1);
    return fourier_symbol(order, f.dimension(), c);
}

double local_residue(const ClassicalSymbol& s, std::span<const double> x, const CosphereQuadrature& q) {
    if (s.order != -s.p) throw PreconditionError("the residue density needs a symbol of order -p");
    if (q.p != s.p) throw PreconditionError("quadrature sphere does not match the symbol dimension");
    cd sum{0.0, 0.0};
    for (std::size_t i = 0; i < q.nodes.size(); ++i) sum += q.weights[i] * s.principal(x, q.nodes[i]).trace();
    return sum.real() / std::pow(2.0 * kPi, s.p);
}

double chart_residue(const ClassicalSymbol& s, const CosphereQuadrature& q, int grid) {
    int G = grid > 0 ? grid : 2 * s.x_degree + 2;
    double sum = 0.0;
    for_grid(s.p, G, [&](std::span<const double> x) { sum += local_residue(s, x, q); });
    return sum * std::pow(2.0 * kPi / G, s.p);
}

double foliated_residue(std::span<const ClassicalSymbol> leaves, std::span<const double> lambda,
                        const CosphereQuadrature& q) {
    if (leaves.size() != lambda.size()) throw PreconditionError("one transverse weight per leaf symbol");
    double sum = 0.0;
    int p = leaves.empty() ? 1 : leaves[0].p;
    for (std::size_t j = 0; j < leaves.size(); ++j) {
        if (leaves[j].p != p) throw PreconditionError("leaves must share one dimension");
        if (!(lambda[j] >= 0.0)) throw PreconditionError("transverse weights must be nonnegative");
        if (lambda[j] != 0.0) sum += lambda[j] * chart_residue(leaves[j], q);
    }
    return sum / p;
}

double foliated_residue(const ClassicalSymbol& s, std::span<const double> lambda, const CosphereQuadrature& q) {
    double mass = 0.0;
    for (double l : lambda) {
        if (!(l >= 0.0)) throw PreconditionError("transverse weights must be nonnegative");
        mass += l;
    }
    return mass * chart_residue(s, q) / s.p;
}

ConnesTraceCheck connes_trace_check(const TrigPolynomial& f, int p, int cutoff, const LimitProcessConfig& cfg) {
    if (f.dimension() != p) throw PreconditionError("f must live on the p-torus");
    auto model = torus_model(p, TorusKind::Laplacian, cutoff);
    auto A = model.inverse_power(p / 2.0);
    // The diagonal of multiplication by f in the Fourier basis is the mean of f.
    std::vector<double> m(A.size(), f.mean().real());
    ConnesTraceCheck out;
    out.eigen = truncated_trace_formulas(m, A, cfg);
    auto q = cosphere_quadrature(p);
    out.residue = chart_residue(scalar_symbol(-p, f), q) / p;
    const auto& r = out.eigen.reference;
    double slack = cfg.tolerance * std::max(1.0, std::abs(out.residue));
    out.agree = out.eigen.agree && std::abs(r.value - out.residue) <= r.error_band + slack;
    return out;
}

cd hochschild_constant(int p) {
    if (p % 2 != 0 || p < 2 || p > 4) throw PreconditionError("the Hochschild formula is evaluated for even p in {2, 4}");
    cd clifford = std::pow(cd{0.0, -1.0}, p) * std::pow(cd{0.0, 1.0}, p / 2) * std::ldexp(1.0, p / 2);
    return clifford * sphere_volume(p) / (p * std::pow(2.0 * kPi, p));
}

HochschildValue hochschild_pairing(std::span<const TrigPolynomial> a, const CosphereQuadrature& q) {
    int p = static_cast<int>(a.size()) - 1;
    if (p < 2 || p % 2 != 0) throw PreconditionError("the Hochschild pairing is evaluated for even p only");
    if (q.p != p) throw PreconditionError("quadrature sphere does not match p");
    for (const auto& x : a)
        if (x.dimension() != p) throw PreconditionError("arguments must live on the p-torus");
    auto gam = clifford_generators(p);
    MatrixXcd chi = chirality(p);
    Eigen::Index r = chi.rows();

    std::vector<std::vector<TrigPolynomial>> grad(a.size());
    int deg = a[0].degree();
    for (std::size_t i = 1; i < a.size(); ++i) {
        for (int j = 0; j < p; ++j) grad[i].push_back(a[i].derivative(j));
        deg += a[i].degree();
    }
    int G = 2 * deg + 2;

    // Symbol-level density: a⁰·tr(γ c(da¹)…c(da^p)) times the cosphere average of |ξ|^{-p} = 1.
    cd chart{0.0, 0.0};
    for_grid(p, G, [&](std::span<const double> x) {
        MatrixXcd X = chi * a[0](x);
        for (std::size_t i = 1; i < a.size(); ++i) {
            MatrixXcd c = MatrixXcd::Zero(r, r);
            for (int j = 0; j < p; ++j) c += cd{0.0, -1.0} * grad[i][static_cast<std::size_t>(j)](x) * gam[static_cast<std::size_t>(j)];
            X = X * c;
        }
        chart += X.trace();
    });
    chart *= std::pow(2.0 * kPi / G, p);
    double sphere = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) sphere += q.weights[i];

    HochschildValue out;
    out.value = chart * sphere / (p * std::pow(2.0 * kPi, p));

    // ∫ a⁰ da¹∧…∧da^p = (2π)^p · mean(a⁰ Σ_σ sgn σ Π ∂_{σ(i)} a^i), exactly in Fourier space.
    std::vector<int> perm(static_cast<std::size_t>(p));
    std::iota(perm.begin(), perm.end(), 0);
    cd wedge{0.0, 0.0};
    do {
        int inv = 0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inv;
        TrigPolynomial prod = a[0];
        for (int i = 0; i < p; ++i) prod = prod * grad[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        wedge += (inv % 2 == 0 ? 1.0 : -1.0) * prod.mean();
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.analytic = wedge * std::pow(2.0 * kPi, p);
    out.constant = std::abs(out.analytic) > 0.0 ? out.value / out.analytic
                                                : cd{std::numeric_limits<double>::quiet_NaN(), 0.0};
    return out;
}

}  // namespace ncg

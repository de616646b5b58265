#include "ncg/index.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "ncg/errors.hpp"
#include "ncg/numeric.hpp"

namespace ncg {

namespace {

constexpr double kGap = 1e3;

Eigen::VectorXd singular_values(const MatrixXcd& T) {
    if (std::min(T.rows(), T.cols()) > 64) return Eigen::BDCSVD<MatrixXcd>(T).singularValues();
    return Eigen::JacobiSVD<MatrixXcd>(T).singularValues();
}

void require_projection(const MatrixXcd& e, Eigen::Index n) {
    if (e.rows() != n || e.cols() != n) throw PreconditionError("projection has the wrong size");
    double tol = 1e-10 * std::max(1.0, e.norm());
    if ((e * e - e).norm() > tol || (e - e.adjoint()).norm() > tol)
        throw PreconditionError("e must satisfy e = e² = e*");
}

}  // namespace

KernelDimension kernel_dimension(const MatrixXcd& T, double rel) {
    KernelDimension out;
    if (T.rows() == 0 || T.cols() == 0) {
        out.dim = static_cast<int>(T.cols());
        return out;
    }
    Eigen::VectorXd s = singular_values(T);
    out.threshold = rel * s(0);
    int rank = 0;
    double kept = std::numeric_limits<double>::infinity(), dropped = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > out.threshold) {
            ++rank;
            kept = std::min(kept, s(i));
        } else {
            dropped = std::max(dropped, s(i));
        }
    }
    out.dim = static_cast<int>(T.cols()) - rank;
    out.gap_ratio = dropped > 0.0 ? kept / dropped : std::numeric_limits<double>::infinity();
    double half = std::sqrt(kGap);
    bool bad_above = rank > 0 && kept < half * out.threshold;
    bool bad_below = dropped > out.threshold / half;
    if (s(0) > 0.0 && (bad_above || bad_below))
        throw IllConditioned("singular values cluster at the kernel threshold " + format_number(out.threshold),
                             out.gap_ratio);
    return out;
}

IndexResult tau_index(const MatrixXcd& T, double scale) {
    auto k = kernel_dimension(T);
    auto c = kernel_dimension(T.adjoint());
    return {scale * (k.dim - c.dim), k.dim, c.dim, std::min(k.gap_ratio, c.gap_ratio)};
}

IndexResult tau_index(const ToeplitzModel& m) {
    auto k = kernel_dimension(m.kernel_section());
    auto c = kernel_dimension(m.cokernel_section());
    return {m.trace_scale * (k.dim - c.dim), k.dim, c.dim, std::min(k.gap_ratio, c.gap_ratio)};
}

MatrixXcd FredholmPair::A() const { return MatrixXcd::Identity(S.rows(), T.cols()) - S * T; }
MatrixXcd FredholmPair::B() const { return MatrixXcd::Identity(T.rows(), S.cols()) - T * S; }

double FredholmPair::trace(const MatrixXcd& x) const {
    Eigen::Index n = interior < 0 ? x.rows() : std::min(interior, x.rows());
    return scale * x.diagonal().head(n).sum().real();
}

double FredholmPair::remainder_norm(double q) const {
    if (!(q >= 1.0)) throw PreconditionError("Schatten exponent must be >= 1");
    auto norm = [&](const MatrixXcd& x) {
        Eigen::Index n = interior < 0 ? x.rows() : std::min(interior, x.rows());
        auto s = singular_values(x.topLeftCorner(n, n));
        double sum = 0.0;
        for (Eigen::Index i = 0; i < s.size(); ++i) sum += std::pow(s(i), q);
        return std::pow(scale * sum, 1.0 / q);
    };
    return std::max(norm(A()), norm(B()));
}

FredholmPair toeplitz_pair(const ToeplitzModel& m, int n_max) {
    if (n_max < 1) throw PreconditionError("n_max must be >= 1");
    auto inv = inverse_symbol(m.symbol);
    int guard = n_max * (m.symbol.degree() + inv.degree());
    int last = m.cutoff + guard;
    if (last > 8192) throw PreconditionError("Toeplitz section too large: raise decay of 1/u or lower n");
    FredholmPair pair;
    pair.T = m.compressed(last);
    pair.S = multiplication_matrix(inv, 0, last);
    pair.scale = m.trace_scale;
    pair.p = 1.0;
    pair.interior = m.cutoff + 1;
    return pair;
}

double calderon_index(const FredholmPair& pair, int n) {
    if (n < 1 || n < pair.p) throw PreconditionError("Calderon power n must be >= p");
    MatrixXcd A = pair.A(), B = pair.B();
    MatrixXcd An = A, Bn = B;
    for (int j = 1; j < n; ++j) {
        An = An * A;
        Bn = Bn * B;
    }
    return pair.trace(An) - pair.trace(Bn);
}

PairingValue odd_pairing(const TrigPolynomial& u, int k, const OddOptions& opt) {
    if (k < 0) throw PreconditionError("cocycle degree k must be >= 0");
    // p = 0: finite-rank commutators, any k
    if (opt.p > 0.0 && !(k > opt.p / 2.0))
        throw PreconditionError("k must exceed p/2 for the cocycle to be trace class");
    auto v = inverse_symbol(u);
    int bw = std::max(u.degree(), v.degree());
    int L = opt.modes;
    if (L < (2 * k + 2) * bw) throw PreconditionError("too few modes for this symbol and degree");

    MatrixXcd U = multiplication_matrix(u, -L, L), V = multiplication_matrix(v, -L, L);
    MatrixXcd F = MatrixXcd::Zero(2 * L + 1, 2 * L + 1);
    for (int i = 0; i <= 2 * L; ++i) F(i, i) = i - L >= 0 ? 1.0 : -1.0;
    if (opt.doubled) {
        std::vector<double> eig;
        for (int n = -L; n <= L; ++n) eig.push_back(n);
        auto d = doubling(eig);
        // u acts as u ⊕ 1 so that it stays invertible on H ⊕ Ker D.
        U = d.embed(U);
        V = d.embed(V);
        for (int j = d.n; j < d.dim(); ++j) U(j, j) = V(j, j) = 1.0;
        F = d.F.cast<cd>();
    }
    MatrixXcd cu = F * U - U * F, cv = F * V - V * F;
    MatrixXcd X = V;
    for (int j = 1; j <= 2 * k + 1; ++j) X = X * (j % 2 == 1 ? cu : cv);
    PairingValue out;
    out.k = k;
    out.literal = -opt.scale * X.trace().real() / std::ldexp(1.0, 2 * k + 1);
    out.value = (k % 2 == 0 ? 1.0 : -1.0) * out.literal;
    return out;
}

EvenModel EvenModel::amplified(int N) const {
    if (N < 1) throw PreconditionError("amplification needs N >= 1");
    MatrixXcd id = MatrixXcd::Identity(N, N);
    EvenModel out = *this;
    out.F = Eigen::kroneckerProduct(F, id).eval();
    out.gamma = Eigen::kroneckerProduct(gamma, id).eval();
    return out;
}

EvenModel doubled_circle_even(int modes) {
    std::vector<double> eig;
    for (int n = -modes; n <= modes; ++n) eig.push_back(n);
    auto d = doubling(eig);
    Eigen::Index n = d.dim();
    EvenModel m;
    m.F = MatrixXcd::Zero(2 * n, 2 * n);
    m.F.topRightCorner(n, n) = d.F.cast<cd>();
    m.F.bottomLeftCorner(n, n) = d.F.cast<cd>();
    m.gamma = MatrixXcd::Identity(2 * n, 2 * n);
    m.gamma.bottomRightCorner(n, n) *= -1.0;
    m.p = 1.0;
    return m;
}

PairingValue even_pairing(const EvenModel& m, const MatrixXcd& e, int k) {
    require_projection(e, m.F.rows());
    if (m.p > 0.0 && !(k > m.p / 2.0))
        throw PreconditionError("k must exceed p/2 for the cocycle to be trace class");
    if ((m.gamma * e - e * m.gamma).norm() > 1e-10 * std::max(1.0, e.norm()))
        throw PreconditionError("e must commute with the grading");
    MatrixXcd C = m.F * e - e * m.F;
    MatrixXcd X = m.gamma * e;
    for (int j = 0; j < 2 * k; ++j) X = X * C;
    PairingValue out;
    out.k = k;
    out.literal = m.scale * X.trace().real();
    out.value = (k % 2 == 0 ? 1.0 : -1.0) * out.literal;
    return out;
}

double even_pairing_minimal(const EvenModel& m, const MatrixXcd& e, int p) {
    require_projection(e, m.F.rows());
    if (p < 0 || p % 2 != 0) throw PreconditionError("the minimal cocycle needs even p");
    MatrixXcd C = m.F * e - e * m.F;
    MatrixXcd X = m.gamma * m.F;
    for (int j = 0; j <= p; ++j) X = X * C;
    double sign = (p / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * 0.5 * m.scale * X.trace().real();
}

IndexResult even_index(const EvenModel& m, const MatrixXcd& e) {
    require_projection(e, m.F.rows());
    Eigen::Index n = m.F.rows();
    MatrixXcd id = MatrixXcd::Identity(n, n);
    auto range = [&](const MatrixXcd& q) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (q + q.adjoint()));
        std::vector<Eigen::Index> cols;
        for (Eigen::Index i = 0; i < n; ++i)
            if (es.eigenvalues()(i) > 0.5) cols.push_back(i);
        MatrixXcd E(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) E.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(cols[j]);
        return E;
    };
    MatrixXcd Ep = range(e * (id + m.gamma) * 0.5 * e);
    MatrixXcd Em = range(e * (id - m.gamma) * 0.5 * e);
    MatrixXcd M = Em.adjoint() * m.F * Ep;
    return tau_index(M, m.scale);
}

namespace {

int lattice_bandwidth(const LatticeSpace& L, const SparseXcd& x) {
    int bw = 0;
    const auto& pts = L.lattice_points();
    int s = L.spinor_rank();
    for (Eigen::Index c = 0; c < x.outerSize(); ++c)
        for (SparseXcd::InnerIterator it(x, c); it; ++it) {
            const auto& a = pts[static_cast<std::size_t>(it.row() / s)];
            const auto& b = pts[static_cast<std::size_t>(it.col() / s)];
            for (std::size_t j = 0; j < a.size(); ++j) bw = std::max(bw, std::abs(a[j] - b[j]));
        }
    return bw;
}

}  // namespace

HypertraceResult hypertrace_check(const LatticeSpace& L, const SparseXcd& T, const TrigPolynomial& A,
                                  const LimitProcessConfig& cfg) {
    if (T.rows() != L.dim() || T.cols() != L.dim()) throw PreconditionError("T does not act on the lattice space");
    const int p = L.p();
    double reach = L.radius() - A.degree() - lattice_bandwidth(L, T);
    if (reach < 4.0) throw PreconditionError("lattice radius too small for the symbol and T");
    SparseXcd MA = L.multiplication(A);
    SparseXcd X1 = (MA * T).pruned(), X2 = (T * MA).pruned();
    auto d1 = L.point_diagonal(X1), d2 = L.point_diagonal(X2);

    std::vector<Eigen::Index> order;
    for (Eigen::Index i = 0; i < L.points(); ++i)
        if (L.norm2(i) <= reach * reach) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return L.norm2(a) < L.norm2(b); });

    // Cumulative sums at shell boundaries, indexed by the mode count t.
    std::vector<double> ts;
    std::vector<cd> s1, s2;
    cd acc1{0.0, 0.0}, acc2{0.0, 0.0};
    double modes = 0.0;
    for (std::size_t j = 0; j < order.size(); ++j) {
        auto i = order[j];
        double w = std::pow(1.0 + L.norm2(i), -p / 2.0);
        acc1 += d1[static_cast<std::size_t>(i)] * w;
        acc2 += d2[static_cast<std::size_t>(i)] * w;
        modes += L.spinor_rank();
        if (j + 1 == order.size() || L.norm2(order[j + 1]) != L.norm2(i)) {
            ts.push_back(modes);
            s1.push_back(acc1);
            s2.push_back(acc2);
        }
    }
    auto at = [&](const std::vector<cd>& s, double t) {
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        if (it == ts.begin()) return cd{0.0, 0.0};
        return s[static_cast<std::size_t>(it - ts.begin() - 1)];
    };
    auto grid = log_grid(1.0, ts.back(), cfg.points_per_decade);
    std::vector<double> f[4];
    double ref = 0.0;
    for (double t : grid) {
        cd a = at(s1, t) / std::log1p(t), b = at(s2, t) / std::log1p(t);
        f[0].push_back(a.real());
        f[1].push_back(a.imag());
        f[2].push_back(b.real());
        f[3].push_back(b.imag());
        ref = std::max({ref, std::abs(a), std::abs(b)});
    }
    LimitProcessConfig c = cfg;
    c.reference_scale = std::max(cfg.reference_scale, ref);
    HypertraceResult out;
    out.lhs_re = omega_limit(grid, f[0], c);
    out.lhs_im = omega_limit(grid, f[1], c);
    out.rhs_re = omega_limit(grid, f[2], c);
    out.rhs_im = omega_limit(grid, f[3], c);
    out.residual = std::hypot(out.lhs_re.value - out.rhs_re.value, out.lhs_im.value - out.rhs_im.value);
    out.band = out.lhs_re.error_band + out.lhs_im.error_band + out.rhs_re.error_band + out.rhs_im.error_band;
    out.within = out.residual <= out.band + 1e-12 * std::max(1.0, ref);
    return out;
}

cd chern_cochain(const LatticeSpace& L, std::span<const TrigPolynomial> a, double radius) {
    if (a.size() % 2 != 1) throw PreconditionError("the even cochain takes an odd number of arguments");
    int k = static_cast<int>(a.size() / 2);
    SparseXcd F = L.symmetry();
    SparseXcd X = (L.grading() * L.multiplication(a[0])).pruned();
    for (std::size_t j = 1; j < a.size(); ++j) {
        SparseXcd M = L.multiplication(a[j]);
        SparseXcd C = (F * M - M * F).pruned();
        X = (X * C).pruned();
    }
    cd t = L.interior_trace(X, radius);
    return k % 2 == 0 ? t : -t;
}

cd chern_coboundary(const LatticeSpace& L, std::span<const TrigPolynomial> a, double radius) {
    if (a.size() < 2 || a.size() % 2 != 0) throw PreconditionError("the coboundary takes an even number of arguments");
    std::size_t n = a.size() - 1;
    cd sum{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<TrigPolynomial> b;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == j) {
                b.push_back(a[i] * a[i + 1]);
                ++i;
            } else {
                b.push_back(a[i]);
            }
        }
        sum += (j % 2 == 0 ? 1.0 : -1.0) * chern_cochain(L, b, radius);
    }
    std::vector<TrigPolynomial> b{a[n] * a[0]};
    for (std::size_t i = 1; i < n; ++i) b.push_back(a[i]);
    sum += (n % 2 == 0 ? 1.0 : -1.0) * chern_cochain(L, b, radius);
    return sum;
}

}  // namespace ncg

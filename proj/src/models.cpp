#include "ncg/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "ncg/errors.hpp"

namespace ncg {

namespace {

double unit_ball_volume(int p) {
    return std::pow(std::numbers::pi, p / 2.0) / std::tgamma(p / 2.0 + 1.0);
}

// Histogram of |k|² over Z^p ∩ {|k| ≤ R}.
std::vector<std::uint32_t> lattice_shell_counts(int p, int R) {
    auto R2 = static_cast<std::int64_t>(R) * R;
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(R2) + 1, 0);
    std::function<void(int, std::int64_t)> rec = [&](int dim, std::int64_t used) {
        std::int64_t room = R2 - used;
        auto kmax = static_cast<std::int64_t>(std::sqrt(static_cast<double>(room)));
        while (kmax * kmax > room) --kmax;
        while ((kmax + 1) * (kmax + 1) <= room) ++kmax;
        for (std::int64_t k = -kmax; k <= kmax; ++k) {
            std::int64_t u = used + k * k;
            if (dim == 1)
                ++counts[static_cast<std::size_t>(u)];
            else
                rec(dim - 1, u);
        }
    };
    rec(p, 0);
    return counts;
}

}  // namespace

const char* to_string(KernelPolicy k) {
    switch (k) {
        case KernelPolicy::Keep: return "keep";
        case KernelPolicy::Drop: return "drop";
        case KernelPolicy::Bracket: return "bracket (D^2+1)^(1/2)";
    }
    return "?";
}

DiagonalModel circle_dirac(int N) {
    if (N < 1) throw PreconditionError("circle_dirac needs N >= 1");
    DiagonalModel m;
    m.kind = "circle-dirac";
    m.p = 1;
    m.cutoff = N;
    m.spinor_rank = 1;
    m.even = false;
    m.ball_volume = 2.0;
    m.shells.push_back({0, 1.0});
    for (std::int64_t n = 1; n <= N; ++n) m.shells.push_back({n * n, 2.0});
    return m;
}

DiagonalModel torus_model(int p, TorusKind kind, int R) {
    if (p < 1 || p > 4) throw PreconditionError("torus_model supports p in {1, 2, 3, 4}");
    if (R < 1) throw PreconditionError("torus_model needs R >= 1");
    DiagonalModel m;
    m.kind = kind == TorusKind::Laplacian ? "torus-laplacian" : "torus-dirac";
    m.p = p;
    m.cutoff = R;
    m.spinor_rank = kind == TorusKind::Dirac ? (1 << (p / 2)) : 1;
    m.even = kind == TorusKind::Dirac && p % 2 == 0;
    m.ball_volume = unit_ball_volume(p);
    auto counts = lattice_shell_counts(p, R);
    for (std::size_t n = 0; n < counts.size(); ++n)
        if (counts[n] > 0) m.shells.push_back({static_cast<std::int64_t>(n), static_cast<double>(counts[n])});
    return m;
}

double DiagonalModel::tail_tolerance() const {
    if (kind == "circle-dirac") return 0.05;
    return std::max(0.05, 20.0 * p / cutoff);
}

WeightedSpectrum DiagonalModel::abs_spectrum(KernelPolicy policy) const {
    std::vector<Atom> at;
    at.reserve(shells.size());
    double rank = laplacian() ? 1.0 : spinor_rank;
    for (const auto& s : shells) {
        double w = s.count * rank * point_weight;
        auto n = static_cast<double>(s.norm2);
        if (laplacian()) {
            at.push_back({1.0 + n, w});
        } else if (s.norm2 == 0) {
            if (policy == KernelPolicy::Keep) at.push_back({0.0, w});
            if (policy == KernelPolicy::Bracket) at.push_back({1.0, w});
        } else {
            at.push_back({policy == KernelPolicy::Bracket ? std::sqrt(n + 1.0) : std::sqrt(n), w});
        }
    }
    PowerTail tail = laplacian() ? PowerTail{ball_volume * point_weight, p / 2.0}
                                 : PowerTail{ball_volume * rank * point_weight, static_cast<double>(p)};
    WeightedSpectrum out(std::move(at), tail, Orientation::Discrete, tail_tolerance());
    out.cutoff_note = kind + " p=" + std::to_string(p) + " cutoff=" + std::to_string(cutoff) + " shells=" +
                      std::to_string(shells.size()) + " kernel=" + (laplacian() ? "none" : to_string(policy));
    return out;
}

WeightedSpectrum DiagonalModel::inverse_power(double s, KernelPolicy policy) const {
    if (!laplacian() && policy == KernelPolicy::Keep)
        throw PreconditionError("negative power of D with kernel: choose drop or bracket");
    return abs_spectrum(policy).powered(-s);
}

std::vector<double> DiagonalModel::signed_eigenvalues() const {
    if (kind != "circle-dirac") throw PreconditionError("signed eigenvalues are only listed for the circle");
    std::vector<double> e;
    for (int n = -cutoff; n <= cutoff; ++n) e.push_back(n);
    return e;
}

double FoliatedFamily::mass() const {
    double m = 0.0;
    for (double l : lambda) m += l;
    return m;
}

WeightedSpectrum FoliatedFamily::spectrum(const WeightedSpectrum& leaf_spectrum) const {
    return leaf_spectrum.weights_scaled(mass());
}

double FoliatedFamily::trace(std::span<const double> leaf_traces) const {
    if (leaf_traces.size() != lambda.size()) throw PreconditionError("one leaf trace per transverse weight");
    double s = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) s += lambda[j] * leaf_traces[j];
    return s;
}

FoliatedFamily foliated_family(DiagonalModel leaf, std::vector<double> lambda) {
    if (lambda.empty()) throw PreconditionError("foliated family needs transverse weights");
    for (double l : lambda)
        if (!(l > 0.0) || !std::isfinite(l)) throw PreconditionError("transverse weights must be positive and finite");
    return FoliatedFamily{std::move(leaf), std::move(lambda)};
}

WeightedSpectrum WeightedMatrixAlgebra::s_numbers(const MatrixXcd& x) const {
    if (x.rows() != n || x.cols() != n) throw PreconditionError("matrix size does not match the algebra");
    Eigen::JacobiSVD<MatrixXcd> svd(x);
    std::vector<Atom> at;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) at.push_back({svd.singularValues()(i), c});
    return WeightedSpectrum(std::move(at));
}

Doubling doubling(std::span<const double> eigenvalues) {
    Doubling d;
    d.n = static_cast<int>(eigenvalues.size());
    for (int i = 0; i < d.n; ++i)
        if (eigenvalues[static_cast<std::size_t>(i)] == 0.0) d.kernel.push_back(i);
    int N = d.dim();
    d.F1 = Eigen::MatrixXd::Zero(N, N);
    d.V = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < d.n; ++i) {
        double e = eigenvalues[static_cast<std::size_t>(i)];
        d.F1(i, i) = e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
    }
    for (std::size_t j = 0; j < d.kernel.size(); ++j) {
        int a = d.kernel[j], b = d.n + static_cast<int>(j);
        d.V(a, b) = 1.0;
        d.V(b, a) = 1.0;
    }
    d.F = d.F1 + d.V;
    return d;
}

MatrixXcd Doubling::embed(const MatrixXcd& a) const {
    if (a.rows() != n || a.cols() != n) throw PreconditionError("operator size does not match H");
    MatrixXcd out = MatrixXcd::Zero(dim(), dim());
    out.topLeftCorner(n, n) = a;
    return out;
}

double symbol_min_abs(const TrigPolynomial& u, int samples) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples; ++j) {
        double th = 2.0 * std::numbers::pi * j / samples;
        m = std::min(m, std::abs(u(std::span<const double>(&th, 1))));
    }
    return m;
}

namespace {

void require_circle(const TrigPolynomial& u) {
    if (u.dimension() != 1) throw PreconditionError("expected a symbol on the circle");
}

void require_invertible(const TrigPolynomial& u) {
    require_circle(u);
    if (u.coefficients().empty() || symbol_min_abs(u) <= 1e-8 * u.sup_bound())
        throw PreconditionError("symbol is not invertible on the circle");
}

}  // namespace

int winding_number(const TrigPolynomial& u, int samples) {
    require_invertible(u);
    double total = 0.0;
    double th0 = 0.0;
    cd prev = u(std::span<const double>(&th0, 1));
    for (int j = 1; j <= samples; ++j) {
        double th = 2.0 * std::numbers::pi * j / samples;
        cd cur = u(std::span<const double>(&th, 1));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

TrigPolynomial inverse_symbol(const TrigPolynomial& u, double tol) {
    require_invertible(u);
    if (u.coefficients().size() == 1) {
        const auto& [m, a] = *u.coefficients().begin();
        return TrigPolynomial::monomial({-m[0]}, 1.0 / a);
    }
    const int S = 4096;
    std::vector<cd> inv(S), coef_raw;
    for (int j = 0; j < S; ++j) {
        double th = 2.0 * std::numbers::pi * j / S;
        inv[static_cast<std::size_t>(j)] = 1.0 / u(std::span<const double>(&th, 1));
    }
    Eigen::FFT<double> fft;
    fft.fwd(coef_raw, inv);
    std::vector<cd> coef(S);
    double biggest = 0.0;
    for (int n = -S / 2; n < S / 2; ++n) {
        cd s = coef_raw[static_cast<std::size_t>((n + S) % S)] / static_cast<double>(S);
        coef[static_cast<std::size_t>(n + S / 2)] = s;
        biggest = std::max(biggest, std::abs(s));
    }
    // Edge coefficients measure aliasing: the symbol's inverse must decay within the window.
    if (std::abs(coef.front()) > 1e-12 * biggest)
        throw PreconditionError("inverse symbol decays too slowly for the sampling window");
    double floor = tol * biggest;
    TrigPolynomial out(1);
    for (int n = -S / 2; n < S / 2; ++n) {
        cd s = coef[static_cast<std::size_t>(n + S / 2)];
        if (std::abs(s) > floor) out.add({n}, s);
    }
    return out;
}

MatrixXcd multiplication_block(const TrigPolynomial& u, int r0, int r1, int c0, int c1) {
    require_circle(u);
    MatrixXcd M = MatrixXcd::Zero(r1 - r0 + 1, c1 - c0 + 1);
    for (const auto& [m, a] : u.coefficients())
        for (int k = c0; k <= c1; ++k) {
            int n = k + m[0];
            if (n >= r0 && n <= r1) M(n - r0, k - c0) = a;
        }
    return M;
}

MatrixXcd multiplication_matrix(const TrigPolynomial& u, int lo, int hi) {
    return multiplication_block(u, lo, hi, lo, hi);
}

namespace {

int max_frequency(const TrigPolynomial& u) {
    int m = 0;
    for (const auto& [k, a] : u.coefficients()) m = std::max(m, k[0]);
    return m;
}

}  // namespace

MatrixXcd ToeplitzModel::compressed(int last_mode) const { return multiplication_matrix(symbol, 0, last_mode); }

MatrixXcd ToeplitzModel::parametrix(int last_mode) const {
    return multiplication_matrix(inverse_symbol(symbol), 0, last_mode);
}

MatrixXcd ToeplitzModel::kernel_section() const {
    return multiplication_block(symbol, 0, cutoff + max_frequency(symbol), 0, cutoff);
}

MatrixXcd ToeplitzModel::cokernel_section() const {
    auto adj = symbol.conj();
    return multiplication_block(adj, 0, cutoff + max_frequency(adj), 0, cutoff);
}

ToeplitzModel toeplitz(TrigPolynomial u, int cutoff, double trace_scale) {
    require_circle(u);
    if (cutoff < 1) throw PreconditionError("Toeplitz cutoff must be >= 1");
    if (!(trace_scale > 0.0)) throw PreconditionError("trace scale must be positive");
    return ToeplitzModel{std::move(u), cutoff, trace_scale};
}

int commutator_rank(const TrigPolynomial& u, int L) {
    MatrixXcd U = multiplication_matrix(u, -L, L);
    MatrixXcd C = MatrixXcd::Zero(U.rows(), U.cols());
    for (int i = -L; i <= L; ++i)
        for (int j = -L; j <= L; ++j) {
            double fi = i >= 0 ? 1.0 : -1.0, fj = j >= 0 ? 1.0 : -1.0;
            C(i + L, j + L) = (fi - fj) * U(i + L, j + L);
        }
    Eigen::JacobiSVD<MatrixXcd> svd(C);
    const auto& s = svd.singularValues();
    double thr = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr) ++r;
    return r;
}

std::vector<MatrixXcd> clifford_generators(int p) {
    using namespace std::complex_literals;
    MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2), id = MatrixXcd::Identity(2, 2);
    s1 << 0.0, 1.0, 1.0, 0.0;
    s2 << 0.0, -1i, 1i, 0.0;
    s3 << 1.0, 0.0, 0.0, -1.0;
    auto kron = [](const MatrixXcd& a, const MatrixXcd& b) {
        MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return k;
    };
    switch (p) {
        case 1: return {MatrixXcd::Identity(1, 1)};
        case 2: return {s1, s2};
        case 3: return {s1, s2, s3};
        case 4: return {kron(s2, s1), kron(s2, s2), kron(s2, s3), kron(s1, id)};
        default: throw PreconditionError("Clifford generators are provided for p in {1, 2, 3, 4}");
    }
}

MatrixXcd chirality(int p) {
    if (p % 2 != 0) throw PreconditionError("chirality exists only for even p");
    auto g = clifford_generators(p);
    MatrixXcd c = MatrixXcd::Identity(g[0].rows(), g[0].cols());
    for (const auto& x : g) c = c * x;
    return std::pow(cd{0.0, -1.0}, p / 2) * c;
}

LatticeSpace::LatticeSpace(int p, int R, int spinor_rank) : p_(p), R_(R), s_(spinor_rank) {
    if (p < 1 || p > 4 || R < 1 || spinor_rank < 1) throw PreconditionError("bad lattice space parameters");
    std::size_t side = static_cast<std::size_t>(2 * R + 1);
    std::size_t total = 1;
    for (int j = 0; j < p; ++j) total *= side;
    box_.assign(total, -1);
    MultiIndex k(static_cast<std::size_t>(p), -R);
    const std::int64_t R2 = static_cast<std::int64_t>(R) * R;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        std::int64_t n2 = 0;
        for (int j = p - 1; j >= 0; --j) {
            k[static_cast<std::size_t>(j)] = static_cast<int>(rem % side) - R;
            rem /= side;
            n2 += static_cast<std::int64_t>(k[static_cast<std::size_t>(j)]) * k[static_cast<std::size_t>(j)];
        }
        if (n2 <= R2) {
            box_[flat] = static_cast<Eigen::Index>(pts_.size());
            pts_.push_back(k);
        }
    }
}

Eigen::Index LatticeSpace::box_index(const MultiIndex& k) const {
    std::size_t side = static_cast<std::size_t>(2 * R_ + 1), flat = 0;
    for (int x : k) {
        if (x < -R_ || x > R_) return -1;
        flat = flat * side + static_cast<std::size_t>(x + R_);
    }
    return box_[flat];
}

std::optional<Eigen::Index> LatticeSpace::index_of(const MultiIndex& k) const {
    auto i = box_index(k);
    if (i < 0) return std::nullopt;
    return i;
}

double LatticeSpace::norm2(Eigen::Index point) const {
    double n = 0.0;
    for (int x : pts_[static_cast<std::size_t>(point)]) n += static_cast<double>(x) * x;
    return n;
}

SparseXcd LatticeSpace::multiplication(const TrigPolynomial& a) const {
    if (a.dimension() != p_) throw PreconditionError("symbol dimension does not match the lattice");
    std::vector<Eigen::Triplet<cd>> trip;
    MultiIndex target(static_cast<std::size_t>(p_));
    for (Eigen::Index col = 0; col < points(); ++col) {
        const auto& k = pts_[static_cast<std::size_t>(col)];
        for (const auto& [m, c] : a.coefficients()) {
            for (std::size_t j = 0; j < k.size(); ++j) target[j] = k[j] + m[j];
            auto row = box_index(target);
            if (row < 0) continue;
            for (int s = 0; s < s_; ++s) trip.emplace_back(row * s_ + s, col * s_ + s, c);
        }
    }
    SparseXcd M(dim(), dim());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

namespace {

SparseXcd block_diagonal(const LatticeSpace& L, const std::function<MatrixXcd(Eigen::Index)>& block) {
    std::vector<Eigen::Triplet<cd>> trip;
    int s = L.spinor_rank();
    for (Eigen::Index i = 0; i < L.points(); ++i) {
        MatrixXcd b = block(i);
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c)
                if (b(r, c) != cd{0.0, 0.0}) trip.emplace_back(i * s + r, i * s + c, b(r, c));
    }
    SparseXcd M(L.dim(), L.dim());
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

}  // namespace

SparseXcd LatticeSpace::dirac() const {
    auto g = clifford_generators(p_);
    if (static_cast<int>(g[0].rows()) != s_) throw PreconditionError("spinor rank does not match the Clifford module");
    return block_diagonal(*this, [&](Eigen::Index i) {
        MatrixXcd b = MatrixXcd::Zero(s_, s_);
        const auto& k = pts_[static_cast<std::size_t>(i)];
        for (int j = 0; j < p_; ++j) b += static_cast<double>(k[static_cast<std::size_t>(j)]) * g[static_cast<std::size_t>(j)];
        return b;
    });
}

SparseXcd LatticeSpace::symmetry() const {
    auto g = clifford_generators(p_);
    if (static_cast<int>(g[0].rows()) != s_) throw PreconditionError("spinor rank does not match the Clifford module");
    return block_diagonal(*this, [&](Eigen::Index i) {
        double n = std::sqrt(norm2(i));
        if (n == 0.0) return MatrixXcd(g[0]);
        MatrixXcd b = MatrixXcd::Zero(s_, s_);
        const auto& k = pts_[static_cast<std::size_t>(i)];
        for (int j = 0; j < p_; ++j) b += (k[static_cast<std::size_t>(j)] / n) * g[static_cast<std::size_t>(j)];
        return b;
    });
}

SparseXcd LatticeSpace::grading() const {
    MatrixXcd chi = chirality(p_);
    if (chi.rows() != s_) throw PreconditionError("spinor rank does not match the Clifford module");
    return block_diagonal(*this, [&](Eigen::Index) { return chi; });
}

SparseXcd LatticeSpace::diagonal(const std::function<double(double)>& of_norm2) const {
    return block_diagonal(*this, [&](Eigen::Index i) {
        return MatrixXcd(MatrixXcd::Identity(s_, s_) * of_norm2(norm2(i)));
    });
}

SparseXcd LatticeSpace::phase(double alpha) const {
    return block_diagonal(*this, [&](Eigen::Index i) {
        double n = std::sqrt(norm2(i));
        cd z = n == 0.0 ? cd{1.0, 0.0} : std::polar(1.0, alpha * std::log(n));
        return MatrixXcd(MatrixXcd::Identity(s_, s_) * z);
    });
}

cd LatticeSpace::interior_trace(const SparseXcd& x, double r) const {
    cd sum{0.0, 0.0};
    double r2 = r * r;
    for (Eigen::Index i = 0; i < points(); ++i) {
        if (norm2(i) > r2) continue;
        for (int s = 0; s < s_; ++s) sum += x.coeff(i * s_ + s, i * s_ + s);
    }
    return sum;
}

std::vector<cd> LatticeSpace::point_diagonal(const SparseXcd& x) const {
    std::vector<cd> d(static_cast<std::size_t>(points()), cd{0.0, 0.0});
    for (Eigen::Index i = 0; i < points(); ++i)
        for (int s = 0; s < s_; ++s) d[static_cast<std::size_t>(i)] += x.coeff(i * s_ + s, i * s_ + s);
    return d;
}

}  // namespace ncg

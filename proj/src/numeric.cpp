#include "ncg/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ncg/errors.hpp"

namespace ncg {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    auto c = poly_fit(x, y, 1);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(y[i] - c[0] - c[1] * x[i]));
    return {c[1], c[0], r};
}

std::vector<double> poly_fit(std::span<const double> x, std::span<const double> y, int degree,
                             double* sensitivity) {
    if (x.size() != y.size()) throw std::invalid_argument("poly_fit: size mismatch");
    auto n = static_cast<Eigen::Index>(x.size());
    if (n <= degree) throw PreconditionError("poly_fit: not enough samples");
    // Center and scale for conditioning, then map back.
    double lo = *std::min_element(x.begin(), x.end());
    double hi = *std::max_element(x.begin(), x.end());
    double mid = 0.5 * (lo + hi);
    double half = hi > lo ? 0.5 * (hi - lo) : 1.0;
    Eigen::MatrixXd A(n, degree + 1);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = (x[static_cast<std::size_t>(i)] - mid) / half;
        double v = 1.0;
        for (int j = 0; j <= degree; ++j) {
            A(i, j) = v;
            v *= s;
        }
        b(i) = y[static_cast<std::size_t>(i)];
    }
    auto qr = A.colPivHouseholderQr();
    Eigen::VectorXd cs = qr.solve(b);
    // Row of the pseudo-inverse that yields p(0) in original coordinates.
    Eigen::VectorXd e0(degree + 1);
    {
        double s0 = -mid / half, v = 1.0;
        for (int j = 0; j <= degree; ++j) {
            e0(j) = v;
            v *= s0;
        }
    }
    if (sensitivity) {
        Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(n, n));
        *sensitivity = (e0.transpose() * pinv).cwiseAbs().sum();
    }
    // Expand p((x - mid)/half) into monomials of x.
    std::vector<double> out(static_cast<std::size_t>(degree) + 1, 0.0);
    for (int j = 0; j <= degree; ++j) {
        // cs_j * ((x - mid)/half)^j
        double scale = cs(j) / std::pow(half, j);
        double binom = 1.0;
        for (int k = 0; k <= j; ++k) {
            out[static_cast<std::size_t>(k)] += scale * binom * std::pow(-mid, j - k);
            binom = binom * (j - k) / (k + 1);
        }
    }
    return out;
}

double poly_eval(std::span<const double> coeffs, double x) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw PreconditionError("log_grid: need 0 < lo < hi");
    double span = std::log10(hi / lo);
    auto n = static_cast<std::size_t>(std::ceil(span * per_decade - 1e-9));
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = lo * std::pow(10.0, span * static_cast<double>(i) / static_cast<double>(n));
    g.front() = lo;
    g.back() = hi;
    return g;
}

double neville_at_zero(std::span<const double> h, std::span<const double> g, double* error) {
    std::size_t n = h.size();
    if (n == 0 || g.size() != n) throw std::invalid_argument("neville_at_zero: bad input");
    std::vector<double> p(g.begin(), g.end());
    double prev = p[n - 1];
    for (std::size_t m = 1; m < n; ++m) {
        prev = p[n - 1];
        for (std::size_t i = n - 1; i >= m; --i) {
            double hi = h[i], hj = h[i - m];
            p[i] = (hj * p[i] - hi * p[i - 1]) / (hj - hi);
            if (i == m) break;
        }
    }
    if (error) *error = n > 1 ? std::abs(p[n - 1] - prev) : 0.0;
    return p[n - 1];
}

std::string format_number(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

}  // namespace ncg

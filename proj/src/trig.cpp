#include "ncg/trig.hpp"

#include <algorithm>
#include <cmath>

#include "ncg/errors.hpp"

namespace ncg {

TrigPolynomial TrigPolynomial::constant(int p, cd a) {
    TrigPolynomial t(p);
    t.add(MultiIndex(static_cast<std::size_t>(p), 0), a);
    return t;
}

TrigPolynomial TrigPolynomial::monomial(const MultiIndex& m, cd a) {
    TrigPolynomial t(static_cast<int>(m.size()));
    t.add(m, a);
    return t;
}

cd TrigPolynomial::coefficient(const MultiIndex& m) const {
    auto it = c_.find(m);
    return it == c_.end() ? cd{0.0, 0.0} : it->second;
}

void TrigPolynomial::add(const MultiIndex& m, cd a) {
    if (static_cast<int>(m.size()) != p_) throw PreconditionError("multi-index has the wrong dimension");
    if (a == cd{0.0, 0.0}) return;
    auto& slot = c_[m];
    slot += a;
    if (slot == cd{0.0, 0.0}) c_.erase(m);
}

cd TrigPolynomial::operator()(std::span<const double> x) const {
    cd sum{0.0, 0.0};
    for (const auto& [m, a] : c_) {
        double phase = 0.0;
        for (int j = 0; j < p_; ++j) phase += m[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        sum += a * std::polar(1.0, phase);
    }
    return sum;
}

TrigPolynomial TrigPolynomial::derivative(int j) const {
    TrigPolynomial d(p_);
    for (const auto& [m, a] : c_) d.add(m, a * cd{0.0, static_cast<double>(m[static_cast<std::size_t>(j)])});
    return d;
}

TrigPolynomial TrigPolynomial::conj() const {
    TrigPolynomial d(p_);
    for (const auto& [m, a] : c_) {
        MultiIndex n = m;
        for (auto& x : n) x = -x;
        d.add(n, std::conj(a));
    }
    return d;
}

cd TrigPolynomial::mean() const { return coefficient(MultiIndex(static_cast<std::size_t>(p_), 0)); }

int TrigPolynomial::degree() const {
    int d = 0;
    for (const auto& [m, a] : c_)
        for (int x : m) d = std::max(d, std::abs(x));
    return d;
}

bool TrigPolynomial::is_constant() const {
    for (const auto& [m, a] : c_)
        for (int x : m)
            if (x != 0) return false;
    return true;
}

double TrigPolynomial::sup_bound() const {
    double s = 0.0;
    for (const auto& [m, a] : c_) s += std::abs(a);
    return s;
}

double TrigPolynomial::gradient_bound() const {
    double s = 0.0;
    for (const auto& [m, a] : c_) {
        double n2 = 0.0;
        for (int x : m) n2 += static_cast<double>(x) * x;
        s += std::sqrt(n2) * std::abs(a);
    }
    return s;
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& o) const {
    TrigPolynomial r = *this;
    for (const auto& [m, a] : o.c_) r.add(m, a);
    return r;
}

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& o) const {
    if (o.p_ != p_) throw PreconditionError("product of trigonometric polynomials in different dimensions");
    TrigPolynomial r(p_);
    for (const auto& [m, a] : c_)
        for (const auto& [n, b] : o.c_) {
            MultiIndex s(m.size());
            for (std::size_t j = 0; j < m.size(); ++j) s[j] = m[j] + n[j];
            r.add(s, a * b);
        }
    return r;
}

TrigPolynomial TrigPolynomial::operator*(cd s) const {
    TrigPolynomial r(p_);
    for (const auto& [m, a] : c_) r.add(m, a * s);
    return r;
}

}  // namespace ncg

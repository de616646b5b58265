#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

namespace ncg {

using cd = std::complex<double>;
using MultiIndex = std::vector<int>;

// Σ_m a_m e^{i m·x} on the p-torus, finitely supported.
class TrigPolynomial {
public:
    explicit TrigPolynomial(int p = 1) : p_(p) {}

    static TrigPolynomial constant(int p, cd a);
    static TrigPolynomial monomial(const MultiIndex& m, cd a = 1.0);

    int dimension() const { return p_; }
    const std::map<MultiIndex, cd>& coefficients() const { return c_; }
    cd coefficient(const MultiIndex& m) const;
    void add(const MultiIndex& m, cd a);

    cd operator()(std::span<const double> x) const;
    TrigPolynomial derivative(int j) const;  // ∂/∂x_j
    TrigPolynomial conj() const;             // pointwise complex conjugate
    cd mean() const;
    int degree() const;                      // max |m_j|
    bool is_constant() const;
    double sup_bound() const;                // Σ |a_m|
    double gradient_bound() const;           // Σ |m|·|a_m|

    TrigPolynomial operator+(const TrigPolynomial& o) const;
    TrigPolynomial operator*(const TrigPolynomial& o) const;
    TrigPolynomial operator*(cd s) const;

private:
    int p_;
    std::map<MultiIndex, cd> c_;
};

}  // namespace ncg

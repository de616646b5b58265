#pragma once

#include <span>
#include <string>
#include <vector>

namespace ncg {

struct LinearFit {
    double slope;
    double intercept;
    double max_residual;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Least squares in the monomial basis {1, x, …, x^degree}. Returns the
// coefficients and, via `sensitivity`, Σ|∂c₀/∂yᵢ| (the worst-case gain from
// sample perturbations to the intercept).
std::vector<double> poly_fit(std::span<const double> x, std::span<const double> y, int degree,
                             double* sensitivity = nullptr);
double poly_eval(std::span<const double> coeffs, double x);

// Log-spaced points from lo to hi inclusive, `per_decade` per factor of ten.
std::vector<double> log_grid(double lo, double hi, int per_decade);

// Neville extrapolation of (h_j, g_j) to h = 0. `error` receives the gap
// between the last two diagonal entries.
double neville_at_zero(std::span<const double> h, std::span<const double> g, double* error = nullptr);

// Shortest round-trip decimal form.
std::string format_number(double x);

}  // namespace ncg

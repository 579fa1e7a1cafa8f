#pragma once

// Test-only oracles, independent of the library's eigensolver path:
// Durand-Kerner root finding for small polynomials and Faddeev-LeVerrier
// characteristic-polynomial coefficients.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

/// All roots of c_0 + c_1 x + ... + c_n x^n by Durand-Kerner iteration.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<Complex> r(n);
    for (int i = 0; i < n; ++i) r[i] = std::pow(Complex(0.4, 0.9), i);
    auto eval = [&coeffs](Complex x) {
        Complex v = 0.0;
        for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
            v = v * x + coeffs[static_cast<size_t>(i)];
        return v;
    };
    for (int it = 0; it < 500; ++it) {
        double moved = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex denom = coeffs.back();
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= r[i] - r[j];
            Complex delta = eval(r[i]) / denom;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

/// Characteristic polynomial coefficients of a complex matrix, constant term
/// first, by the Faddeev-LeVerrier recursion. p(x) = det(xI - m).
inline std::vector<Complex> char_poly(const Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.rows();
    std::vector<Complex> c(static_cast<size_t>(n) + 1);
    c[static_cast<size_t>(n)] = 1.0;
    Eigen::MatrixXcd mk = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        mk = m * mk + c[static_cast<size_t>(n - k + 1)] * Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd prod = m * mk;
        c[static_cast<size_t>(n - k)] = -prod.trace() / static_cast<double>(k);
    }
    return c;
}

} // namespace oracle

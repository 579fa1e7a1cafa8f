#pragma once

// Continuous q-armed star graph with complex Robin conditions at the outer
// tips and a Kirchhoff condition at the shared center. The arm-j solution of
// -psi'' = k^2 psi obeying the tip condition psi'(0) = i*alpha*e^{ij*phi}*psi(0)
// is psi_j(x) = a_j * (cos kx + i*alpha*e^{ij*phi} * sin(kx)/k), so matching at
// the center reduces the bound-state problem to a q x q linear system in the
// amplitudes a_j. All entries are built from sin(kL)/k, entire in k, so the
// secular determinant has no poles and is safe to integrate along contours.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "qstar/errors.hpp"
#include "qstar/linalg.hpp"

namespace qstar {

struct StarGraphSpec {
    int q = 6;           // number of arms, >= 2
    double length = 1.0; // arm length L
    double alpha = 0.0;  // tip coupling, >= 0

    StarGraphSpec() = default;
    StarGraphSpec(int q_, double alpha_, double length_ = 1.0)
        : q(q_), length(length_), alpha(alpha_) {
        if (q < 2) throw std::invalid_argument("StarGraphSpec: q must be >= 2");
        if (length <= 0) throw std::invalid_argument("StarGraphSpec: L must be positive");
        if (alpha < 0) throw std::invalid_argument("StarGraphSpec: alpha must be >= 0");
    }

    double phase_step() const { return 2.0 * std::numbers::pi / q; }

    /// Tip phase factor i*alpha*e^{ij*phi} of arm j.
    Complex tip_phase(int j) const {
        return Complex(0.0, alpha) * std::polar(1.0, j * phase_step());
    }
};

namespace stargraph {

/// sin(z)/z continued through z = 0.
inline Complex sinc(Complex z) {
    if (std::abs(z) < 1e-8) {
        Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

/// Arm value at the center: f_j(k) = psi_j(L)/a_j = cos kL + i*alpha*e^{ij*phi} sin(kL)/k.
inline Complex arm_value(const StarGraphSpec& spec, int j, Complex k) {
    Complex kl = k * spec.length;
    return std::cos(kl) + spec.tip_phase(j) * spec.length * sinc(kl);
}

/// Arm derivative at the center: g_j(k) = psi_j'(L)/a_j = -k sin kL + i*alpha*e^{ij*phi} cos kL.
inline Complex arm_derivative(const StarGraphSpec& spec, int j, Complex k) {
    Complex kl = k * spec.length;
    return -k * std::sin(kl) + spec.tip_phase(j) * std::cos(kl);
}

/// q x q matching matrix M(k) on (a_0,...,a_{q-1}): rows 0..q-2 are the
/// continuity conditions f_j a_j - f_0 a_0 = 0, the last row is Kirchhoff
/// sum_j g_j a_j = 0. Bound states are exactly det M(k) = 0.
inline Matrix secular_matrix(const StarGraphSpec& spec, Complex k) {
    if (k == Complex(0.0, 0.0))
        throw std::domain_error("secular_matrix: k=0 is the constant-mode special case "
                                "(exists only at alpha=0); handle it separately");
    Matrix m = Matrix::Zero(spec.q, spec.q);
    const Complex f0 = arm_value(spec, 0, k);
    for (int j = 1; j < spec.q; ++j) {
        m(j - 1, j) = arm_value(spec, j, k);
        m(j - 1, 0) = -f0;
    }
    for (int j = 0; j < spec.q; ++j)
        m(spec.q - 1, j) = arm_derivative(spec, j, k);
    return m;
}

inline Complex secular_determinant(const StarGraphSpec& spec, Complex k) {
    return linalg::lu_determinant(secular_matrix(spec, k));
}

/// Reduced scalar secular function F(k) = sum_j g_j(k)/f_j(k). Shares its
/// zero set with det M(k) wherever no f_j vanishes; returns nullopt (pole
/// flag) when some |f_j| drops below the guard and callers must fall back to
/// the determinant form.
inline std::optional<Complex> secular_scalar(const StarGraphSpec& spec, Complex k) {
    if (k == Complex(0.0, 0.0))
        throw std::domain_error("secular_scalar: k=0 excluded; see secular_matrix");
    const double guard = 1e-8 * (1.0 + std::abs(k) * spec.length);
    Complex sum = 0.0;
    for (int j = 0; j < spec.q; ++j) {
        Complex f = arm_value(spec, j, k);
        if (std::abs(f) < guard) return std::nullopt;
        sum += arm_derivative(spec, j, k) / f;
    }
    return sum;
}

struct SecularEvaluation {
    Complex k;
    Complex det_value{0.0};
    std::optional<Complex> scalar_value; // absent at poles
    Complex factor_tan{0.0};             // tan kL
    Complex factor_ratio{0.0};           // (k^6 - a^6 tan^4 kL)/(k^6 + a^6 tan^6 kL), q=6 only
    bool tan_pole = false;

    Complex product() const { return factor_tan * factor_ratio; }
};

/// The q=6 secular equation in its displayed two-factor form,
///   (k^6 - alpha^6 tan^4 kL)/(k^6 + alpha^6 tan^6 kL) * tan kL = 0.
/// The reduced sum satisfies F(k) = -6k * product for q=6 (verified against
/// the direct sum in the tests; the prefactor does not move any zero).
inline SecularEvaluation closed_form_q6(double alpha, Complex k, double L = 1.0) {
    SecularEvaluation ev;
    ev.k = k;
    Complex kl = k * L;
    Complex c = std::cos(kl);
    if (std::abs(c) < 1e-12 * (1.0 + std::abs(std::sin(kl)))) {
        ev.tan_pole = true;
        return ev;
    }
    Complex t = std::tan(kl);
    Complex k6 = std::pow(k, 6);
    Complex a6t4 = std::pow(alpha, 6) * std::pow(t, 4);
    ev.factor_tan = t;
    ev.factor_ratio = (k6 - a6t4) / (k6 + a6t4 * t * t);
    ev.scalar_value = -6.0 * k * ev.product();
    return ev;
}

/// The q=6 closed-form product with numerator and denominator multiplied by
/// cos^6 kL: sin*cos*(k^6 cos^4 - a^6 sin^4)/(k^6 cos^6 + a^6 sin^6). Equals
/// factor_tan * factor_ratio away from tan poles and continues it through
/// them (for alpha > 0 the product vanishes there; those are the pinned
/// roots at odd multiples of pi/2).
inline Complex closed_form_q6_product(double alpha, Complex k, double L = 1.0) {
    Complex kl = k * L;
    Complex c = std::cos(kl), s = std::sin(kl);
    Complex c2 = c * c, s2 = s * s;
    Complex k6 = std::pow(k, 6);
    double a6 = std::pow(alpha, 6);
    return s * c * (k6 * c2 * c2 - a6 * s2 * s2) / (k6 * c2 * c2 * c2 + a6 * s2 * s2 * s2);
}

/// Full evaluation at one momentum: determinant, reduced scalar, and for q=6
/// the two closed-form factors.
inline SecularEvaluation evaluate_secular(const StarGraphSpec& spec, Complex k) {
    SecularEvaluation ev;
    if (spec.q == 6) ev = closed_form_q6(spec.alpha, k, spec.length);
    ev.k = k;
    ev.det_value = secular_determinant(spec, k);
    ev.scalar_value = secular_scalar(spec, k);
    return ev;
}

struct EdgeSolution {
    std::vector<Complex> coefficients; // a_j, largest |a_j| = 1
    Complex k;
    double residual; // ||M(k) a|| / ||M(k)||
};

/// Null vector of M(k) at a secular root, normalized to max |a_j| = 1.
/// Throws NotARootError when the smallest singular value is not separated.
inline EdgeSolution edge_solution(const StarGraphSpec& spec, Complex k,
                                  double root_tol = 1e-8) {
    Matrix m = secular_matrix(spec, k);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double smax = sv(0);
    if (smin > root_tol * smax)
        throw NotARootError("edge_solution: k is not a secular root (relative "
                            "smallest singular value " + std::to_string(smin / smax) + ")",
                            smin / smax);
    Vector a = svd.matrixV().col(sv.size() - 1);
    Eigen::Index imax;
    a.cwiseAbs().maxCoeff(&imax);
    a /= a(imax); // largest component -> 1
    EdgeSolution sol;
    sol.k = k;
    sol.coefficients.assign(a.data(), a.data() + a.size());
    sol.residual = (m * a).norm() / smax;
    return sol;
}

} // namespace stargraph
} // namespace qstar

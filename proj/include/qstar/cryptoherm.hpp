#pragma once

// Discrete companion models: the 4x4 one-parameter Hamiltonian H4(lambda),
// its explicit four-component metric family M1..M4, a general solver for the
// crypto-Hermiticity condition H^dagger Theta = Theta H over Hermitian Theta,
// spectral-expansion metrics from biorthogonal left eigenvectors, and
// metric-weighted inner products.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qstar/errors.hpp"
#include "qstar/linalg.hpp"

namespace qstar {
namespace cryptoherm {

struct DiscreteHamiltonian {
    Matrix matrix;
    double lambda = 0.0;
    std::string label;

    Eigen::Index dim() const { return matrix.rows(); }
};

/// The 4x4 toy Hamiltonian: tridiagonal with diagonal 2 and off-diagonal -1,
/// except the antisymmetric coupling (2,3) = -1-lambda, (3,2) = -1+lambda.
inline DiscreteHamiltonian build_h4(double lambda) {
    Matrix h = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) h(i, i) = 2.0;
    h(0, 1) = h(1, 0) = -1.0;
    h(2, 3) = h(3, 2) = -1.0;
    h(1, 2) = -1.0 - lambda;
    h(2, 1) = -1.0 + lambda;
    return {h, lambda, "H4"};
}

/// Component M_index of the explicit metric family for H4(lambda).
inline Matrix metric_component(int index, double lambda) {
    Matrix m = Matrix::Zero(4, 4);
    const double p = 1.0 + lambda, n = 1.0 - lambda;
    switch (index) {
    case 1:
        m(0, 0) = n; m(1, 1) = n; m(2, 2) = p; m(3, 3) = p;
        break;
    case 2:
        m(0, 1) = m(1, 0) = n;
        m(1, 2) = m(2, 1) = 1.0 - lambda * lambda;
        m(2, 3) = m(3, 2) = p;
        break;
    case 3:
        m(0, 2) = m(2, 0) = 1.0;
        m(1, 3) = m(3, 1) = 1.0;
        m(1, 1) = n;
        m(2, 2) = p;
        break;
    case 4:
        m(0, 3) = m(1, 2) = m(2, 1) = m(3, 0) = 1.0;
        break;
    default:
        throw std::invalid_argument("metric_component: index must be in 1..4");
    }
    return m;
}

/// ||H^dagger Theta - Theta H||_max, the crypto-Hermiticity defect.
inline double crypto_residual(const DiscreteHamiltonian& h, const Matrix& theta) {
    if (theta.rows() != h.dim() || theta.cols() != h.dim())
        throw DimensionError("crypto_residual: Theta is " + std::to_string(theta.rows()) +
                             "x" + std::to_string(theta.cols()) + ", H is " +
                             std::to_string(h.dim()) + "x" + std::to_string(h.dim()));
    return (h.matrix.adjoint() * theta - theta * h.matrix).cwiseAbs().maxCoeff();
}

struct MetricCandidate {
    Matrix theta;
    std::optional<std::vector<double>> coefficients; // alpha_1..alpha_4 when applicable
    double residual = 0.0;          // ||H^dagger Theta - Theta H||_max
    double min_eigenvalue = 0.0;    // of the Hermitian part of Theta
    double hermiticity_defect = 0.0;
    bool is_metric = false;
    std::vector<Complex> eigenvalues;
};

namespace detail {

inline MetricCandidate classify(const DiscreteHamiltonian& h, Matrix theta) {
    MetricCandidate c;
    c.residual = crypto_residual(h, theta);
    auto pd = linalg::is_positive_definite(theta);
    c.min_eigenvalue = pd.min_eigenvalue;
    c.hermiticity_defect = pd.hermiticity_defect;
    const double h_scale = h.matrix.cwiseAbs().maxCoeff();
    const double t_scale = theta.cwiseAbs().maxCoeff();
    c.is_metric = c.residual <= 1e-12 * std::max(1e-300, h_scale * t_scale) &&
                  c.min_eigenvalue > 0.0 &&
                  c.hermiticity_defect <= 1e-12 * std::max(1e-300, t_scale);
    c.eigenvalues = linalg::eigenvalues(0.5 * (theta + theta.adjoint()));
    c.theta = std::move(theta);
    return c;
}

} // namespace detail

/// Theta = sum_j alpha_j M_j(lambda), classified against H4(lambda).
inline MetricCandidate assemble_metric(double lambda, const std::array<double, 4>& alphas) {
    Matrix theta = Matrix::Zero(4, 4);
    for (int j = 0; j < 4; ++j)
        theta += alphas[j] * metric_component(j + 1, lambda);
    MetricCandidate c = detail::classify(build_h4(lambda), std::move(theta));
    c.coefficients = std::vector<double>(alphas.begin(), alphas.end());
    return c;
}

struct MetricSpace {
    std::vector<Matrix> basis; // Hermitian, orthonormal in the vectorized sense
    int dimension = 0;
};

/// All Hermitian solutions of H^dagger Theta = Theta H. Theta is expanded
/// over the N^2-dimensional real basis of Hermitian matrices (symmetric pairs
/// and antisymmetric-imaginary pairs) and the kernel of the vectorized
/// Sylvester map is extracted by SVD.
inline MetricSpace solve_metric_space(const DiscreteHamiltonian& h,
                                      double rank_tol = 1e-9) {
    const Eigen::Index n = h.dim();
    std::vector<Matrix> herm_basis;
    herm_basis.reserve(n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            Matrix b = Matrix::Zero(n, n);
            b(i, j) = b(j, i) = 1.0;
            herm_basis.push_back(b);
            if (j > i) {
                Matrix a = Matrix::Zero(n, n);
                a(i, j) = Complex(0.0, 1.0);
                a(j, i) = Complex(0.0, -1.0);
                herm_basis.push_back(a);
            }
        }

    // Real representation of B -> H^dagger B - B H, stacking Re and Im parts.
    RealMatrix map(2 * n * n, static_cast<Eigen::Index>(herm_basis.size()));
    for (size_t c = 0; c < herm_basis.size(); ++c) {
        Matrix img = h.matrix.adjoint() * herm_basis[c] - herm_basis[c] * h.matrix;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                map(i * n + j, static_cast<Eigen::Index>(c)) = img(i, j).real();
                map(n * n + i * n + j, static_cast<Eigen::Index>(c)) = img(i, j).imag();
            }
    }

    RealMatrix kernel = linalg::real_null_space(map, rank_tol);
    MetricSpace space;
    space.dimension = static_cast<int>(kernel.cols());
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
        Matrix theta = Matrix::Zero(n, n);
        for (size_t b = 0; b < herm_basis.size(); ++b)
            theta += kernel(static_cast<Eigen::Index>(b), c) * herm_basis[b];
        space.basis.push_back(std::move(theta));
    }
    return space;
}

/// Least-squares residual of projecting theta onto the span of a metric-space
/// basis, relative to ||theta||.
inline double projection_residual(const MetricSpace& space, const Matrix& theta) {
    const Eigen::Index n = theta.rows();
    Matrix a(n * n, static_cast<Eigen::Index>(space.basis.size()));
    Vector rhs(n * n);
    for (size_t c = 0; c < space.basis.size(); ++c)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                a(i * n + j, static_cast<Eigen::Index>(c)) = space.basis[c](i, j);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            rhs(i * n + j) = theta(i, j);
    Vector coef = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    double norm = rhs.norm();
    return norm == 0.0 ? 0.0 : (a * coef - rhs).norm() / norm;
}

/// Spectral-expansion metric Theta = sum_n kappa_n |L_n><L_n| from the left
/// eigenvectors of h. Right eigenvectors are normalized to unit 2-norm, the
/// left ones biorthogonally against them (<L_m|R_n> = delta_mn), so kappa = 1
/// reproduces Theta = I in the Hermitian case.
inline MetricCandidate spectral_metric(const DiscreteHamiltonian& h,
                                       const std::vector<double>& kappas) {
    const Eigen::Index n = h.dim();
    if (static_cast<Eigen::Index>(kappas.size()) != n)
        throw DimensionError("spectral_metric: need one kappa per eigenvalue");
    for (double kp : kappas)
        if (!(kp > 0.0))
            throw SpectralPreconditionError("spectral_metric: kappa weights must be positive");

    Eigen::ComplexEigenSolver<Matrix> solver(h.matrix, true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectral_metric: eigensolver failed");
    const double h_norm = h.matrix.cwiseAbs().maxCoeff();
    Vector ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(ev(i).imag()) > 1e-9 * std::max(1.0, h_norm))
            throw SpectralPreconditionError("spectral_metric: spectrum is not real");

    // Sort by real part; demand simple spectrum.
    std::vector<int> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&ev](int a, int b) { return ev(a).real() < ev(b).real(); });
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (ev(order[i + 1]).real() - ev(order[i]).real() < 1e-9 * std::max(1.0, h_norm))
            throw SpectralPreconditionError("spectral_metric: spectrum is degenerate");

    Matrix right(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        right.col(i) = solver.eigenvectors().col(order[i]).normalized();

    // Left eigenvectors: rows of right^{-1} conjugated, i.e. <L_m| R_n = delta.
    Matrix left_rows = right.inverse();
    Matrix theta = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector ln = left_rows.row(i).adjoint(); // |L_n>
        theta += kappas[static_cast<size_t>(i)] * (ln * ln.adjoint());
    }
    return detail::classify(h, std::move(theta));
}

/// phi^dagger Theta psi.
inline Complex metric_inner_product(const Matrix& theta, const Vector& phi,
                                    const Vector& psi) {
    if (phi.size() != theta.rows() || psi.size() != theta.cols())
        throw DimensionError("metric_inner_product: dimension mismatch");
    return (phi.adjoint() * theta * psi)(0, 0);
}

struct SpectrumReality {
    bool real = false;
    std::vector<Complex> eigenvalues;
};

/// Classifies the spectrum of h as real or containing complex pairs.
inline SpectrumReality spectrum_reality(const DiscreteHamiltonian& h,
                                        double tol = 1e-12) {
    SpectrumReality r;
    r.eigenvalues = linalg::eigenvalues(h.matrix);
    const double scale = std::max(1e-300, h.matrix.cwiseAbs().maxCoeff());
    r.real = true;
    for (Complex e : r.eigenvalues)
        if (std::abs(e.imag()) > tol * scale) r.real = false;
    return r;
}

} // namespace cryptoherm
} // namespace qstar

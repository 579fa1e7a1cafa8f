#pragma once

// Dense kernel shared by every other header: determinants, small-matrix
// spectra, positive-definiteness tests and real null spaces. Backed by Eigen;
// intended sizes are small (N <= ~12 for the discrete models, larger only in
// the sparse finite-difference oracle which does not pass through here).

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qstar/errors.hpp"

namespace qstar {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace linalg {

inline void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols())
        throw DimensionError(std::string(who) + ": matrix is " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             ", expected square");
}

/// det(m) via pivoted LU; exact for triangular inputs up to rounding.
inline Complex lu_determinant(const Matrix& m) {
    require_square(m, "lu_determinant");
    return Eigen::PartialPivLU<Matrix>(m).determinant();
}

/// All eigenvalues with algebraic multiplicity, sorted by (Re, Im) ascending.
inline std::vector<Complex> eigenvalues(const Matrix& m) {
    require_square(m, "eigenvalues");
    Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: QR iteration did not converge for " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " matrix, residual unknown (Eigen info=" +
                             std::to_string(int(solver.info())) + ")");
    std::vector<Complex> ev(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + m.rows());
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

struct PositivityReport {
    bool positive = false;
    double min_eigenvalue = 0.0;    // of the Hermitian part
    double hermiticity_defect = 0.0; // max-norm of m - m^dagger
};

/// Strict positive definiteness: Hermitian within herm_tol and all eigenvalues
/// of the Hermitian part above eig_tol.
inline PositivityReport is_positive_definite(const Matrix& m,
                                             double herm_tol = 1e-10,
                                             double eig_tol = 0.0) {
    require_square(m, "is_positive_definite");
    PositivityReport rep;
    rep.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    Matrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("is_positive_definite: eigenvalue iteration failed for " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.rows()) +
                             " matrix");
    rep.min_eigenvalue = solver.eigenvalues().minCoeff();
    rep.positive = rep.hermiticity_defect <= herm_tol && rep.min_eigenvalue > eig_tol;
    return rep;
}

/// Orthonormal basis of {x : ||a x|| <= rank_tol * ||a|| * ||x||} for a real
/// matrix, as columns. ||a|| is the spectral norm (largest singular value).
inline RealMatrix real_null_space(const RealMatrix& a, double rank_tol = 1e-9) {
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = sv.size() > 0 ? sv(0) : 0.0;
    const Eigen::Index n = a.cols();
    if (scale == 0.0)
        return RealMatrix::Identity(n, n); // zero map: kernel is everything
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rank_tol * scale) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

} // namespace linalg
} // namespace qstar

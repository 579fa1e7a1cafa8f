#pragma once

// Finite-difference cross-validation oracle for the continuous star graph.
// Each arm carries n points at x = 0, h, ..., (n-1)h plus one shared center
// point at x = L (h = L/n). Interior rows are the (-1, 2, -1)/h^2 stencil and
// are eigenvalue rows; the q tip rows and the single center Kirchhoff row are
// second-order one-sided constraint rows, giving the pencil A psi = E B psi
// with B the interior-row indicator. Eigenvalues near a shift are extracted
// by shift-invert Arnoldi on (A - sigma B)^{-1} B with a sparse LU.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "qstar/errors.hpp"
#include "qstar/linalg.hpp"
#include "qstar/stargraph.hpp"

namespace qstar {
namespace fdstar {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct FdStarOperator {
    StarGraphSpec spec;
    int points_per_arm = 0; // n
    double step = 0.0;      // h = L/n
    SparseMatrix matrix;    // (q*n+1) x (q*n+1), constraint rows included
    std::vector<bool> eigen_row; // true for interior (eigenvalue) rows

    Eigen::Index size() const { return matrix.rows(); }
    Eigen::Index center_index() const { return matrix.rows() - 1; }

    Matrix dense() const { return Matrix(matrix); } // small-n inspection only
};

/// Assembles the discretized operator. Arm j occupies indices j*n .. j*n+n-1
/// (tip first); the shared center is the last index.
inline FdStarOperator fd_star_operator(const StarGraphSpec& spec, int n) {
    if (n < 8) throw std::invalid_argument("fd_star_operator: need n >= 8");
    const double h = spec.length / n;
    const Eigen::Index size = static_cast<Eigen::Index>(spec.q) * n + 1;
    const Eigen::Index center = size - 1;

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<size_t>(size) * 4);
    std::vector<bool> eigen_row(static_cast<size_t>(size), false);
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 1.0 / (2.0 * h);

    for (int j = 0; j < spec.q; ++j) {
        const Eigen::Index base = static_cast<Eigen::Index>(j) * n;
        // Tip row: (-3 psi0 + 4 psi1 - psi2)/(2h) = i alpha e^{ij phi} psi0.
        trip.emplace_back(base, base, Complex(-3.0 * inv_2h) - spec.tip_phase(j));
        trip.emplace_back(base, base + 1, Complex(4.0 * inv_2h));
        trip.emplace_back(base, base + 2, Complex(-inv_2h));
        // Interior rows.
        for (int i = 1; i < n; ++i) {
            const Eigen::Index r = base + i;
            eigen_row[static_cast<size_t>(r)] = true;
            trip.emplace_back(r, r - 1, Complex(-inv_h2));
            trip.emplace_back(r, r, Complex(2.0 * inv_h2));
            trip.emplace_back(r, i + 1 < n ? r + 1 : center, Complex(-inv_h2));
        }
        // Center Kirchhoff row: sum_j (3 psi_c - 4 psi_{n-1} + psi_{n-2})/(2h) = 0.
        trip.emplace_back(center, center, Complex(3.0 * inv_2h));
        trip.emplace_back(center, base + n - 1, Complex(-4.0 * inv_2h));
        trip.emplace_back(center, base + n - 2, Complex(inv_2h));
    }

    FdStarOperator op;
    op.spec = spec;
    op.points_per_arm = n;
    op.step = h;
    op.matrix.resize(size, size);
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    op.eigen_row = std::move(eigen_row);
    return op;
}

struct FdMode {
    Complex energy;           // E = k^2 of the pencil
    Complex k;                // principal square root, Re k >= 0
    double center_amplitude;  // |psi(center)| / max |psi|
    double ritz_residual;     // Arnoldi residual estimate for the inverse pair
};

/// Eigenvalues of the pencil near the shift sigma, with the centre amplitude
/// of each Ritz vector (modes with psi(center) ~ 0 belong to the degenerate
/// family the secular scalar deliberately excludes).
inline std::vector<FdMode> fd_eigenvalues(const FdStarOperator& op, double sigma,
                                          int count, int krylov_dim = 90) {
    const Eigen::Index size = op.size();
    SparseMatrix shifted = op.matrix;
    for (Eigen::Index r = 0; r < size; ++r)
        if (op.eigen_row[static_cast<size_t>(r)])
            shifted.coeffRef(r, r) -= Complex(sigma);
    shifted.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu(shifted);
    if (lu.info() != Eigen::Success)
        throw NumericalError("fd_eigenvalues: sparse LU of the shifted operator failed "
                             "(size " + std::to_string(size) + ")");

    const int m = std::min<int>(krylov_dim, static_cast<int>(size) - 2);
    Matrix v(size, m + 1);
    Matrix hess = Matrix::Zero(m + 1, m);

    // Deterministic start vector.
    std::mt19937 rng(20120604);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector v0(size);
    for (Eigen::Index i = 0; i < size; ++i) v0(i) = Complex(dist(rng), dist(rng));
    v.col(0) = v0.normalized();

    auto apply = [&](const Vector& x) -> Vector {
        Vector bx = Vector::Zero(size);
        for (Eigen::Index r = 0; r < size; ++r)
            if (op.eigen_row[static_cast<size_t>(r)]) bx(r) = x(r);
        return lu.solve(bx);
    };

    int built = m;
    for (int jcol = 0; jcol < m; ++jcol) {
        Vector w = apply(v.col(jcol));
        for (int pass = 0; pass < 2; ++pass) { // modified GS with reorthogonalization
            for (int i = 0; i <= jcol; ++i) {
                Complex c = v.col(i).adjoint() * w;
                if (pass == 0) hess(i, jcol) += c;
                else hess(i, jcol) += c;
                w -= c * v.col(i);
            }
        }
        double nw = w.norm();
        hess(jcol + 1, jcol) = nw;
        if (nw < 1e-12) {
            built = jcol + 1;
            break;
        }
        v.col(jcol + 1) = w / nw;
    }

    Matrix hm = hess.topLeftCorner(built, built);
    Eigen::ComplexEigenSolver<Matrix> es(hm, true);
    if (es.info() != Eigen::Success)
        throw NumericalError("fd_eigenvalues: Hessenberg eigensolve failed");

    const double beta = (built < m) ? 0.0 : std::abs(hess(built, built - 1));
    std::vector<FdMode> modes;
    for (Eigen::Index i = 0; i < built; ++i) {
        Complex mu = es.eigenvalues()(i); // eigenvalue of (A - sigma B)^{-1} B
        if (std::abs(mu) < 1e-10) continue; // infinite pencil eigenvalues
        double resid = beta * std::abs(es.eigenvectors()(built - 1, i));
        if (resid > 1e-8 * std::abs(mu)) continue; // unconverged Ritz pair
        FdMode mode;
        mode.energy = sigma + 1.0 / mu;
        mode.k = std::sqrt(mode.energy);
        if (mode.k.real() < 0.0) mode.k = -mode.k;
        Vector ritz = v.leftCols(built) * es.eigenvectors().col(i);
        mode.center_amplitude =
            std::abs(ritz(op.center_index())) / ritz.cwiseAbs().maxCoeff();
        mode.ritz_residual = resid / std::max(1e-300, std::abs(mu));
        modes.push_back(mode);
    }
    std::sort(modes.begin(), modes.end(), [sigma](const FdMode& a, const FdMode& b) {
        return std::abs(a.energy - sigma) < std::abs(b.energy - sigma);
    });
    if (static_cast<int>(modes.size()) > count) modes.resize(count);
    std::sort(modes.begin(), modes.end(), [](const FdMode& a, const FdMode& b) {
        if (a.energy.real() != b.energy.real())
            return a.energy.real() < b.energy.real();
        return a.energy.imag() < b.energy.imag();
    });
    return modes;
}

} // namespace fdstar
} // namespace qstar

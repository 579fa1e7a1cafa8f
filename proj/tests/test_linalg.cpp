#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qstar/linalg.hpp"
#include "oracle_poly.hpp"

using namespace qstar;
using Catch::Approx;

namespace {

Matrix random_complex(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // rejection-sample the unit disc
            double re, im;
            do {
                re = dist(rng);
                im = dist(rng);
            } while (re * re + im * im > 1.0);
            m(i, j) = Complex(re, im);
        }
    return m;
}

} // namespace

TEST_CASE("lu_determinant on simple matrices") {
    CHECK(linalg::lu_determinant(Matrix::Identity(3, 3)).real() == Approx(1.0));

    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 2.0; d(1, 1) = 3.0; d(2, 2) = 4.0;
    CHECK(linalg::lu_determinant(d).real() == Approx(24.0));

    Matrix swap = Matrix::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1.0;
    CHECK(linalg::lu_determinant(swap).real() == Approx(-1.0));

    CHECK_THROWS_AS(linalg::lu_determinant(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("eigenvalues of small matrices") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0; d(1, 1) = 5.0;
    auto ev = linalg::eigenvalues(d);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].real() == Approx(1.0));
    CHECK(ev[1].real() == Approx(5.0));

    Matrix rot = Matrix::Zero(2, 2);
    rot(0, 1) = 1.0; rot(1, 0) = -1.0;
    ev = linalg::eigenvalues(rot);
    CHECK(ev[0].imag() == Approx(-1.0).margin(1e-12));
    CHECK(ev[1].imag() == Approx(1.0).margin(1e-12));
    CHECK(std::abs(ev[0].real()) < 1e-12);
}

TEST_CASE("eigenvalues match the characteristic-polynomial oracle") {
    // The 4x4 discrete model at lambda = 0: mu^4 - 8 mu^3 + 21 mu^2 - 20 mu + 5.
    Matrix h = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) h(i, i) = 2.0;
    for (int i = 0; i < 3; ++i) h(i, i + 1) = h(i + 1, i) = -1.0;

    auto coeffs = oracle::char_poly(h);
    CHECK(std::abs(coeffs[0] - Complex(5.0)) < 1e-12);
    CHECK(std::abs(coeffs[1] - Complex(-20.0)) < 1e-12);
    CHECK(std::abs(coeffs[2] - Complex(21.0)) < 1e-12);
    CHECK(std::abs(coeffs[3] - Complex(-8.0)) < 1e-12);

    auto expected = oracle::poly_roots(coeffs);
    std::sort(expected.begin(), expected.end(),
              [](Complex a, Complex b) { return a.real() < b.real(); });
    auto got = linalg::eigenvalues(h);
    REQUIRE(got.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(got[i] - expected[i]) < 1e-10);
    CHECK(got[0].real() == Approx(0.381966).epsilon(1e-5));
    CHECK(got[3].real() == Approx(3.618034).epsilon(1e-5));
}

TEST_CASE("is_positive_definite") {
    Matrix d = Matrix::Zero(4, 4);
    d(0, 0) = d(1, 1) = 0.5; d(2, 2) = d(3, 3) = 1.5;
    CHECK(linalg::is_positive_definite(d).positive);

    Matrix ex = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) ex(i, 3 - i) = 1.0;
    auto rep = linalg::is_positive_definite(ex);
    CHECK_FALSE(rep.positive);
    CHECK(rep.min_eigenvalue == Approx(-1.0));

    CHECK_FALSE(linalg::is_positive_definite(Matrix::Zero(3, 3)).positive);
}

TEST_CASE("real_null_space basics") {
    CHECK(linalg::real_null_space(RealMatrix::Identity(2, 2)).cols() == 0);

    RealMatrix row(1, 2);
    row << 1.0, -1.0;
    RealMatrix ker = linalg::real_null_space(row);
    REQUIRE(ker.cols() == 1);
    CHECK(std::abs(ker(0, 0) - ker(1, 0)) < 1e-12);
    CHECK(ker.col(0).norm() == Approx(1.0));
}

TEST_CASE("property: det(AB) = det(A) det(B)") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix a = random_complex(5, rng), b = random_complex(5, rng);
        Complex lhs = linalg::lu_determinant(a * b);
        Complex rhs = linalg::lu_determinant(a) * linalg::lu_determinant(b);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("property: eigenvalue sum equals trace") {
    std::mt19937 rng(77);
    for (int n = 2; n <= 8; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            Matrix m = random_complex(n, rng);
            auto ev = linalg::eigenvalues(m);
            Complex sum = 0.0;
            for (Complex e : ev) sum += e;
            double scale = m.cwiseAbs().maxCoeff();
            CHECK(std::abs(sum - m.trace()) <= 1e-10 * std::max(1.0, scale));
        }
}

TEST_CASE("property: null-space vectors satisfy the residual bound") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double rank_tol = 1e-9;
    for (int trial = 0; trial < 20; ++trial) {
        // Build a rank-deficient 6x6 from 4 random rank-one terms.
        RealMatrix a = RealMatrix::Zero(6, 6);
        for (int r = 0; r < 4; ++r) {
            RealVector u(6), v(6);
            for (int i = 0; i < 6; ++i) { u(i) = dist(rng); v(i) = dist(rng); }
            a += u * v.transpose();
        }
        RealMatrix ker = linalg::real_null_space(a, rank_tol);
        CHECK(ker.cols() >= 2);
        double norm_a = a.operatorNorm();
        for (Eigen::Index c = 0; c < ker.cols(); ++c)
            CHECK((a * ker.col(c)).norm() <= 10 * rank_tol * norm_a);
        // Orthonormality of the returned basis.
        RealMatrix gram = ker.transpose() * ker;
        CHECK((gram - RealMatrix::Identity(ker.cols(), ker.cols())).cwiseAbs().maxCoeff()
              < 1e-12);
    }
}

TEST_CASE("property: positive definiteness agrees with the quadratic-form oracle") {
    std::mt19937 rng(999);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix g = random_complex(4, rng);
        Matrix m = 0.5 * (g + g.adjoint()); // random Hermitian
        bool pd = linalg::is_positive_definite(m).positive;
        bool all_positive = true;
        for (int s = 0; s < 1000; ++s) {
            Vector x(4);
            for (int i = 0; i < 4; ++i) x(i) = Complex(dist(rng), dist(rng));
            x.normalize();
            if ((x.adjoint() * m * x)(0, 0).real() <= 0.0) all_positive = false;
        }
        if (pd) CHECK(all_positive);
        if (!all_positive) CHECK_FALSE(pd);
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "qstar/roots.hpp"
#include "qstar/stargraph.hpp"
#include "qstar/validate.hpp"

using namespace qstar;
using Catch::Approx;
using std::numbers::pi;

TEST_CASE("spec construction and phase step") {
    StarGraphSpec spec(6, 0.7);
    CHECK(spec.phase_step() == Approx(pi / 3));
    CHECK(spec.length == 1.0);
    CHECK_THROWS_AS(StarGraphSpec(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(StarGraphSpec(6, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(StarGraphSpec(6, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("secular matrix at Neumann tips") {
    // alpha = 0, k = pi: every arm derivative g_j vanishes, so det M = 0.
    StarGraphSpec spec(2, 0.0);
    CHECK(std::abs(stargraph::secular_determinant(spec, pi)) < 1e-12);
}

TEST_CASE("secular matrix rows match their definition at complex k") {
    StarGraphSpec spec(6, 0.7);
    Complex k(1.0, 0.1);
    Matrix m = stargraph::secular_matrix(spec, k);
    for (int j = 1; j < 6; ++j) {
        // Independent re-evaluation of f_j from the raw formula.
        Complex fj = std::cos(k) + Complex(0.0, 0.7) *
                                       std::polar(1.0, j * pi / 3.0) * std::sin(k) / k;
        CHECK(std::abs(m(j - 1, j) - fj) < 1e-13);
        CHECK(std::abs(m(j - 1, 0) + (std::cos(k) + Complex(0.0, 0.7) * std::sin(k) / k)) <
              1e-13);
    }
    for (int j = 0; j < 6; ++j) {
        Complex gj = -k * std::sin(k) + Complex(0.0, 0.7) *
                                            std::polar(1.0, j * pi / 3.0) * std::cos(k);
        CHECK(std::abs(m(5, j) - gj) < 1e-13);
    }
    CHECK_THROWS_AS(stargraph::secular_matrix(spec, Complex(0.0)), std::domain_error);
}

TEST_CASE("determinant zero set matches the closed form") {
    auto rep = validate::det_vs_closed_form();
    CHECK(rep.pass);
    CHECK(rep.max_deviation <= 1e-9);
}

TEST_CASE("secular scalar reduces to -6 k tan k at alpha = 0") {
    StarGraphSpec spec(6, 0.0);
    for (double k : {0.3, 0.7, 1.1, 1.4}) {
        auto f = stargraph::secular_scalar(spec, k);
        REQUIRE(f.has_value());
        CHECK(f->real() == Approx(-6.0 * k * std::tan(k)).epsilon(1e-12));
    }
    // At the f_j zero (cos k = 0) the pole flag fires.
    CHECK_FALSE(stargraph::secular_scalar(spec, pi / 2).has_value());
}

TEST_CASE("secular scalar vanishes at k = pi (tan factor)") {
    auto f = stargraph::secular_scalar(StarGraphSpec(6, 0.7), pi);
    REQUIRE(f.has_value());
    CHECK(std::abs(*f) < 1e-12);
}

TEST_CASE("reduced sum agrees with the closed form, prefactor -6k") {
    // F(k) = -6 k tan(kL) (k^6 - a^6 tan^4 kL)/(k^6 + a^6 tan^6 kL) for q=6.
    for (double alpha : {0.3, 0.7, 1.0})
        for (double k : {0.2, 0.5, 0.9, 1.3, 1.9}) {
            auto f = stargraph::secular_scalar(StarGraphSpec(6, alpha), k);
            REQUIRE(f.has_value());
            double t = std::tan(k);
            double k6 = std::pow(k, 6), a6 = std::pow(alpha, 6);
            double closed = -6.0 * k * t * (k6 - a6 * t * t * t * t) /
                            (k6 + a6 * std::pow(t, 6));
            CHECK(f->real() == Approx(closed).epsilon(1e-10));
        }
}

TEST_CASE("closed form q=6 factors") {
    auto ev = stargraph::closed_form_q6(0.7, pi);
    CHECK(std::abs(ev.factor_tan) < 1e-12);
    CHECK(std::abs(ev.product()) < 1e-12);

    // Away from poles the factored form reproduces the reduced sum.
    for (double k : {0.2, 1e-3}) {
        auto small = stargraph::closed_form_q6(0.7, k);
        auto direct = stargraph::secular_scalar(StarGraphSpec(6, 0.7), k);
        REQUIRE(direct.has_value());
        REQUIRE(small.scalar_value.has_value());
        CHECK(std::abs(*small.scalar_value - *direct) <=
              1e-9 * (1.0 + std::abs(*direct)));
    }

    // Exactly 4 sign-change zeros of the product over (0.05, 2) at alpha=0.7.
    auto cf_fn = [](double k) {
        return stargraph::closed_form_q6_product(0.7, k).real();
    };
    CHECK(validate::scan_sign_roots(cf_fn, {0.05, 2.0}, 2000).size() == 4);

    // Tan pole flag.
    CHECK_FALSE(stargraph::closed_form_q6(0.7, pi / 2 + 1e-6).tan_pole);
    CHECK(stargraph::closed_form_q6(0.7, pi / 2).tan_pole);
}

TEST_CASE("edge solutions") {
    // Full symmetry at Neumann tips: all amplitudes equal.
    auto sym = stargraph::edge_solution(StarGraphSpec(6, 0.0), pi);
    REQUIRE(sym.coefficients.size() == 6);
    for (auto a : sym.coefficients)
        CHECK(std::abs(a - sym.coefficients[0]) < 1e-10);

    StarGraphSpec spec(6, 0.7);
    auto scan = roots::scan_real_roots(spec, {0.05, 2.0});
    REQUIRE_FALSE(scan.real_roots.empty());
    auto sol = stargraph::edge_solution(spec, scan.real_roots.back().k);
    CHECK(sol.residual <= 1e-8);
    double amax = 0.0;
    for (auto a : sol.coefficients) amax = std::max(amax, std::abs(a));
    CHECK(amax == Approx(1.0));

    CHECK_THROWS_AS(stargraph::edge_solution(spec, 1.0), NotARootError);
}

TEST_CASE("invariant: F is real on the real axis for even q") {
    for (int q : {2, 4, 6, 8}) {
        StarGraphSpec spec(q, 0.7);
        for (int i = 0; i < 1000; ++i) {
            double k = 0.05 + (4.0 - 0.05) * i / 999.0;
            auto f = stargraph::secular_scalar(spec, k);
            if (!f) continue; // pole guard neighbourhood
            CHECK(std::abs(f->imag()) <= 1e-10 * (1.0 + std::abs(*f)));
        }
    }
}

TEST_CASE("invariant: conjugation symmetry of F for even q") {
    std::mt19937 rng(52);
    std::uniform_real_distribution<double> re(0.1, 2.0), im(-1.0, 1.0);
    for (int q : {4, 6}) {
        StarGraphSpec spec(q, 0.7);
        for (int trial = 0; trial < 30; ++trial) {
            Complex k(re(rng), im(rng));
            auto a = stargraph::secular_scalar(spec, k);
            auto b = stargraph::secular_scalar(spec, std::conj(k));
            if (!a || !b) continue;
            CHECK(std::abs(*b - std::conj(*a)) <= 1e-10 * (1.0 + std::abs(*a)));
        }
    }
}

TEST_CASE("invariant: scaling covariance of the root set") {
    StarGraphSpec base(6, 0.7);
    auto scan = roots::scan_real_roots(base, {0.05, 2.0});
    REQUIRE(scan.real_roots.size() == 4);
    for (double s : {0.5, 2.0}) {
        StarGraphSpec scaled(6, 0.7 / s, s * 1.0);
        for (const auto& r : scan.real_roots) {
            // Re-refine near the predicted root k/s.
            double k0 = r.k / s;
            auto f = [&scaled](double k) { return roots::real_secular(scaled, k); };
            double lo = k0 - 1e-3 / s, hi = k0 + 1e-3 / s;
            double flo = f(lo);
            REQUIRE((flo < 0) != (f(hi) < 0));
            double refined = roots::detail::bisect(f, lo, hi, flo);
            CHECK(refined == Approx(k0).margin(1e-9));
        }
    }
}

TEST_CASE("invariant: alpha = 0 root set in (0, 4) is exactly {pi}") {
    auto scan = roots::scan_real_roots(StarGraphSpec(6, 0.0), {0.05, 4.0}, 4000);
    REQUIRE(scan.real_roots.size() == 1);
    CHECK(scan.real_roots[0].k == Approx(pi).margin(1e-9));
}

TEST_CASE("sinc is entire through zero") {
    CHECK(stargraph::sinc(Complex(0.0)).real() == Approx(1.0));
    CHECK(stargraph::sinc(Complex(1e-9)).real() == Approx(1.0));
    CHECK(stargraph::sinc(Complex(0.5)).real() == Approx(std::sin(0.5) / 0.5));
}

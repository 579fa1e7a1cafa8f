#pragma once

// Cross-validation oracles shared by the CLI `validate` subcommand and the
// acceptance suite: determinant-form vs closed-form root agreement for q=6,
// and finite-difference eigenvalue convergence against the secular scan.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qstar/fdstar.hpp"
#include "qstar/roots.hpp"
#include "qstar/stargraph.hpp"

namespace qstar {
namespace validate {

/// Sign-change roots of an arbitrary real function on a grid, bisection
/// refined; candidates where |f| fails to vanish (pole crossings) are dropped.
inline std::vector<double> scan_sign_roots(const std::function<double(double)>& f,
                                           roots::Window window, int samples) {
    std::vector<double> ks(samples), vals(samples);
    const double dk = (window.hi - window.lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        ks[i] = window.lo + i * dk;
        vals[i] = f(ks[i]);
    }
    const double scale = roots::detail::median_abs(vals);
    std::vector<double> found;
    for (int i = 0; i + 1 < samples; ++i) {
        if (vals[i] == 0.0) {
            found.push_back(ks[i]);
        } else if ((vals[i] < 0) != (vals[i + 1] < 0)) {
            double r = roots::detail::bisect(f, ks[i], ks[i + 1], vals[i]);
            if (std::abs(f(r)) <= 1e-5 * (1.0 + scale)) found.push_back(r);
        }
    }
    return found;
}

struct DetVsClosedFormReport {
    bool pass = false;
    double max_deviation = 0.0; // worst |k_det - k_closed| over matched roots
    std::vector<double> alphas;
    std::string detail;
};

/// Roots of det M(k) vs roots of the q=6 closed-form product on the real
/// axis, matched pairwise. Roots inside a 1e-3 neighbourhood of an f_j zero
/// (where the determinant can pick up extra zero/pole cancellations) are
/// excluded from the comparison.
inline DetVsClosedFormReport det_vs_closed_form(
    const std::vector<double>& alphas = {0.3, 0.7, 1.0},
    roots::Window window = {0.05, 6.0}, double L = 1.0, int samples = 6000,
    double tol = 1e-9) {
    DetVsClosedFormReport rep;
    rep.alphas = alphas;
    for (double alpha : alphas) {
        StarGraphSpec spec(6, alpha, L);
        auto det_fn = [&spec](double k) {
            return stargraph::secular_determinant(spec, k).real();
        };
        auto cf_fn = [alpha, L](double k) {
            return stargraph::closed_form_q6_product(alpha, k, L).real();
        };
        std::vector<double> det_roots = scan_sign_roots(det_fn, window, samples);
        std::vector<double> cf_roots = scan_sign_roots(cf_fn, window, samples);

        auto near_arm_pole = [&spec](double k) {
            for (int j = 0; j < spec.q; ++j) {
                // Distance proxy: |f_j| small within a 1e-3 slab around k.
                for (double d : {-1e-3, 0.0, 1e-3})
                    if (std::abs(stargraph::arm_value(spec, j, k + d)) < 1e-5)
                        return true;
            }
            return false;
        };
        std::erase_if(det_roots, near_arm_pole);
        std::erase_if(cf_roots, near_arm_pole);

        if (det_roots.size() != cf_roots.size()) {
            rep.detail = "root count mismatch at alpha=" + std::to_string(alpha) +
                         ": det " + std::to_string(det_roots.size()) + " vs closed " +
                         std::to_string(cf_roots.size());
            rep.pass = false;
            return rep;
        }
        for (size_t i = 0; i < det_roots.size(); ++i)
            rep.max_deviation =
                std::max(rep.max_deviation, std::abs(det_roots[i] - cf_roots[i]));
    }
    rep.pass = rep.max_deviation <= tol;
    return rep;
}

struct FdConvergenceReport {
    bool pass = false;
    std::vector<double> scan_roots;             // truth from the secular scan
    std::vector<std::vector<double>> errors;    // [root][n-index]
    std::vector<double> observed_orders;        // least-squares slope per root
    std::string detail;
};

/// Matches the near-real, center-active FD eigenvalues against the secular
/// scan roots for a sequence of grid resolutions and fits the convergence
/// order. Roots already converged to solver noise at the finest grid are
/// counted as passing without an order estimate.
inline FdConvergenceReport fd_convergence(double alpha,
                                          const std::vector<int>& ns = {200, 400, 800},
                                          int q = 6, double L = 1.0,
                                          roots::Window window = {0.05, 2.0},
                                          double min_order = 1.8) {
    FdConvergenceReport rep;
    StarGraphSpec spec(q, alpha, L);
    auto scan = roots::scan_real_roots(spec, window);
    for (const auto& r : scan.real_roots) rep.scan_roots.push_back(r.k);
    if (rep.scan_roots.empty()) {
        rep.detail = "no scan roots in window";
        return rep;
    }

    rep.errors.assign(rep.scan_roots.size(), {});
    for (int n : ns) {
        auto op = fdstar::fd_star_operator(spec, n);
        auto modes = fdstar::fd_eigenvalues(op, /*sigma=*/2.0, /*count=*/16);
        for (size_t ri = 0; ri < rep.scan_roots.size(); ++ri) {
            double best = 1e300;
            for (const auto& mode : modes) {
                if (std::abs(mode.k.imag()) > 0.05) continue;   // complex family
                if (mode.center_amplitude < 1e-3) continue;     // psi(center)=0 family
                best = std::min(best, std::abs(mode.k.real() - rep.scan_roots[ri]));
            }
            rep.errors[ri].push_back(best);
        }
    }

    rep.pass = true;
    for (size_t ri = 0; ri < rep.scan_roots.size(); ++ri) {
        const auto& err = rep.errors[ri];
        if (err.back() < 1e-9) { // at solver noise, order fit is meaningless
            rep.observed_orders.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        // Least-squares slope of log(err) against log(1/n).
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int m = static_cast<int>(err.size());
        for (int i = 0; i < m; ++i) {
            double x = -std::log(double(ns[i]));
            double y = std::log(std::max(err[i], 1e-300));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        rep.observed_orders.push_back(slope);
        if (!(slope >= min_order)) {
            rep.pass = false;
            rep.detail = "root " + std::to_string(rep.scan_roots[ri]) +
                         " converges with order " + std::to_string(slope);
        }
    }
    return rep;
}

struct NeumannFdReport {
    bool pass = false;
    double lowest_nonzero_k = 0.0;
    double deviation_from_pi = 0.0;
};

/// alpha = 0 check: the lowest nonzero-momentum center-active FD eigenvalue
/// must sit at k = pi (Neumann tips).
inline NeumannFdReport fd_neumann_check(int n = 800, int q = 6, double L = 1.0,
                                        double tol = 1e-3) {
    NeumannFdReport rep;
    StarGraphSpec spec(q, 0.0, L);
    auto op = fdstar::fd_star_operator(spec, n);
    auto modes = fdstar::fd_eigenvalues(op, /*sigma=*/8.0, /*count=*/12);
    double best = 1e300;
    for (const auto& mode : modes) {
        if (std::abs(mode.k.imag()) > 0.05) continue;
        if (mode.center_amplitude < 1e-3) continue;
        if (mode.energy.real() < 0.1) continue; // constant mode
        best = std::min(best, mode.k.real());
    }
    rep.lowest_nonzero_k = best;
    rep.deviation_from_pi = std::abs(best - std::numbers::pi);
    rep.pass = rep.deviation_from_pi <= tol;
    return rep;
}

} // namespace validate
} // namespace qstar

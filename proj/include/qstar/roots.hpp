#pragma once

// Root machinery for the secular problem: sign-change bracketing on the real
// axis (with a |F| dip search for near-coalescent double roots), winding-number
// contour subdivision for complex roots, and the two-phase exceptional-point
// finder (root-count bisection in alpha, then 2D Newton on (F, dF/dk)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qstar/errors.hpp"
#include "qstar/stargraph.hpp"

namespace qstar {
namespace roots {

struct Window {
    double lo;
    double hi;
};

struct RealRoot {
    double k;
    double residual; // |det M(k)|
};

struct ComplexRoot {
    Complex k;
    double residual; // |det M(k)| at the refined root
};

struct RootReport {
    Window window{0.0, 0.0};
    std::vector<RealRoot> real_roots;
    std::vector<ComplexRoot> complex_roots; // upper half plane representatives
    double alpha = 0.0;
    int q = 0;
};

/// Real-valued scan function: Re F(k) with determinant fallback inside the
/// f_j pole guard (det M is real on the real axis for even q).
inline double real_secular(const StarGraphSpec& spec, double k) {
    auto f = stargraph::secular_scalar(spec, k);
    if (f) return f->real();
    return stargraph::secular_determinant(spec, k).real();
}

namespace detail {

inline double median_abs(std::vector<double> v) {
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end());
    return v.empty() ? 0.0 : v[v.size() / 2];
}

// Bisection on a sign-change bracket down to |dk| <= 1e-12.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double fa) {
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0) == (fm < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimization of |f| for tangential (no sign change) roots.
inline double minimize_abs(const std::function<double(double)>& f, double a,
                           double b) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = std::abs(f(c)), fd = std::abs(f(d));
    while (b - a > 1e-12) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = std::abs(f(c));
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = std::abs(f(d));
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Grid scan over the window, sign-change bracketing plus bisection, |F| dip
/// detection for even-multiplicity roots, deduplication. Bisection candidates
/// that converge onto a pole of F (where |F| blows up instead of vanishing)
/// are rejected.
inline RootReport scan_real_roots(const StarGraphSpec& spec, Window window,
                                  int samples = 2000) {
    if (!(window.lo > 0.0) || !(window.hi > window.lo))
        throw std::invalid_argument("scan_real_roots: window must satisfy 0 < lo < hi");
    if (samples < 100)
        throw std::invalid_argument("scan_real_roots: need at least 100 samples");

    auto f = [&spec](double k) { return real_secular(spec, k); };

    std::vector<double> ks(samples), vals(samples);
    const double dk = (window.hi - window.lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        ks[i] = window.lo + i * dk;
        vals[i] = f(ks[i]);
    }
    const double scale = detail::median_abs(vals);

    std::vector<double> found;
    for (int i = 0; i + 1 < samples; ++i) {
        if (vals[i] == 0.0) {
            found.push_back(ks[i]);
        } else if ((vals[i] < 0) != (vals[i + 1] < 0)) {
            double r = detail::bisect(f, ks[i], ks[i + 1], vals[i]);
            if (std::abs(f(r)) <= 1e-5 * (1.0 + scale)) // pole-crossing guard
                found.push_back(r);
        }
    }

    // Tangential roots: local minima of |F| dipping well below the grid scale
    // without a sign change (double roots near coalescence).
    const double dip = 1e-3 * scale;
    for (int i = 1; i + 1 < samples; ++i) {
        double a = std::abs(vals[i - 1]), b = std::abs(vals[i]), c = std::abs(vals[i + 1]);
        if (b < a && b <= c && b < dip &&
            (vals[i - 1] < 0) == (vals[i] < 0) && (vals[i] < 0) == (vals[i + 1] < 0)) {
            double r = detail::minimize_abs(f, ks[i - 1], ks[i + 1]);
            if (std::abs(f(r)) <= 1e-9 * (1.0 + scale)) found.push_back(r);
        }
    }

    std::sort(found.begin(), found.end());
    RootReport report;
    report.window = window;
    report.alpha = spec.alpha;
    report.q = spec.q;
    for (double r : found) {
        if (!report.real_roots.empty() && r - report.real_roots.back().k < 1e-9)
            continue;
        report.real_roots.push_back(
            {r, std::abs(stargraph::secular_determinant(spec, r))});
    }
    return report;
}

inline int count_real_roots(const StarGraphSpec& spec, Window window,
                            int samples = 2000) {
    return static_cast<int>(scan_real_roots(spec, window, samples).real_roots.size());
}

// ---------------------------------------------------------------------------
// Exceptional point
// ---------------------------------------------------------------------------

struct ExceptionalPoint {
    double alpha_star = 0.0;
    double k_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual_f = 0.0;    // |F(k*, a*)|
    double residual_dfdk = 0.0; // |dF/dk(k*, a*)|
    std::string method;         // "newton" or "bisection"
};

namespace detail {

inline double scalar_at(int q, double L, double alpha, double k) {
    return real_secular(StarGraphSpec(q, alpha, L), k);
}

inline double dfdk(int q, double L, double alpha, double k) {
    const double h = 1e-6 * std::max(1.0, std::abs(k));
    return (scalar_at(q, L, alpha, k + h) - scalar_at(q, L, alpha, k - h)) / (2 * h);
}

// Midpoint of the closest adjacent root pair (the pair about to coalesce).
inline std::optional<double> closest_pair_midpoint(const RootReport& rep) {
    if (rep.real_roots.size() < 2) return std::nullopt;
    double best_gap = 1e300, mid = 0.0;
    for (size_t i = 0; i + 1 < rep.real_roots.size(); ++i) {
        double gap = rep.real_roots[i + 1].k - rep.real_roots[i].k;
        if (gap < best_gap) {
            best_gap = gap;
            mid = 0.5 * (rep.real_roots[i].k + rep.real_roots[i + 1].k);
        }
    }
    return mid;
}

} // namespace detail

/// Critical coupling where the real-root count in the window drops. Phase 1
/// bisects alpha on the count; phase 2 polishes with 2D Newton on
/// G(k, alpha) = (F, dF/dk) using a finite-difference Jacobian.
inline ExceptionalPoint find_exceptional_point(int q, double L, Window alpha_bracket,
                                               Window window, int samples = 2000) {
    double lo = std::min(alpha_bracket.lo, alpha_bracket.hi);
    double hi = std::max(alpha_bracket.lo, alpha_bracket.hi);
    int c_lo = count_real_roots(StarGraphSpec(q, lo, L), window, samples);
    int c_hi = count_real_roots(StarGraphSpec(q, hi, L), window, samples);
    if (c_lo == c_hi)
        throw NoTransitionError("find_exceptional_point: equal root counts (" +
                                    std::to_string(c_lo) + ") at both bracket endpoints",
                                c_lo, c_hi);
    const int sub_count = std::max(c_lo, c_hi); // subcritical side has more roots

    // Phase 1: bisection on the count.
    double a = lo, b = hi;
    RootReport sub_scan = scan_real_roots(
        StarGraphSpec(q, c_lo == sub_count ? lo : hi, L), window, samples);
    while (b - a > 1e-4) {
        double m = 0.5 * (a + b);
        RootReport rep = scan_real_roots(StarGraphSpec(q, m, L), window, samples);
        bool m_sub = static_cast<int>(rep.real_roots.size()) == sub_count;
        if ((c_lo == sub_count) == m_sub)
            a = m;
        else
            b = m;
        if (m_sub) sub_scan = std::move(rep);
    }

    ExceptionalPoint ep;
    ep.bracket_lo = lo;
    ep.bracket_hi = hi;

    double alpha0 = 0.5 * (a + b);
    auto mid = detail::closest_pair_midpoint(sub_scan);
    double k0 = mid ? *mid : 0.5 * (window.lo + window.hi);

    // Phase 2: Newton on (F, dF/dk) = 0 in (k, alpha).
    double k = k0, al = alpha0;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        double g1 = detail::scalar_at(q, L, al, k);
        double g2 = detail::dfdk(q, L, al, k);
        if (std::abs(g1) <= 1e-8 && std::abs(g2) <= 1e-6) {
            converged = true;
            break;
        }
        const double hk = 1e-6 * std::max(1.0, std::abs(k));
        const double ha = 1e-6 * std::max(1.0, std::abs(al));
        double j11 = g2; // dF/dk, reuse the central-difference value
        double j12 = (detail::scalar_at(q, L, al + ha, k) -
                      detail::scalar_at(q, L, al - ha, k)) / (2 * ha);
        double j21 = (detail::scalar_at(q, L, al, k + hk) - 2 * g1 +
                      detail::scalar_at(q, L, al, k - hk)) / (hk * hk);
        double j22 = (detail::dfdk(q, L, al + ha, k) -
                      detail::dfdk(q, L, al - ha, k)) / (2 * ha);
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        double dk = (g1 * j22 - g2 * j12) / det;
        double da = (g2 * j11 - g1 * j21) / det;
        k -= dk;
        al -= da;
        if (k < window.lo || k > window.hi || al < lo - 0.1 || al > hi + 0.1) break;
    }

    if (converged) {
        ep.alpha_star = al;
        ep.k_star = k;
        ep.residual_f = std::abs(detail::scalar_at(q, L, al, k));
        ep.residual_dfdk = std::abs(detail::dfdk(q, L, al, k));
        ep.method = "newton";
        return ep;
    }

    // Fallback: pure count bisection, reduced confidence.
    while (b - a > 1e-9) {
        double m = 0.5 * (a + b);
        RootReport rep = scan_real_roots(StarGraphSpec(q, m, L), window, samples);
        bool m_sub = static_cast<int>(rep.real_roots.size()) == sub_count;
        if ((c_lo == sub_count) == m_sub)
            a = m;
        else
            b = m;
        if (m_sub) sub_scan = std::move(rep);
    }
    ep.alpha_star = 0.5 * (a + b);
    auto mid2 = detail::closest_pair_midpoint(sub_scan);
    ep.k_star = mid2 ? *mid2 : k0;
    ep.residual_f = std::abs(detail::scalar_at(q, L, ep.alpha_star, ep.k_star));
    ep.residual_dfdk = std::abs(detail::dfdk(q, L, ep.alpha_star, ep.k_star));
    ep.method = "bisection";
    return ep;
}

// ---------------------------------------------------------------------------
// Complex roots by the argument principle
// ---------------------------------------------------------------------------

struct Box {
    double re_lo, re_hi, im_lo, im_hi;

    Complex center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
    double diameter() const { return std::max(re_hi - re_lo, im_hi - im_lo); }
    bool contains(Complex z, double slack = 0.0) const {
        return z.real() >= re_lo - slack && z.real() <= re_hi + slack &&
               z.imag() >= im_lo - slack && z.imag() <= im_hi + slack;
    }
};

struct ComplexRootReport {
    std::vector<ComplexRoot> roots;
    double boundary_scale = 0.0; // median |det M| on the original boundary
    int winding_total = 0;
};

namespace detail {

struct BoundarySample {
    double t; // parameter in [0, 4), one unit per side, counterclockwise
    Complex z;
    Complex value;
};

inline Complex box_point(const Box& b, double t) {
    double s = std::fmod(t, 4.0);
    if (s < 1.0) return {b.re_lo + (b.re_hi - b.re_lo) * s, b.im_lo};
    if (s < 2.0) return {b.re_hi, b.im_lo + (b.im_hi - b.im_lo) * (s - 1.0)};
    if (s < 3.0) return {b.re_hi - (b.re_hi - b.re_lo) * (s - 2.0), b.im_hi};
    return {b.re_lo, b.im_hi - (b.im_hi - b.im_lo) * (s - 3.0)};
}

struct WindingResult {
    double winding;
    double min_abs;
    double median_abs;
};

// Adaptive phase-unwrapped boundary integral of d(log det M)/2*pi*i.
// Segments are refined until adjacent phase jumps fall below pi/2.
inline WindingResult winding_number(const StarGraphSpec& spec, const Box& box,
                                    int initial_per_side = 32) {
    std::vector<BoundarySample> samples;
    const int n0 = 4 * initial_per_side;
    samples.reserve(2 * n0);
    for (int i = 0; i < n0; ++i) {
        double t = 4.0 * i / n0;
        Complex z = box_point(box, t);
        samples.push_back({t, z, stargraph::secular_determinant(spec, z)});
    }
    samples.push_back({4.0, samples[0].z, samples[0].value}); // close the loop

    auto jump = [](const BoundarySample& a, const BoundarySample& b) {
        double d = std::arg(b.value) - std::arg(a.value);
        while (d > std::numbers::pi) d -= 2 * std::numbers::pi;
        while (d < -std::numbers::pi) d += 2 * std::numbers::pi;
        return d;
    };

    for (int pass = 0; pass < 24; ++pass) {
        bool refined = false;
        std::vector<BoundarySample> next;
        next.reserve(2 * samples.size());
        for (size_t i = 0; i + 1 < samples.size(); ++i) {
            next.push_back(samples[i]);
            if (std::abs(jump(samples[i], samples[i + 1])) >= std::numbers::pi / 2 &&
                samples[i + 1].t - samples[i].t > 1e-9) {
                double tm = 0.5 * (samples[i].t + samples[i + 1].t);
                Complex z = box_point(box, tm);
                next.push_back({tm, z, stargraph::secular_determinant(spec, z)});
                refined = true;
            }
        }
        next.push_back(samples.back());
        samples = std::move(next);
        if (!refined) break;
    }

    WindingResult res{0.0, 1e300, 0.0};
    std::vector<double> mags;
    mags.reserve(samples.size());
    double total = 0.0;
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        total += jump(samples[i], samples[i + 1]);
        double m = std::abs(samples[i].value);
        res.min_abs = std::min(res.min_abs, m);
        mags.push_back(m);
    }
    std::sort(mags.begin(), mags.end());
    res.median_abs = mags.empty() ? 0.0 : mags[mags.size() / 2];
    res.winding = total / (2 * std::numbers::pi);
    return res;
}

// Winding with the root-on-boundary guard: dilate by 1% and retry, max 5 times.
inline std::pair<WindingResult, Box> guarded_winding(const StarGraphSpec& spec,
                                                     Box box) {
    for (int attempt = 0;; ++attempt) {
        WindingResult w = winding_number(spec, box);
        bool near_root = w.min_abs <= 1e-9 * (1.0 + w.median_abs);
        bool integer_ok = std::abs(w.winding - std::round(w.winding)) <= 0.05;
        if (integer_ok && !near_root) return {w, box};
        if (attempt >= 5) {
            if (!integer_ok)
                throw ContourResolutionError(
                    "winding number failed the integer test: " +
                    std::to_string(w.winding));
            return {w, box};
        }
        double dre = 0.005 * (box.re_hi - box.re_lo);
        double dim = 0.005 * (box.im_hi - box.im_lo);
        box = {box.re_lo - dre, box.re_hi + dre,
               std::max(1e-6, box.im_lo - dim), box.im_hi + dim};
    }
}

inline std::optional<Complex> newton_complex(const StarGraphSpec& spec, Complex k0,
                                             double target_abs, int max_iter = 100) {
    Complex k = k0;
    for (int it = 0; it < max_iter; ++it) {
        Complex v = stargraph::secular_determinant(spec, k);
        if (std::abs(v) <= target_abs) return k;
        double h = 1e-6 * std::max(1.0, std::abs(k));
        Complex d = (stargraph::secular_determinant(spec, k + h) -
                     stargraph::secular_determinant(spec, k - h)) / (2.0 * h);
        if (d == Complex(0.0, 0.0)) return std::nullopt;
        Complex step = v / d;
        if (std::abs(step) > 1.0) step *= 1.0 / std::abs(step); // damp wild steps
        k -= step;
    }
    return std::nullopt;
}

inline void subdivide(const StarGraphSpec& spec, const Box& box, int winding,
                      double target_abs, int depth, std::vector<Complex>& out) {
    if (winding == 0) return;
    if ((winding == 1 && box.diameter() < 0.05) || depth > 40) {
        if (auto r = newton_complex(spec, box.center(), target_abs);
            r && box.contains(*r, 0.02)) {
            out.push_back(*r);
            return;
        }
        if (depth > 40) return; // give up on this box rather than loop
    }
    Box a = box, b = box;
    if (box.re_hi - box.re_lo >= box.im_hi - box.im_lo) {
        double m = 0.5 * (box.re_lo + box.re_hi);
        a.re_hi = m;
        b.re_lo = m;
    } else {
        double m = 0.5 * (box.im_lo + box.im_hi);
        a.im_hi = m;
        b.im_lo = m;
    }
    auto [wa, ba] = guarded_winding(spec, a);
    auto [wb, bb] = guarded_winding(spec, b);
    subdivide(spec, ba, static_cast<int>(std::round(wa.winding)), target_abs, depth + 1, out);
    subdivide(spec, bb, static_cast<int>(std::round(wb.winding)), target_abs, depth + 1, out);
}

} // namespace detail

/// Roots of det M inside an upper-half-plane rectangle, certified by the
/// argument principle and polished by Newton iteration on the determinant.
inline ComplexRootReport locate_complex_roots(const StarGraphSpec& spec, Box box) {
    if (!(box.im_lo > 0.0) || !(box.im_hi > box.im_lo) || !(box.re_hi > box.re_lo))
        throw std::invalid_argument("locate_complex_roots: need a rectangle with Im > 0");

    auto [w, outer] = detail::guarded_winding(spec, box);
    ComplexRootReport report;
    report.winding_total = static_cast<int>(std::round(w.winding));
    report.boundary_scale = w.median_abs;

    const double target = 1e-10 * report.boundary_scale;
    std::vector<Complex> raw;
    detail::subdivide(spec, outer, report.winding_total, target, 0, raw);

    std::sort(raw.begin(), raw.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    for (Complex r : raw) {
        if (!report.roots.empty() && std::abs(r - report.roots.back().k) < 1e-8)
            continue;
        report.roots.push_back({r, std::abs(stargraph::secular_determinant(spec, r))});
    }
    return report;
}

} // namespace roots
} // namespace qstar

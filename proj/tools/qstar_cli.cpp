// Command-line front end: secular curve data as CSV, root/EP/metric reports
// as JSON. Exit codes: 0 success, 1 numerical or domain failure, 2 usage.

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qstar/qstar.hpp"
#include "qstar/validate.hpp"

using json = nlohmann::ordered_json;
using namespace qstar;

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

roots::Window parse_window(const std::string& s, const char* flag) {
    roots::Window w{};
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> w.lo >> comma >> w.hi) || comma != ',')
        throw CLI::ValidationError(std::string(flag) + ": expected LO,HI");
    if (w.lo > w.hi) std::swap(w.lo, w.hi);
    return w;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        out << text;
    }
}

struct CommonOpts {
    int q = 6;
    double L = 1.0;
    double alpha = 0.0;
    int samples = 2000;
    std::string window_str = "0.05,2.0";
    std::string out_path;
};

void add_model_flags(CLI::App* cmd, CommonOpts& o, bool with_alpha = true) {
    cmd->add_option("--q", o.q, "number of arms")->capture_default_str();
    cmd->add_option("--L", o.L, "arm length")->capture_default_str();
    if (with_alpha)
        cmd->add_option("--alpha", o.alpha, "tip coupling")->capture_default_str();
    cmd->add_option("--samples", o.samples, "grid samples")->capture_default_str();
    cmd->add_option("--window", o.window_str, "k window LO,HI")->capture_default_str();
    cmd->add_option("--out", o.out_path, "write to file instead of stdout");
}

int cmd_secular(const CommonOpts& o) {
    roots::Window w = parse_window(o.window_str, "--window");
    StarGraphSpec spec(o.q, o.alpha, o.L);
    std::ostringstream csv;
    csv << "k,factor_tan,factor_ratio,product,scalar_F\n";
    const double dk = (w.hi - w.lo) / (o.samples - 1);
    for (int i = 0; i < o.samples; ++i) {
        double k = w.lo + i * dk;
        auto ev = stargraph::evaluate_secular(spec, k);
        csv << fmt17(k) << ',';
        if (spec.q == 6 && !ev.tan_pole)
            csv << fmt17(ev.factor_tan.real()) << ',' << fmt17(ev.factor_ratio.real())
                << ',' << fmt17(ev.product().real()) << ',';
        else
            csv << ",,,";
        if (ev.scalar_value)
            csv << fmt17(ev.scalar_value->real());
        csv << '\n';
    }
    emit(csv.str(), o.out_path);
    return 0;
}

int cmd_roots(const CommonOpts& o, bool want_complex, const std::string& im_window_str) {
    roots::Window w = parse_window(o.window_str, "--window");
    StarGraphSpec spec(o.q, o.alpha, o.L);
    auto report = roots::scan_real_roots(spec, w, o.samples);

    json j;
    j["q"] = o.q;
    j["alpha"] = o.alpha;
    j["window"] = {w.lo, w.hi};
    j["real_roots"] = json::array();
    for (const auto& r : report.real_roots)
        j["real_roots"].push_back({{"k", r.k}, {"residual", r.residual}});
    j["complex_roots"] = json::array();
    int pairs = 0;
    if (want_complex) {
        roots::Window iw = parse_window(im_window_str, "--im-window");
        auto creport = roots::locate_complex_roots(spec, {w.lo, w.hi, iw.lo, iw.hi});
        for (const auto& r : creport.roots)
            j["complex_roots"].push_back(
                {{"re", r.k.real()}, {"im", r.k.imag()}, {"residual", r.residual}});
        pairs = static_cast<int>(creport.roots.size());
    }
    j["counts"] = {{"real", report.real_roots.size()}, {"complex_pairs", pairs}};
    if (o.alpha == 0.0)
        j["constant_mode"] = true; // k = 0 state, present only at alpha = 0
    emit(j.dump(2) + "\n", o.out_path);
    return 0;
}

int cmd_ep(const CommonOpts& o, const std::string& bracket_str) {
    roots::Window w = parse_window(o.window_str, "--window");
    roots::Window bracket = parse_window(bracket_str, "--alpha-bracket");
    auto ep = roots::find_exceptional_point(o.q, o.L, bracket, w, o.samples);
    json j;
    j["alpha_star"] = ep.alpha_star;
    j["k_star"] = ep.k_star;
    j["bracket"] = {ep.bracket_lo, ep.bracket_hi};
    j["residuals"] = {{"f", ep.residual_f}, {"dfdk", ep.residual_dfdk}};
    j["method"] = ep.method;
    emit(j.dump(2) + "\n", o.out_path);
    return 0;
}

int cmd_metric(double lambda, const std::optional<std::string>& alphas_str,
               bool basis, const std::string& out_path) {
    json j;
    if (alphas_str) {
        std::array<double, 4> alphas{};
        char c1, c2, c3;
        std::istringstream in(*alphas_str);
        if (!(in >> alphas[0] >> c1 >> alphas[1] >> c2 >> alphas[2] >> c3 >> alphas[3]))
            throw CLI::ValidationError("--alphas: expected A1,A2,A3,A4");
        auto cand = cryptoherm::assemble_metric(lambda, alphas);
        j["residual"] = cand.residual;
        j["min_eigenvalue"] = cand.min_eigenvalue;
        j["is_metric"] = cand.is_metric;
        j["eigenvalues"] = json::array();
        for (auto e : cand.eigenvalues) j["eigenvalues"].push_back(e.real());
    } else if (basis) {
        auto h = cryptoherm::build_h4(lambda);
        auto space = cryptoherm::solve_metric_space(h);
        j["dimension"] = space.dimension;
        std::vector<double> residuals;
        bool contains = true;
        for (int comp = 1; comp <= 4; ++comp) {
            double r = cryptoherm::projection_residual(
                space, cryptoherm::metric_component(comp, lambda));
            residuals.push_back(r);
            contains = contains && r <= 1e-10;
        }
        j["contains_M_family"] = contains;
        j["projection_residuals"] = residuals;
        auto reality = cryptoherm::spectrum_reality(h, 1e-9);
        if (!reality.real) {
            j["warning"] = "spectrum complex: no metric exists";
            std::cerr << "warning: spectrum complex: no metric exists\n";
        }
    } else {
        throw CLI::ValidationError("metric: need --alphas A1,A2,A3,A4 or --basis");
    }
    emit(j.dump(2) + "\n", out_path);
    return 0;
}

int cmd_validate(bool fd, const std::vector<int>& ns, std::optional<double> alpha,
                 const std::string& out_path) {
    json j;
    bool all_pass = true;
    const bool neumann = alpha.has_value() && *alpha == 0.0;
    const bool run_fd = fd || neumann;

    if (!run_fd || fd) {
        auto det_rep = validate::det_vs_closed_form();
        j["det_vs_closed_form"] = {{"pass", det_rep.pass},
                                   {"max_root_deviation", det_rep.max_deviation},
                                   {"detail", det_rep.detail}};
        all_pass = all_pass && det_rep.pass;
    }
    if (run_fd) {
        if (neumann) {
            auto neu = validate::fd_neumann_check(ns.empty() ? 800 : ns.back());
            j["fd_neumann"] = {{"pass", neu.pass},
                               {"lowest_nonzero_k", neu.lowest_nonzero_k},
                               {"deviation_from_pi", neu.deviation_from_pi}};
            all_pass = all_pass && neu.pass;
        } else {
            double a = alpha.value_or(0.7);
            auto conv = validate::fd_convergence(a, ns.empty()
                                                        ? std::vector<int>{200, 400, 800}
                                                        : ns);
            json orders = json::array();
            for (double o : conv.observed_orders)
                orders.push_back(std::isnan(o) ? json() : json(o));
            j["fd_convergence"] = {{"pass", conv.pass},
                                   {"alpha", a},
                                   {"scan_roots", conv.scan_roots},
                                   {"observed_orders", orders},
                                   {"detail", conv.detail}};
            all_pass = all_pass && conv.pass;
        }
    }
    j["pass"] = all_pass;
    emit(j.dump(2) + "\n", out_path);
    if (!all_pass) {
        std::cerr << "validate: an oracle check failed\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound-state spectra of non-Hermitian star graphs and their "
                 "crypto-Hermitian discrete companions"};
    app.require_subcommand(1);

    CommonOpts sec_opts, root_opts, ep_opts;
    bool want_complex = false;
    std::string im_window_str = "0.01,1.0";
    std::string bracket_str;
    double lambda = 0.0;
    std::optional<std::string> alphas_str;
    bool basis = false;
    std::string metric_out, validate_out;
    bool fd = false;
    std::vector<int> fd_ns;
    std::optional<double> validate_alpha;

    auto* sec = app.add_subcommand("secular", "secular factors over a k grid (CSV)");
    add_model_flags(sec, sec_opts);

    auto* rts = app.add_subcommand("roots", "real (and complex) secular roots (JSON)");
    add_model_flags(rts, root_opts);
    rts->add_flag("--complex", want_complex, "also locate complex roots by contour");
    rts->add_option("--im-window", im_window_str, "Im k window LO,HI")
        ->capture_default_str();

    auto* ep = app.add_subcommand("ep", "exceptional point in the coupling (JSON)");
    add_model_flags(ep, ep_opts, /*with_alpha=*/false);
    ep->add_option("--alpha-bracket", bracket_str, "alpha bracket LO,HI")->required();

    auto* met = app.add_subcommand("metric", "discrete-model metric reports (JSON)");
    met->add_option("--lambda", lambda, "coupling of H4")->required();
    auto* alphas_opt = met->add_option("--alphas", "metric coefficients A1,A2,A3,A4");
    met->add_flag("--basis", basis, "solve the full metric space instead");
    met->add_option("--out", metric_out, "write to file instead of stdout");

    auto* val = app.add_subcommand("validate", "cross-validation oracles (JSON)");
    val->add_flag("--fd", fd, "include the finite-difference convergence oracle");
    val->add_option("--n", fd_ns, "grid resolutions for --fd")->delimiter(',');
    auto* val_alpha = val->add_option("--alpha", "coupling for the FD oracle");
    val->add_option("--out", validate_out, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*sec) return cmd_secular(sec_opts);
        if (*rts) return cmd_roots(root_opts, want_complex, im_window_str);
        if (*ep) return cmd_ep(ep_opts, bracket_str);
        if (*met) {
            if (alphas_opt->count()) alphas_str = alphas_opt->as<std::string>();
            return cmd_metric(lambda, alphas_str, basis, metric_out);
        }
        if (*val) {
            if (val_alpha->count()) validate_alpha = val_alpha->as<double>();
            return cmd_validate(fd, fd_ns, validate_alpha, validate_out);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const NoTransitionError& e) {
        std::cerr << "no root-count transition: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "fokas/config.hpp"
#include "fokas/dispersion.hpp"
#include "fokas/oracle.hpp"
#include "fokas/oscillatory.hpp"
#include "fokas/output.hpp"

namespace fokas {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget = 0.0;  // wall-clock limit in seconds, part of pass
    std::vector<std::pair<std::string, Table>> tables;
};

namespace acceptance {

inline std::string fmt(double v, int digits = 3) {
    char b[40];
    std::snprintf(b, sizeof b, "%.*g", digits, v);
    return b;
}

inline RunConfig preset_config(const std::string& name) {
    json j = {{"data", {{"preset", name}}}};
    if (name == "early") j["params"] = {{"T", 1.0}};
    return parse_config(j);
}

// ---- 1: invariance map ----
inline CriterionResult invariance(std::uint64_t seed) {
    CriterionResult c{1, "invariance map", true, "", 0, 10};
    Table t({"alpha", "beta", "samples", "max_nu_sq_err", "max_w_err"});
    SplitMix64 rng(seed ^ 0x1001);
    double worst_nu = 0, worst_w = 0;
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}}) {
        const SpectralParams p(a, b);
        const BranchCut cut = paper_cut(p);
        double e_nu = 0, e_w = 0;
        for (int i = 0; i < 10000; ++i) {
            const double r = 10 * std::sqrt(rng.uniform()), th = rng.uniform(0, 2 * pi);
            const cplx k = std::polar(r, th);
            const cplx nu = invariance_nu(k, p, cut);
            const double n2 = std::norm(k);
            e_nu = std::max(e_nu, std::abs(nu * nu - (b / a - k * k)) / (1 + n2));
            e_w = std::max(e_w, std::abs(spectral_w(nu, p) - spectral_w(k, p)) / (1 + n2 * n2));
        }
        t.add({a, b, 10000LL, e_nu, e_w});
        worst_nu = std::max(worst_nu, e_nu);
        worst_w = std::max(worst_w, e_w);
    }
    // alpha = 1, beta = 0: nu = ik on arg k in (pi/4, pi/2), -ik on (3pi/4, pi)
    const SpectralParams bi(1, 0);
    const BranchCut bc = paper_cut(bi);
    double e_bi = 0;
    for (int i = 0; i < 10000; ++i) {
        const bool first = i % 2 == 0;
        const double lo = first ? pi / 4 : 3 * pi / 4;
        const cplx k = std::polar(10 * std::sqrt(rng.uniform()), lo + rng.uniform() * pi / 4);
        const cplx want = first ? cplx(0, 1) * k : cplx(0, -1) * k;
        e_bi = std::max(e_bi, std::abs(invariance_nu(k, bi, bc) - want));
    }
    t.add({1.0, 0.0, 10000LL, e_bi, 0.0});
    c.pass = worst_nu <= 1e-12 && worst_w <= 1e-10 && e_bi <= 1e-12;
    c.detail = "nu^2 err " + fmt(worst_nu) + " (<= 1e-12), w err " + fmt(worst_w) + " (<= 1e-10), +-ik err " +
               fmt(e_bi) + " (<= 1e-12)";
    c.tables.push_back({"", std::move(t)});
    return c;
}

// ---- 2: contour ----
inline CriterionResult contour(std::uint64_t) {
    CriterionResult c{2, "contour correctness", true, "", 0, 5};
    Table t({"alpha", "beta", "path", "nodes", "max_abs_re_w", "probe_re_w"});
    double worst_node = 0, worst_probe = -inf;
    auto probe = [](const ContourPath& q, int orient, const SpectralParams& p) {
        const double s = path_mid(q);
        const cplx k = q.position(s) + 1e-4 * left_normal(q, orient, s);
        return region_classify(k, p) == Region::inside_D_plus ? re_w(k, p) : inf;
    };
    // quadrature nodes the evaluator integrates over, gaussian data, every sign configuration
    const auto cfg = preset_config("gaussian");
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}, {1, 0}, {2, 3}}) {
        const SpectralParams p(a, b);
        const ContourEvaluator ev(p, cfg.data(), cfg.eval_options());
        const auto& cs = ev.contour();
        for (std::size_t i = 0; i < cs.paths.size(); ++i) {
            double m = 0;
            for (const cplx& k : ev.tables()[i].k) m = std::max(m, std::abs(spectral_w(k, p).real()));
            const double pr = probe(cs.paths[i], cs.orientation[i], p);
            t.add({a, b, cs.paths[i].label, (long long)ev.tables()[i].k.size(), m, pr});
            worst_node = std::max(worst_node, m);
            worst_probe = std::max(worst_probe, pr);
        }
    }
    // alpha = beta = 1 against the closed-form gamma1..gamma5
    const auto cs = build_contour(SpectralParams(1, 1));
    double geo = 0;
    const double s0 = std::sqrt(0.5);
    bool labels = cs.paths.size() == 5;
    const char* names[5] = {"gamma1", "gamma2", "gamma3", "gamma4", "gamma5"};
    for (std::size_t i = 0; labels && i < 5; ++i) labels = cs.paths[i].label == names[i];
    if (labels) {
        geo = std::max({std::abs(cs.paths[1].s_hi - s0), std::abs(cs.paths[2].s_lo - s0), std::abs(cs.paths[3].s_lo - s0),
                        std::abs(cs.paths[4].s_hi + s0), std::abs(cs.paths[1].s_lo), std::abs(cs.paths[0].s_lo)});
        for (int j = 0; j <= 200; ++j) {
            const double s = 0.05 * j;
            const double sh = s0 + 0.05 * j;
            const double m = std::sqrt(sh * sh - 0.5);
            geo = std::max(geo, std::abs(cs.paths[0].position(s) - cplx(0, s)));
            if (s < s0) geo = std::max(geo, std::abs(cs.paths[1].position(s) - cplx(s, 0)));
            geo = std::max(geo, std::abs(cs.paths[2].position(sh) - cplx(sh, m)));
            geo = std::max(geo, std::abs(cs.paths[3].position(sh) - cplx(-sh, m)));
            geo = std::max(geo, std::abs(cs.paths[4].position(-sh) - cplx(-sh, 0)));
        }
    }
    c.pass = worst_node <= 1e-12 && worst_probe < 0 && labels && geo <= 1e-14;
    c.detail = "max |Re w| at nodes " + fmt(worst_node) + " (<= 1e-12), worst left probe Re w " + fmt(worst_probe) +
               " (< 0), gamma1..5 deviation " + fmt(geo) + " (<= 1e-14)";
    c.tables.push_back({"", std::move(t)});
    return c;
}

// ---- 3: quadrature oracle ----
inline CriterionResult quadrature(std::uint64_t seed) {
    CriterionResult c{3, "quadrature oracle equivalence", true, "", 0, 120};
    Table t({"rule", "case", "value_re", "value_im", "oracle_re", "oracle_im", "abs_diff", "est_sum", "pass"});
    SplitMix64 rng(seed ^ 0x3003);
    struct FilonCase {
        double a0, b, cq, lo, len;
        PhaseSpec ph;
    };
    std::vector<FilonCase> fc(100);
    for (auto& f : fc) {
        f.a0 = rng.uniform(0.5, 2.0);
        f.b = rng.uniform(-0.5, 1.0);
        f.cq = rng.uniform(0.0, 2.0);
        f.lo = rng.uniform(-2.0, 1.0);
        f.len = rng.uniform(0.5, 3.0);
        f.ph.c = {rng.uniform(-1, 1), rng.uniform(-5, 5), rng.uniform(-2, 2), rng.uniform(-1, 1),
                  (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(0.2, 2.0)};
        f.ph.t = rng.uniform(0.5, 10.0);
    }
    struct LapCase {
        double A, sigma, omega, p, nu, start;
    };
    std::vector<LapCase> lc(100);
    for (auto& l : lc) l = {rng.uniform(0.5, 2.0), rng.uniform(0.2, 3.0), rng.uniform(-10, 10), rng.uniform(-0.9, 0.9),
                            rng.uniform(0.0, 5.0), rng.uniform(0.0, 2.0)};
    struct Row {
        cplx v, o;
        double est;
    };
    std::vector<Row> fr(100), lr(100);
    parallel_for(100, [&](std::size_t i) {
        const auto& f = fc[i];
        auto amp = [&f](double x) { return cplx(f.a0 * std::exp(-f.b * x) / (1 + f.cq * x * x), 0.3 * std::sin(x)); };
        const auto a = filon_segment(amp, f.ph, f.lo, f.lo + f.len, 1e-11);
        const auto o = adaptive_quad([&](double x) { return amp(x) * std::exp(cplx(0, f.ph(x))); }, f.lo, f.lo + f.len,
                                     1e-12, 2000000);
        fr[i] = {a.value, o.value, a.error_estimate + o.error_estimate};
        const auto& l = lc[i];
        auto g = [&l](double s) {
            return l.A * std::exp(-l.sigma * s) * std::exp(cplx(0, l.omega * s)) * (1 + l.p * std::sin(l.nu * s));
        };
        const double M = l.A * (1 + std::abs(l.p));
        const auto b = laplace_tail(g, l.sigma, M, l.start, 1e-11);
        const auto ob = adaptive_quad_inf(g, l.start, [&](double S) { return M * std::exp(-l.sigma * S) / l.sigma; },
                                          1e-12, 2000000);
        lr[i] = {b.value, ob.value, b.error_estimate + ob.error_estimate};
    });
    // roundoff floor for the comparison; estimates can sit below it
    constexpr double floor = 1e-13;
    double worst = 0;
    int fails = 0;
    for (int rule = 0; rule < 2; ++rule)
        for (std::size_t i = 0; i < 100; ++i) {
            const Row& r = rule == 0 ? fr[i] : lr[i];
            const double d = std::abs(r.v - r.o);
            const bool ok = d <= std::max(r.est, floor) && d <= 1e-8;
            fails += !ok;
            worst = std::max(worst, d);
            t.add({std::string(rule == 0 ? "filon" : "laplace"), (long long)i, r.v.real(), r.v.imag(), r.o.real(),
                   r.o.imag(), d, r.est, (long long)ok});
        }
    c.pass = fails == 0;
    c.detail = std::to_string(200 - fails) + "/200 within error estimates, max |diff| " + fmt(worst) + " (<= 1e-8)";
    c.tables.push_back({"", std::move(t)});
    return c;
}

// ---- 4: Van der Corput certificates ----
inline CriterionResult vdc(std::uint64_t) {
    CriterionResult c{4, "Van der Corput certificates", true, "", 0, 300};
    Table t({"kind", "s", "y_or_omega", "t", "abs_I", "certificate_bound", "case_tag", "pass"});
    struct Pt {
        OscKind kind;
        double s, y, t;
    };
    std::vector<Pt> pts;
    for (OscKind kind : {OscKind::van, OscKind::van2})
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
                for (int k = 0; k < 10; ++k) {
                    const double s = 0.1 + 9.9 * i / 9;
                    pts.push_back({kind, kind == OscKind::van ? s : inv_sqrt2 + s, -20 + 40.0 * j / 9, 0.01 + 0.99 * k / 9});
                }
    std::vector<double> absI(pts.size());
    std::vector<VdcCertificate> cert(pts.size()), cert16(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        const auto& p = pts[i];
        absI[i] = std::abs(oscillatory_I(p.kind, p.s, p.y, p.t));
        cert[i] = vdc_certificate(p.kind, p.s, p.y, p.t);
        cert16[i] = vdc_certificate(p.kind, p.s, p.y, 16 * p.t);
    });
    int dom = 0, same_case = 0, halves = 0;
    double worst_scale = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool ok = absI[i] <= cert[i].total_bound;
        dom += ok;
        t.add({std::string(to_string(pts[i].kind)), pts[i].s, pts[i].y, pts[i].t, absI[i], cert[i].total_bound,
               cert[i].case_tag, (long long)ok});
        if (cert16[i].case_tag == cert[i].case_tag) {
            ++same_case;
            const double e = std::abs(2 * cert16[i].total_bound - cert[i].total_bound) / cert[i].total_bound;
            worst_scale = std::max(worst_scale, e);
            halves += e <= 4 * std::numeric_limits<double>::epsilon();
        }
    }
    c.pass = dom == int(pts.size()) && halves == same_case && same_case > 0;
    c.detail = "dominance " + std::to_string(dom) + "/" + std::to_string(pts.size()) + ", t -> 16t halves the bound at " +
               std::to_string(halves) + "/" + std::to_string(same_case) + " same-case points (rel err " +
               fmt(worst_scale) + ")";
    c.tables.push_back({"", std::move(t)});
    return c;
}

// ---- 5: kernel envelopes and the Ben-Artzi ratio ----
inline CriterionResult kernels(std::uint64_t) {
    CriterionResult c{5, "kernel decay envelopes", true, "", 0, 600};
    const double x = 0.2;
    const std::vector<double> ts{1.0, 0.25, 1.0 / 16, 1.0 / 64};
    std::vector<double> ys;
    for (int i = 0; i <= 160; ++i) ys.push_back(-20 + 0.25 * i);
    // sup_y t^{1/4}|K_ell| per (ell, t)
    std::vector<double> sup(5 * ts.size());
    parallel_for(sup.size(), [&](std::size_t q) {
        const int ell = int(q / ts.size()) + 1;
        const double tt = ts[q % ts.size()];
        double m = 0;
        for (double y : ys) m = std::max(m, std::abs(kernel_K(ell, y, x, tt)));
        sup[q] = std::pow(tt, 0.25) * m;
    });
    Table te({"ell", "x", "t", "sup_scaled_abs_K"});
    double worst_var = 0;
    for (int ell = 1; ell <= 5; ++ell) {
        double mx = 0, mn = inf;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const double v = sup[(ell - 1) * ts.size() + j];
            te.add({(long long)ell, x, ts[j], v});
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        worst_var = std::max(worst_var, (mx - mn) / mx);
    }
    // Ben-Artzi: sup over x of the normalized ratio on 65 and 129 nodes
    Table tb({"t", "sup_ratio_65", "sup_ratio_129", "rel_change"});
    std::vector<double> s65(ts.size()), s129(ts.size());
    parallel_for(2 * ts.size(), [&](std::size_t q) {
        const int n = q < ts.size() ? 65 : 129;
        const double tt = ts[q % ts.size()];
        double m = 0;
        for (int i = 0; i < n; ++i) m = std::max(m, benartzi_bound_check(-50 + 100.0 * i / (n - 1), tt));
        (n == 65 ? s65 : s129)[q % ts.size()] = m;
    });
    double worst_ba = 0, ba_max = 0;
    bool finite = true;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        const double d = std::abs(s129[j] - s65[j]) / s129[j];
        tb.add({ts[j], s65[j], s129[j], d});
        worst_ba = std::max(worst_ba, d);
        ba_max = std::max(ba_max, s129[j]);
        finite = finite && std::isfinite(s129[j]);
    }
    c.pass = worst_var <= 0.25 && worst_ba <= 0.1 && finite;
    c.detail = "max (max-min)/max of sup t^{1/4}|K| over t " + fmt(worst_var) + " (<= 0.25) at x = 0.2; Ben-Artzi sup " +
               fmt(ba_max) + ", change under x-grid doubling " + fmt(worst_ba) + " (<= 0.1)";
    c.tables.push_back({"envelope", std::move(te)});
    c.tables.push_back({"benartzi", std::move(tb)});
    return c;
}

// ---- 6: trace recovery ----
inline CriterionResult traces(std::uint64_t) {
    CriterionResult c{6, "trace recovery", true, "", 0, 300};
    Table t({"preset", "t_count", "x_min", "rel_err_g0", "rel_err_g1"});
    std::string d;
    for (const char* name : {"gaussian", "poly_bump"}) {
        const auto cfg = preset_config(name);
        EvalOptions o = cfg.eval_options();
        o.tol = 1e-8;
        o.x_max = 1.0;
        o.max_mx = 1;
        o.max_mt = 0;
        const ContourEvaluator ev(cfg.params, cfg.data(), o);
        const auto r = trace_report(ev, EvaluationGrid::linear_t(0.02, cfg.T, 100), 1e-3);
        t.add({std::string(name), 100LL, 1e-3, r.rel0(), r.rel1()});
        c.pass = c.pass && r.rel0() <= 1e-3 && r.rel1() <= 5e-3;
        d += std::string(d.empty() ? "" : "; ") + name + " " + fmt(r.rel0()) + " / " + fmt(r.rel1());
    }
    c.detail = d + " (<= 1e-3 / 5e-3)";
    c.tables.push_back({"", std::move(t)});
    return c;
}

// ---- 7: PDE residual ----
inline CriterionResult residual(std::uint64_t seed) {
    CriterionResult c{7, "PDE residual", true, "", 0, 300};
    const auto cfg = preset_config("gaussian");
    EvalOptions o = cfg.eval_options();  // tol 1e-8, x in [0, 20]
    const ContourEvaluator ev(cfg.params, cfg.data(), o);
    SplitMix64 rng(seed ^ 0x7007);
    Table ta({"x", "t", "abs_residual", "abs_y"});
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const double x = rng.uniform(0.0, o.x_max), tt = rng.uniform(0.01, cfg.T);
        const double r = std::abs(pde_residual(ev, x, tt));
        ta.add({x, tt, r, std::abs(ev.evaluate(x, tt))});
        worst = std::max(worst, r);
    }
    const double bound = 10 * o.tol * ev.data_scale();
    // FD residual of the field: central differences, dt = h^2, order 2
    EvalOptions of = o;
    of.tol = 1e-10;
    of.max_mx = 0;
    of.max_mt = 0;
    const ContourEvaluator ef(cfg.params, cfg.data(), of);
    const std::vector<std::pair<double, double>> pts{{1.0, 1.2}, {2.0, 1.5}, {1.5, 0.8}, {4.0, 1.8}, {3.0, 1.0}};
    const std::vector<double> hs{0.05, 0.025, 0.0125};
    Table tf({"x", "t", "h", "abs_fd_residual"});
    std::vector<double> norm(hs.size(), 0.0);
    const cplx I(0, 1);
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const double h = hs[k], ht = h * h;
        for (auto [x, tt] : pts) {
            auto y = [&](double xx, double ts) { return ef.evaluate(xx, ts); };
            const cplx yt = (y(x, tt + ht) - y(x, tt - ht)) / (2 * ht);
            const cplx y2 = (y(x + h, tt) - 2.0 * y(x, tt) + y(x - h, tt)) / (h * h);
            const cplx y4 = (y(x + 2 * h, tt) - 4.0 * y(x + h, tt) + 6.0 * y(x, tt) - 4.0 * y(x - h, tt) + y(x - 2 * h, tt)) /
                            (h * h * h * h);
            const double r = std::abs(yt - I * (cfg.params.alpha * y4 + cfg.params.beta * y2));
            tf.add({x, tt, h, r});
            norm[k] = std::max(norm[k], r);
        }
    }
    // least-squares slope of log(max residual) against log h
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        mx += std::log(hs[k]) / hs.size();
        my += std::log(norm[k]) / hs.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        sxy += (std::log(hs[k]) - mx) * (std::log(norm[k]) - my);
        sxx += (std::log(hs[k]) - mx) * (std::log(hs[k]) - mx);
    }
    const double order = sxy / sxx;
    c.pass = worst <= bound && std::abs(order - 2.0) <= 0.3;
    c.detail = "analytic residual " + fmt(worst) + " (<= " + fmt(bound) + "), FD residual order " + fmt(order) +
               " (2 +- 0.3)";
    c.tables.push_back({"analytic", std::move(ta)});
    c.tables.push_back({"fd", std::move(tf)});
    return c;
}

// sample k for the global relation, all with Im k <= 0
inline const std::vector<cplx>& global_relation_k() {
    static const std::vector<cplx> k{{0, -2}, {3, -1}, {0, -0.5}, {0, -1},  {0, -1.5},
                                     {1, -0.5}, {2, -1.5}, {-0.5, -2}, {0.5, 0}, {-2, 0}};
    return k;
}

// ---- 8: FD oracle ----
inline CriterionResult oracle(std::uint64_t) {
    CriterionResult c{8, "oracle cross-validation", true, "", 0, 600};
    const auto cfg = preset_config("gaussian");
    const auto data = cfg.data();
    FDOptions fo;
    fo.t_out = {0.25, 0.5, 1.0};
    const auto fd = fd_solve(cfg.params, data.g0->datum(), data.g1->datum(), FDGrid::make(20, 2000, 1.0, 1e-3), fo);
    const ContourEvaluator ev(cfg.params, data, cfg.eval_options());
    const auto field = solve_field(ev, EvaluationGrid::graded(1e-3, 0.1, 20, 30, 1990, {0.25, 0.5, 1.0}));
    const auto cmp = compare_fields(field, fd);
    Table tf({"t", "rel_l2", "max_abs"});
    for (std::size_t j = 0; j < cmp.t.size(); ++j) tf.add({cmp.t[j], cmp.rel_l2[j], cmp.max_abs[j]});
    Table tg({"re_k", "im_k", "t", "residual", "abs_lhs", "abs_rhs", "term_scale"});
    const auto& ks = global_relation_k();
    std::vector<GlobalRelation> gr(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) { gr[i] = global_relation(fd, cfg.params, ks[i], 1.0); });
    double worst_gr = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        tg.add({ks[i].real(), ks[i].imag(), 1.0, gr[i].residual, std::abs(gr[i].lhs), std::abs(gr[i].rhs), gr[i].term_scale});
        worst_gr = std::max(worst_gr, gr[i].residual);
    }
    c.pass = cmp.worst_rel_l2 <= 5e-3 && worst_gr <= 5e-3;
    c.detail = "Fokas vs FD rel L2 " + fmt(cmp.worst_rel_l2) + " (<= 5e-3), global relation residual " + fmt(worst_gr) +
               " (<= 5e-3), FD far-field leakage " + fmt(fd.leakage);
    c.tables.push_back({"field", std::move(tf)});
    c.tables.push_back({"global-relation", std::move(tg)});
    return c;
}

// Evaluator settings for the dispersion studies; res = 2 doubles every resolution.
inline EvalOptions dispersion_eval(int res) {
    EvalOptions o;
    o.tol = res == 1 ? 1e-6 : 1e-7;
    o.x_max = 2000;
    o.max_mx = 0;
    o.max_mt = 0;
    o.panel_phase = (res == 1 ? 8 : 4) * pi;
    return o;
}

// ---- 9: dispersion decay ----
inline CriterionResult dispersion(std::uint64_t) {
    CriterionResult c{9, "dispersion decay", true, "", 0, 900};
    const auto cfg = preset_config("early");
    Table t({"t", "r", "norm", "psi_sum", "ratio"});
    Table tf({"r", "resolution", "fitted_slope", "slope_bound", "ratio_max", "ratio_min", "psi_converged", "pass"});
    std::vector<double> cmax[2];
    bool pass = true;
    std::string d;
    for (int res = 1; res <= 2; ++res) {
        const ContourEvaluator ev(cfg.params, cfg.data(), dispersion_eval(res));
        DispersionOptions o;
        o.dx = 0.05 / res;
        o.psi_refine = res;
        const auto st = dispersion_study(ev, o);
        if (res == 1)
            for (const auto& r : st.rows) t.add({r.t, r.r, r.norm, r.psi_sum, r.ratio});
        for (const auto& f : st.fits) {
            tf.add({f.r, (long long)res, f.fit.slope, f.slope_bound, f.ratio_max, f.ratio_min, (long long)f.psi_converged,
                    (long long)f.pass});
            cmax[res - 1].push_back(f.ratio_max);
            if (res == 1) {
                pass = pass && f.pass;
                d += std::string(d.empty() ? "" : "; ") + "r=" + (std::isinf(f.r) ? std::string("inf") : fmt(f.r)) +
                     " slope " + fmt(f.fit.slope) + " (<= " + fmt(f.slope_bound) + "), max/min C " +
                     fmt(f.ratio_max / f.ratio_min);
            }
        }
    }
    double worst = 1;
    for (std::size_t a = 0; a < cmax[0].size(); ++a) {
        const double q = std::max(cmax[0][a] / cmax[1][a], cmax[1][a] / cmax[0][a]);
        worst = std::max(worst, q);
    }
    c.pass = pass && worst <= 2.0;
    c.detail = d + "; max C changes by x" + fmt(worst, 4) + " under resolution doubling (<= 2)";
    c.tables.push_back({"", std::move(t)});
    c.tables.push_back({"fit", std::move(tf)});
    return c;
}

// ---- 10: Strichartz report ----
inline CriterionResult strichartz(std::uint64_t) {
    CriterionResult c{10, "Strichartz report", true, "", 0, 600};
    const auto cfg = preset_config("early");
    Table t({"lambda", "r", "variant", "lhs", "rhs", "ratio"});
    struct Out {
        StrichartzReport a, b;  // (inf, 2), (8, inf)
    };
    auto run = [&](cplx scale, int res) {
        const auto base = cfg.data();
        const DataPair d(base.g0->datum().scaled(scale), base.g1->datum().scaled(scale), cfg.T);
        const ContourEvaluator ev(cfg.params, d, dispersion_eval(1));
        const auto tg = strichartz_t_grid(cfg.T, 0.04, 40 * res, 24 * res);
        const auto n = slice_norms(ev, tg, {2.0, inf}, 0.05 / res);
        return Out{strichartz_from_samples(inf, 2, n[0], d.g0->datum(), d.g1->datum()),
                   strichartz_from_samples(8, inf, n[1], d.g0->datum(), d.g1->datum())};
    };
    const Out base = run(1.0, 1), fine = run(1.0, 2), scaled = run(3.0, 1);
    double worst_ref = 0, worst_scale = 0;
    bool finite = true;
    for (int which = 0; which < 2; ++which) {
        const auto& b = which == 0 ? base.a : base.b;
        const auto& f = which == 0 ? fine.a : fine.b;
        const auto& s = which == 0 ? scaled.a : scaled.b;
        t.add({b.lambda, b.r, std::string("base"), b.lhs, b.rhs, b.ratio});
        t.add({f.lambda, f.r, std::string("refined"), f.lhs, f.rhs, f.ratio});
        t.add({s.lambda, s.r, std::string("scaled_x3"), s.lhs, s.rhs, s.ratio});
        finite = finite && std::isfinite(b.ratio) && b.ratio > 0 && !b.zero_data;
        worst_ref = std::max(worst_ref, std::abs(f.ratio - b.ratio) / b.ratio);
        worst_scale = std::max(worst_scale, std::abs(s.ratio - b.ratio) / b.ratio);
    }
    c.pass = finite && worst_ref <= 0.15 && worst_scale <= 1e-8;
    c.detail = "ratios (inf,2) " + fmt(base.a.ratio, 4) + ", (8,inf) " + fmt(base.b.ratio, 4) + "; refinement change " +
               fmt(worst_ref) + " (<= 0.15), scaling change " + fmt(worst_scale) + " (<= 1e-8)";
    c.tables.push_back({"", std::move(t)});
    return c;
}

using CriterionFn = std::function<CriterionResult(std::uint64_t)>;

inline const std::vector<CriterionFn>& criteria() {
    static const std::vector<CriterionFn> v{invariance, contour, quadrature, vdc,        kernels,
                                            traces,     residual, oracle,    dispersion, strichartz};
    return v;
}

// verify-all files in a directory, excluding timing records, as name -> bytes.
inline std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (!e.is_regular_file() || name.rfind("verify-all", 0) != 0 || name.find(".timing.") != std::string::npos ||
            name.find("-summary_") != std::string::npos)
            continue;
        std::ifstream in(e.path(), std::ios::binary);
        out.push_back({name, std::string(std::istreambuf_iterator<char>(in), {})});
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace acceptance

// Runs criteria 1..10, writes their tables and the manifest into dir.
// `report` is called as each criterion finishes.
inline std::vector<CriterionResult> verify_all(const RunConfig& cfg, const std::filesystem::path& dir,
                                               const std::function<void(const CriterionResult&)>& report = {}) {
    RunOutput out(dir, "verify-all", cfg.echo, cfg.seed);
    std::vector<CriterionResult> res;
    for (const auto& fn : acceptance::criteria()) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn(cfg.seed);
        } catch (const std::exception& e) {
            r.id = int(res.size()) + 1;
            r.name = "criterion " + std::to_string(r.id);
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = r.budget <= 0 || r.seconds < r.budget;
        if (!in_time) r.detail += "; runtime over budget";
        r.pass = r.pass && in_time;
        char tag[8];
        std::snprintf(tag, sizeof tag, "c%02d", r.id);
        for (const auto& [name, table] : r.tables) out.csv(table, name.empty() ? tag : std::string(tag) + "-" + name);
        // the manifest carries no timings, so it stays byte-identical across reruns
        out.check(std::string(tag) + " " + r.name, r.pass || !in_time, r.detail.substr(0, r.detail.find("; runtime")));
        out.stage_time(tag, r.seconds);
        if (report) report(r);
        res.push_back(std::move(r));
    }
    out.finish();
    return res;
}

// Criterion 11: a second run into `dir2` must reproduce every output byte for byte.
inline CriterionResult determinism(const RunConfig& cfg, const std::filesystem::path& dir1,
                                   const std::filesystem::path& dir2) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c{11, "determinism", true, "", 0, 0};
    verify_all(cfg, dir2);
    const auto a = acceptance::snapshot(dir1), b = acceptance::snapshot(dir2);
    std::vector<std::string> diff;
    if (a.size() != b.size()) diff.push_back("file count " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (a[i] != b[i]) diff.push_back(a[i].first);
    c.pass = diff.empty() && !a.empty();
    c.detail = std::to_string(a.size()) + " files compared";
    if (!diff.empty()) c.detail += ", differing: " + diff.front() + (diff.size() > 1 ? " (+more)" : "");
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

inline std::string result_line(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d %-30s %8.1fs  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    return head + r.detail;
}

}  // namespace fokas

// fokas: command-line driver for the half-line boundary operator library.
//
//   fokas <command> --config <path> [--out <dir>] [--seed <u64>]
//
// exit codes: 0 pass, 1 check failure, 2 config error, 3 runtime error

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fokas/fokas.hpp"

using namespace fokas;

namespace {

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

void cmd_contour(const RunConfig& cfg, RunOutput& out) {
    const auto cs = build_contour(cfg.params, cfg.quad.eps);
    Table t({"path_label", "s", "re_k", "im_k", "re_w", "im_w"});
    double worst = 0;
    bool gamma2_ok = true;
    const int n = cfg.contour.samples;
    for (const auto& q : cs.paths) {
        double lo = q.s_lo, hi = q.s_hi;
        if (std::isinf(hi)) hi = lo + cfg.contour.s_span;
        if (std::isinf(lo)) lo = hi - cfg.contour.s_span;
        for (int j = 0; j < n; ++j) {
            const double s = lo + (hi - lo) * (j + 0.5) / n;  // interior points
            const cplx k = q.position(s), w = spectral_w(k, cfg.params);
            t.add({q.label, s, k.real(), k.imag(), w.real(), w.imag()});
            worst = std::max(worst, std::abs(w.real()));
            if (q.label == "gamma2" && cfg.params.alpha == 1.0 && cfg.params.beta == 1.0)
                gamma2_ok = gamma2_ok && s > 0 && s < std::sqrt(0.5);
        }
    }
    out.csv(t);
    out.check("re_w_on_paths", worst <= 1e-12, "max |Re w| " + acceptance::fmt(worst));
    out.check("gamma2_interval", gamma2_ok, "gamma2 rows inside (0, 1/sqrt2)");
}

void cmd_solve(const RunConfig& cfg, RunOutput& out) {
    const ContourEvaluator ev(cfg.params, cfg.data(), cfg.eval_options());
    const auto grid = cfg.grid();
    const auto f = solve_field(ev, grid, true);
    std::vector<std::string> cols{"x", "t", "re_y", "im_y", "abs_y"};
    const std::size_t nc = f.components.size();
    for (const auto& tb : ev.tables()) {
        cols.push_back("re_" + tb.label);
        cols.push_back("im_" + tb.label);
    }
    Table t(cols);
    double mx = 0, gap = 0;
    bool finite = true;
    for (std::size_t j = 0; j < grid.t.size(); ++j)
        for (std::size_t i = 0; i < grid.x.size(); ++i) {
            const cplx y = f.values[j][i];
            std::vector<Cell> row{grid.x[i], grid.t[j], y.real(), y.imag(), std::abs(y)};
            cplx sum{0.0, 0.0};
            for (std::size_t l = 0; l < nc; ++l) {
                const cplx v = f.components[l][j][i];
                row.push_back(v.real());
                row.push_back(v.imag());
                sum += v;
            }
            t.add(std::move(row));
            mx = std::max(mx, std::abs(y));
            gap = std::max(gap, std::abs(sum - y));
            finite = finite && std::isfinite(y.real()) && std::isfinite(y.imag());
        }
    out.csv(t);
    const double tol = cfg.quad.tol * ev.data_scale();
    out.check("finite", finite, "all field values finite");
    out.check("component_sum", gap <= 10 * tol, "max |sum of components - y| " + acceptance::fmt(gap));
    if (ev.data().is_zero()) out.check("zero_data", mx <= 10 * tol, "max |y| " + acceptance::fmt(mx));
}

void cmd_kernels(const RunConfig& cfg, RunOutput& out) {
    const auto& k = cfg.kernels;
    const auto ys = linspace(k.y_min, k.y_max, k.n_y);
    Table t({"ell", "y", "x", "t", "re_K", "im_K", "abs_K"});
    const std::size_t nt = k.t.size();
    std::vector<std::vector<cplx>> vals(5 * nt);
    parallel_for(vals.size(), [&](std::size_t q) {
        const int ell = int(q / nt) + 1;
        for (double y : ys) vals[q].push_back(kernel_K(ell, y, k.x, k.t[q % nt]));
    });
    double k1 = 0, var = 0;
    for (int ell = 1; ell <= 5; ++ell) {
        double mx = 0, mn = inf;
        for (std::size_t j = 0; j < nt; ++j) {
            const auto& v = vals[(ell - 1) * nt + j];
            double sup = 0;
            for (std::size_t i = 0; i < ys.size(); ++i) {
                t.add({(long long)ell, ys[i], k.x, k.t[j], v[i].real(), v[i].imag(), std::abs(v[i])});
                sup = std::max(sup, std::abs(v[i]));
                if (ell == 1) k1 = std::max(k1, std::abs(v[i]) * k.x);
            }
            mx = std::max(mx, std::pow(k.t[j], 0.25) * sup);
            mn = std::min(mn, std::pow(k.t[j], 0.25) * sup);
        }
        var = std::max(var, (mx - mn) / mx);
    }
    out.csv(t);
    out.check("k1_bound", k1 <= 1.0 + 1e-8, "max x|K1| " + acceptance::fmt(k1) + " (<= 1)");
    if (nt > 1) out.check("envelope", var <= 0.25, "max variation of sup t^{1/4}|K| " + acceptance::fmt(var));
}

void cmd_psi(const RunConfig& cfg, RunOutput& out) {
    const auto data = cfg.data();
    const auto specs = make_psi_specs(data, cfg.params, cfg.quad.eps);
    Table th({"i", "s", "re_hat", "im_hat"});
    for (const auto& s : specs)
        for (std::size_t j = 0; j < s.s_grid.size(); ++j)
            th.add({(long long)s.index, s.s_grid[j], s.hat_values[j].real(), s.hat_values[j].imag()});
    out.csv(th, "hat");
    const auto ys = linspace(-cfg.psi.y_max, cfg.psi.y_max, cfg.psi.n_y);
    Table tp({"i", "y", "re_psi", "im_psi"});
    for (const auto& s : specs) {
        const auto v = psi_from_hat(s, ys);
        for (std::size_t j = 0; j < ys.size(); ++j) tp.add({(long long)s.index, ys[j], v[j].real(), v[j].imag()});
    }
    out.csv(tp);
    struct Job {
        std::size_t spec;
        double rp;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < specs.size(); ++i)
        for (double rp : cfg.psi.r_prime) jobs.push_back({i, rp});
    std::vector<PsiNorm> norms(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t q) {
        norms[q] = psi_norm(specs[jobs[q].spec], jobs[q].rp, cfg.psi.Y, cfg.psi.refine);
    });
    json nj = json::array();
    double parseval = 0;
    for (std::size_t q = 0; q < jobs.size(); ++q) {
        const auto& n = norms[q];
        nj.push_back({{"i", n.index}, {"r_prime", n.r_prime}, {"norm", n.value}, {"converged", n.converged}});
        if (n.r_prime == 2.0) {
            const double ref = psi_hat_l2(specs[jobs[q].spec]) / std::sqrt(2 * pi);
            if (ref > 0) parseval = std::max(parseval, std::abs(n.value - ref) / ref);
        }
    }
    out.json(nj, "norms");
    out.check("parseval", parseval <= 1e-6, "max relative Parseval gap " + acceptance::fmt(parseval));
}

void cmd_vdc(const RunConfig& cfg, RunOutput& out) {
    const auto& v = cfg.vdc;
    struct Pt {
        OscKind kind;
        double s, y, t;
    };
    std::vector<Pt> pts;
    const auto S = linspace(v.s_lo, v.s_hi, v.n), Y = linspace(v.shift_lo, v.shift_hi, v.n), T = linspace(v.t_lo, v.t_hi, v.n);
    for (OscKind kind : {OscKind::van, OscKind::van2})
        for (double s : S)
            for (double y : Y)
                for (double t : T) pts.push_back({kind, kind == OscKind::van ? s : inv_sqrt2 + s, y, t});
    std::vector<double> absI(pts.size());
    std::vector<VdcCertificate> cert(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        absI[i] = std::abs(oscillatory_I(pts[i].kind, pts[i].s, pts[i].y, pts[i].t));
        cert[i] = vdc_certificate(pts[i].kind, pts[i].s, pts[i].y, pts[i].t);
    });
    Table t({"kind", "s", "y_or_omega", "t", "abs_I", "certificate_bound", "case_tag", "pass"});
    std::size_t ok = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool p = absI[i] <= cert[i].total_bound;
        ok += p;
        t.add({std::string(to_string(pts[i].kind)), pts[i].s, pts[i].y, pts[i].t, absI[i], cert[i].total_bound,
               cert[i].case_tag, (long long)p});
    }
    out.csv(t);
    out.check("dominance", ok == pts.size(), std::to_string(ok) + "/" + std::to_string(pts.size()) + " points dominated");
}

void cmd_dispersion(const RunConfig& cfg, RunOutput& out) {
    EvalOptions o = cfg.eval_options();
    o.tol = cfg.dispersion.tol;
    o.x_max = cfg.dispersion.x_max;
    o.panel_phase = cfg.dispersion.panel_phase;
    o.max_mx = 0;
    o.max_mt = 0;
    const ContourEvaluator ev(cfg.params, cfg.data(), o);
    DispersionOptions d;
    d.n_t = cfg.dispersion.n_t;
    d.t_lo = cfg.dispersion.t_lo;
    d.t_hi = cfg.dispersion.t_hi;
    d.dx = cfg.dispersion.dx;
    d.psi_Y = cfg.psi.Y;
    d.psi_refine = cfg.psi.refine;
    const auto st = dispersion_study(ev, d);
    Table t({"t", "r", "norm", "psi_sum", "ratio"});
    for (const auto& r : st.rows) t.add({r.t, r.r, r.norm, r.psi_sum, r.ratio});
    out.csv(t);
    json s = json::array();
    for (const auto& f : st.fits) {
        json r = std::isinf(f.r) ? json("inf") : json(f.r);
        s.push_back({{"r", r}, {"fitted_slope", f.fit.slope}, {"slope_bound", f.slope_bound}, {"pass", f.pass},
                     {"ratio_max", f.ratio_max}, {"ratio_min", f.ratio_min}, {"psi_converged", f.psi_converged}});
        out.check("r=" + r.dump(), f.pass,
                  "slope " + acceptance::fmt(f.fit.slope) + " bound " + acceptance::fmt(f.slope_bound) + ", max/min C " +
                      acceptance::fmt(f.ratio_max / f.ratio_min));
    }
    out.json(s, "summary");
}

void cmd_oracle(const RunConfig& cfg, RunOutput& out) {
    const auto data = cfg.data();
    FDOptions fo;
    fo.t_out = cfg.oracle.t_out;
    const auto fd = fd_solve(cfg.params, data.g0->datum(), data.g1->datum(), cfg.fd_grid(), fo);
    Table tf({"x", "t", "re_y", "im_y"});
    for (std::size_t j = 0; j < fd.t_out.size(); ++j)
        for (std::size_t i = 0; i < fd.x.size(); ++i)
            tf.add({fd.x[i], fd.t_out[j], fd.values[j][i].real(), fd.values[j][i].imag()});
    out.csv(tf);
    EvalOptions o = cfg.eval_options();
    o.x_max = std::max(o.x_max, cfg.oracle.L);
    const ContourEvaluator ev(cfg.params, data, o);
    const double xs = std::min(0.1, cfg.oracle.L / 10);
    const auto field = solve_field(ev, EvaluationGrid::graded(1e-3, xs, cfg.oracle.L, 30, cfg.oracle.Nx, cfg.oracle.t_out));
    const auto cmp = compare_fields(field, fd);
    json rep;
    rep["leakage"] = fd.leakage;
    rep["leakage_ok"] = fd.leakage_ok;
    json rows = json::array();
    for (std::size_t j = 0; j < cmp.t.size(); ++j)
        rows.push_back({{"t", cmp.t[j]}, {"rel_l2", cmp.rel_l2[j]}, {"max_abs", cmp.max_abs[j]}});
    rep["fields"] = rows;
    const double tg = fd.t_out.back();
    const auto& ks = acceptance::global_relation_k();
    std::vector<GlobalRelation> gr(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) { gr[i] = global_relation(fd, cfg.params, ks[i], tg); });
    json g = json::array();
    double worst = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        g.push_back({{"re_k", ks[i].real()}, {"im_k", ks[i].imag()}, {"t", tg}, {"residual", gr[i].residual}});
        worst = std::max(worst, gr[i].residual);
    }
    rep["global_relation"] = g;
    out.json(rep, "report");
    out.check("field_agreement", cmp.worst_rel_l2 <= 5e-3, "worst rel L2 " + acceptance::fmt(cmp.worst_rel_l2));
    out.check("global_relation", worst <= 5e-3, "worst residual " + acceptance::fmt(worst));
}

int cmd_verify_all(const RunConfig& cfg) {
    const std::filesystem::path dir = cfg.out_dir;
    bool all = true;
    std::vector<CriterionResult> res = verify_all(cfg, dir, [&](const CriterionResult& r) {
        std::cout << result_line(r) << std::endl;
        all = all && r.pass;
    });
    const auto c11 = determinism(cfg, dir, dir / "rerun");
    std::cout << result_line(c11) << std::endl;
    all = all && c11.pass;
    res.push_back(c11);
    json s = json::array();
    for (const auto& r : res) s.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}});
    write_atomic(dir / ("verify-all-summary_" + config_hash(cfg.echo) + ".json"), s.dump(2) + "\n");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fokas boundary operator for the fourth-order Schrodinger equation on the half line"};
    app.require_subcommand(1, 1);
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    const std::vector<std::string> commands{"contour", "solve", "kernels", "psi", "vdc", "dispersion", "oracle", "verify-all"};
    std::map<std::string, CLI::Option*> seed_opts;
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        seed_opts[name] = sub->add_option("--seed", seed, "seed for randomized sweeps");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_opts[cmd]->count() > 0) cfg.seed = seed;
    cfg.echo["output"]["dir"] = cfg.out_dir;
    cfg.echo["seed"] = cfg.seed;

    try {
        if (cmd == "verify-all") return cmd_verify_all(cfg);
        RunOutput out(cfg.out_dir, cmd, cfg.echo, cfg.seed);
        const auto t0 = std::chrono::steady_clock::now();
        if (cmd == "contour") cmd_contour(cfg, out);
        else if (cmd == "solve") cmd_solve(cfg, out);
        else if (cmd == "kernels") cmd_kernels(cfg, out);
        else if (cmd == "psi") cmd_psi(cfg, out);
        else if (cmd == "vdc") cmd_vdc(cfg, out);
        else if (cmd == "dispersion") cmd_dispersion(cfg, out);
        else if (cmd == "oracle") cmd_oracle(cfg, out);
        out.stage_time(cmd, since(t0));
        out.finish();
        for (const auto& c : out.checks())
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  " << c.detail << "\n";
        std::cout << "outputs: " << out.path_for("", ".csv").parent_path().string() << " (" << out.hash() << ")\n";
        return out.all_pass() ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

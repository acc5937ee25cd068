#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fokas/complex_plane.hpp"
#include "fokas/oscillatory.hpp"
#include "fokas/parallel.hpp"
#include "fokas/quadrature.hpp"
#include "fokas/transforms.hpp"

namespace fokas {

struct EvalOptions {
    double tol = 1e-8;  // target accuracy, in units of max(sup|g0|, sup|g1|)
    double x_max = 20.0;  // node tables resolve x in [0, x_max]
    double t_max = -1.0;  // defaults to T
    double panel_phase = 4 * pi;  // max phase swing per Gauss panel
    double h_max = 0.5;           // max panel length in the path parameter
    int max_mx = 4, max_mt = 1;   // derivative orders the truncation must cover
    double min_extent = 2.0;      // never truncate an infinite path before |u - u0| reaches this
    double g_floor = 1e-13;       // |G| below this fraction of its peak is transform roundoff
    double eps = default_epsilon;
};

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gauss nodes of one contour piece with the G values folded into the weights:
// W_piece(x, t) = sum_n c_n exp(i k_n x - w_n t).
struct PathTable {
    std::string label;
    std::vector<cplx> k, w, c;
    int panels = 0;
    double u_end = 0.0;  // truncation point (path parameter)
};

namespace detail {

constexpr int eval_gl = 20;

struct PanelSpec {
    double a, b;
    int singular;  // 0: regular, -1: sqrt point at a, +1: sqrt point at b
};

}  // namespace detail

// Contour integral W = alpha int_{dD+} E(k; x, t) G(k; T) dk with
// E = -(1/2pi) e^{ikx - w(k)t}, on cached node tables.
class ContourEvaluator {
public:
    ContourEvaluator(const SpectralParams& p, const DataPair& d, EvalOptions opt = {})
        : p_(p), data_(d), opt_(opt), cs_(build_contour(p, opt.eps)) {
        if (opt_.t_max <= 0) opt_.t_max = d.T;
        if (!d.is_zero()) {
            const double m = std::max(d.g0->datum().max_abs(), d.g1->datum().max_abs());
            if (m > 0) data_scale_ = m;
        }
        tables_.resize(cs_.paths.size());
        for (std::size_t i = 0; i < cs_.paths.size(); ++i) tables_[i] = build_table(i, 1.0);
    }

    const ContourSet& contour() const { return cs_; }
    const SpectralParams& params() const { return p_; }
    const EvalOptions& options() const { return opt_; }
    const std::vector<PathTable>& tables() const { return tables_; }
    const DataPair& data() const { return data_; }
    double data_scale() const { return data_scale_; }
    std::size_t node_count() const {
        std::size_t n = 0;
        for (const auto& t : tables_) n += t.k.size();
        return n;
    }

    // derivative (d/dx)^mx (d/dt)^mt via the factor (ik)^mx (-w)^mt
    cplx component(std::size_t ell, double x, double t, int mx = 0, int mt = 0) const {
        check_point(x, t);
        return sum_table(tables_.at(ell), x, t, mx, mt);
    }

    cplx evaluate(double x, double t, int mx = 0, int mt = 0) const {
        check_point(x, t);
        cplx s{0.0, 0.0};
        for (const auto& tb : tables_) s += sum_table(tb, x, t, mx, mt);
        return s;
    }

    std::vector<cplx> components(double x, double t, int mx = 0, int mt = 0) const {
        check_point(x, t);
        std::vector<cplx> out;
        for (const auto& tb : tables_) out.push_back(sum_table(tb, x, t, mx, mt));
        return out;
    }

    // Values along a uniform x sweep x0 + j dx at fixed t, using the
    // multiplicative recurrence e^{ik(x + dx)} = e^{ikx} e^{ik dx}. Nodes damped
    // by e^{-Im k x} below 1e-17 of the table mass are dropped per block.
    std::vector<cplx> sweep_x(double x0, double dx, int n, double t, int mx = 0, int mt = 0) const {
        std::vector<cplx> out(std::size_t(std::max(n, 0)), cplx(0.0, 0.0));
        if (n <= 0) return out;
        check_point(x0, t);
        check_point(x0 + dx * (n - 1), t);
        constexpr int block = 64;
        const cplx I(0, 1);
        for (const auto& tb : tables_) {
            const std::size_t m = tb.k.size();
            std::vector<cplx> amp(m), step(m);
            double mass = 0.0;
            for (std::size_t q = 0; q < m; ++q) {
                amp[q] = tb.c[q] * std::exp(-tb.w[q] * t) * factor(tb.k[q], tb.w[q], mx, mt);
                step[q] = std::exp(I * tb.k[q] * dx);
                mass += std::abs(amp[q]);
            }
            std::vector<std::size_t> active;
            std::vector<cplx> cur;
            for (int j0 = 0; j0 < n; j0 += block) {
                const double xb = x0 + dx * j0, xe = x0 + dx * std::min(n - 1, j0 + block - 1);
                active.clear();
                cur.clear();
                for (std::size_t q = 0; q < m; ++q) {
                    const double damp = std::exp(-tb.k[q].imag() * std::min(xb, xe));
                    if (std::abs(amp[q]) * damp > 1e-17 * mass) {
                        active.push_back(q);
                        cur.push_back(amp[q] * std::exp(I * tb.k[q] * xb));
                    }
                }
                for (int j = j0; j < std::min(n, j0 + block); ++j) {
                    cplx s{0.0, 0.0};
                    for (std::size_t a = 0; a < active.size(); ++a) {
                        s += cur[a];
                        cur[a] *= step[active[a]];
                    }
                    out[std::size_t(j)] += s;
                }
            }
        }
        return out;
    }

    // |W(fine) - W(refined tables)| at a probe point; builds refined tables on first use.
    double error_estimate(double x, double t, int mx = 0, int mt = 0) const {
        if (fine_.empty()) {
            fine_.resize(cs_.paths.size());
            for (std::size_t i = 0; i < cs_.paths.size(); ++i) fine_[i] = build_table(i, 0.5);
        }
        cplx a{0.0, 0.0}, b{0.0, 0.0};
        for (const auto& tb : tables_) a += sum_table(tb, x, t, mx, mt);
        for (const auto& tb : fine_) b += sum_table(tb, x, t, mx, mt);
        return std::abs(a - b);
    }

    static cplx factor(cplx k, cplx w, int mx, int mt) {
        cplx f{1.0, 0.0};
        const cplx ik = cplx(0, 1) * k;
        for (int i = 0; i < mx; ++i) f *= ik;
        for (int i = 0; i < mt; ++i) f *= -w;
        return f;
    }

private:
    SpectralParams p_;
    DataPair data_;
    EvalOptions opt_;
    ContourSet cs_;
    std::vector<PathTable> tables_;
    double data_scale_ = 1.0;
    mutable std::vector<PathTable> fine_;

    void check_point(double x, double t) const {
        if (!(x >= 0) || x > opt_.x_max * (1 + 1e-12))
            throw std::invalid_argument("evaluate: x outside [0, x_max] of the node tables");
        if (!(t > 0) || t > opt_.t_max * (1 + 1e-12)) throw std::invalid_argument("evaluate: t outside (0, t_max]");
    }

    cplx sum_table(const PathTable& tb, double x, double t, int mx, int mt) const {
        const cplx I(0, 1);
        cplx s{0.0, 0.0};
        for (std::size_t q = 0; q < tb.k.size(); ++q) {
            cplx v = tb.c[q] * std::exp(I * tb.k[q] * x - tb.w[q] * t);
            if (mx || mt) v *= factor(tb.k[q], tb.w[q], mx, mt);
            s += v;
        }
        return s;
    }

    // phase swing rate of the integrand per unit path parameter
    double rate(const ContourPath& q, double u) const {
        const cplx k = q.qpos(u), dk = q.qvel(u);
        const cplx dw = cplx(0, -1) * (4.0 * p_.alpha * k * k * k - 2.0 * p_.beta * k);
        const double support_hi = std::max(data_.g0->datum().b, data_.g1->datum().b);
        return std::abs(dk) * (opt_.x_max + std::abs(dw) * (opt_.t_max + support_hi)) + 1.0;
    }

    double panel_len(const ContourPath& q, double u, double dir, double scale) const {
        double h = std::min(opt_.h_max, opt_.panel_phase / rate(q, u)) * scale;
        for (int it = 0; it < 3; ++it) h = std::min(h, scale * opt_.panel_phase / rate(q, u + dir * h));
        return h;
    }

    struct PanelStats {
        double env = 0.0;    // sum_n |c_n| (1+|k|)^mx (1+|w|)^mt
        double g_max = 0.0;  // max_n |G|
    };

    PanelStats add_panel(PathTable& tb, const ContourPath& q, int orient, const detail::PanelSpec& ps) const {
        const auto& r = detail::gl_rule<detail::eval_gl>();
        const double pref = p_.alpha * orient * (-1.0 / (2 * pi));
        PanelStats st;
        std::array<cplx, detail::eval_gl> ks, gs, cs;
        parallel_for(detail::eval_gl, [&](std::size_t n) {
            double u, du;
            const double v = 0.5 * (1.0 + r.x[n]), wv = 0.5 * r.w[n];
            const double h = ps.b - ps.a;
            if (ps.singular == -1) {
                u = ps.a + h * v * v;
                du = 2 * h * v * wv;
            } else if (ps.singular == +1) {
                u = ps.b - h * v * v;
                du = 2 * h * v * wv;
            } else {
                u = ps.a + h * v;
                du = h * wv;
            }
            ks[n] = q.qpos(u);
            gs[n] = spectral_G(ks[n], data_, data_.T, p_, q.cut);
            cs[n] = pref * gs[n] * q.qvel(u) * du;
        });
        for (int n = 0; n < detail::eval_gl; ++n) {
            const cplx w = spectral_w(ks[n], p_);
            tb.k.push_back(ks[n]);
            tb.w.push_back(cplx(0.0, w.imag()));  // Re w = 0 on the contour
            tb.c.push_back(cs[n]);
            st.env += std::abs(cs[n]) * std::pow(1.0 + std::abs(ks[n]), opt_.max_mx) *
                      std::pow(1.0 + std::abs(w), opt_.max_mt);
            st.g_max = std::max(st.g_max, std::abs(gs[n]));
        }
        ++tb.panels;
        return st;
    }

    // Panels on [u0, u1] (u1 may be +-inf) with sqrt points at the ends flagged.
    void fill_segment(PathTable& tb, const ContourPath& q, int orient, double u0, double u1, bool sing0, bool sing1,
                      double scale) const {
        const double dir = (u1 > u0) ? 1.0 : -1.0;
        const bool infinite = std::isinf(u1);
        // relative to the data size, so tables of scaled data truncate at the same node
        const double thresh = opt_.tol * 1e-3 * data_scale_;
        double pos = u0, g_peak = 0.0;
        int quiet = 0;
        bool first = true;
        for (int guard = 0; guard < 200000; ++guard) {
            double h = panel_len(q, pos, dir, scale);
            bool last = false;
            if (!infinite && std::abs(u1 - pos) <= h * 1.0000001) {
                h = std::abs(u1 - pos);
                last = true;
            }
            const double a = std::min(pos, pos + dir * h), b = std::max(pos, pos + dir * h);
            int sing = 0;
            if (first && sing0) sing = (dir > 0) ? -1 : +1;
            if (last && sing1) sing = (dir > 0) ? +1 : -1;
            if (first && last && sing0 && sing1) {
                // split so that each half carries one sqrt point
                const double m = 0.5 * (a + b);
                add_panel(tb, q, orient, {a, m, -1});
                add_panel(tb, q, orient, {m, b, +1});
                tb.u_end = u1;
                return;
            }
            // every panel integrates over [a, b] in increasing u; orient carries the direction
            const PanelStats st = add_panel(tb, q, orient, {a, b, sing});
            g_peak = std::max(g_peak, st.g_max);
            first = false;
            pos += dir * h;
            if (last) {
                tb.u_end = u1;
                return;
            }
            if (infinite) {
                const bool small = st.env < thresh || st.g_max <= opt_.g_floor * g_peak;
                quiet = small ? quiet + 1 : 0;
                if (quiet >= 3 && std::abs(pos - u0) >= opt_.min_extent) {
                    tb.u_end = pos;
                    return;
                }
            }
        }
        throw EvaluationError("contour truncation failed on " + q.label + ": G does not decay");
    }

    PathTable build_table(std::size_t i, double scale) const {
        const ContourPath& q = cs_.paths[i];
        const int orient = cs_.orientation[i];
        PathTable tb;
        tb.label = q.label;
        if (data_.is_zero()) return tb;
        // finite end and march direction
        double u0, u1;
        if (std::isinf(q.u_lo) && std::isinf(q.u_hi)) throw EvaluationError("doubly infinite path");
        if (std::isinf(q.u_lo)) {
            u0 = q.u_hi;
            u1 = -inf;
        } else {
            u0 = q.u_lo;
            u1 = q.u_hi;
        }
        std::vector<double> cuts;
        for (double s : q.singular_u)
            if ((s - u0) * (std::isinf(u1) ? (u1 > 0 ? 1.0 : -1.0) : (u1 - u0)) > 0) cuts.push_back(s);
        const double dir = (u1 > u0) ? 1.0 : -1.0;
        std::sort(cuts.begin(), cuts.end(), [dir](double a, double b) { return dir * a < dir * b; });
        double start = u0;
        bool sing_start = false;
        for (double c : cuts) {
            if (std::isinf(u1) || dir * c < dir * u1) {
                fill_segment(tb, q, orient, start, c, sing_start, true, scale);
                start = c;
                sing_start = true;
            }
        }
        fill_segment(tb, q, orient, start, u1, sing_start, false, scale);
        return tb;
    }
};


inline cplx evaluate_point(double x, double t, const BoundaryDatum& g0, const BoundaryDatum& g1,
                           const SpectralParams& p, double tol = 1e-8, double eps = default_epsilon) {
    EvalOptions o;
    o.tol = tol;
    o.eps = eps;
    o.x_max = std::max(o.x_max, x);
    return ContourEvaluator(p, DataPair(g0, g1, g0.T), o).evaluate(x, t);
}

inline cplx evaluate_component(int ell, double x, double t, const BoundaryDatum& g0, const BoundaryDatum& g1,
                               const SpectralParams& p, double tol = 1e-8, double eps = default_epsilon) {
    EvalOptions o;
    o.tol = tol;
    o.eps = eps;
    o.x_max = std::max(o.x_max, x);
    ContourEvaluator ev(p, DataPair(g0, g1, g0.T), o);
    if (ell < 1 || std::size_t(ell) > ev.tables().size()) throw std::invalid_argument("evaluate_component: no such path");
    return ev.component(std::size_t(ell - 1), x, t);
}

// (d/dx)^mx (d/dt)^mt W at (x, t)
inline cplx derivative_field(const ContourEvaluator& ev, double x, double t, int mx, int mt) {
    if (mx < 0 || mt < 0 || mx > ev.options().max_mx || mt > ev.options().max_mt)
        throw std::invalid_argument("derivative_field: order outside the covered range");
    return ev.evaluate(x, t, mx, mt);
}

// residual y_t + P y with P = -i(alpha d^4 + beta d^2)
inline cplx pde_residual(const ContourEvaluator& ev, double x, double t) {
    const auto& p = ev.params();
    return ev.evaluate(x, t, 0, 1) -
           cplx(0, 1) * (p.alpha * ev.evaluate(x, t, 4, 0) + p.beta * ev.evaluate(x, t, 2, 0));
}

// ---- grids and fields ----

struct EvaluationGrid {
    std::vector<double> x, t;

    // geometric from x_min to x_split, uniform from x_split to x_max
    static EvaluationGrid graded(double x_min, double x_split, double x_max, int n_geo, int n_lin,
                                 std::vector<double> t_nodes) {
        if (!(x_min > 0 && x_split > x_min && x_max > x_split && n_geo >= 2 && n_lin >= 1))
            throw std::invalid_argument("grids.x: need 0 < x_min < x_split < x_max");
        EvaluationGrid g;
        const double r = std::pow(x_split / x_min, 1.0 / (n_geo - 1));
        for (int i = 0; i < n_geo; ++i) g.x.push_back(x_min * std::pow(r, i));
        g.x.back() = x_split;
        for (int i = 1; i <= n_lin; ++i) g.x.push_back(x_split + (x_max - x_split) * i / n_lin);
        g.t = std::move(t_nodes);
        g.check();
        return g;
    }

    static std::vector<double> linear_t(double t0, double t1, int n) {
        std::vector<double> v;
        for (int i = 0; i < n; ++i) v.push_back(n == 1 ? t1 : t0 + (t1 - t0) * i / (n - 1));
        return v;
    }

    static std::vector<double> log_t(double t0, double t1, int n) {
        std::vector<double> v;
        for (int i = 0; i < n; ++i) v.push_back(n == 1 ? t1 : t0 * std::pow(t1 / t0, double(i) / (n - 1)));
        return v;
    }

    void check(double T = inf) const {
        if (x.empty() || t.empty()) throw std::invalid_argument("grids: empty grid");
        if (!(x.front() > 0)) throw std::invalid_argument("grids.x: first node must be positive");
        if (!(t.front() > 0)) throw std::invalid_argument("grids.t: nodes must be positive");
        for (std::size_t i = 1; i < x.size(); ++i)
            if (!(x[i] > x[i - 1])) throw std::invalid_argument("grids.x: nodes must increase");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (!(t[i] > t[i - 1])) throw std::invalid_argument("grids.t: nodes must increase");
        if (t.back() > T * (1 + 1e-12)) throw std::invalid_argument("grids.t: nodes must not exceed T");
    }
};

struct SolutionField {
    SpectralParams params;
    EvaluationGrid grid;
    double tol = 1e-6;
    std::vector<std::vector<cplx>> values;                  // values[j][i] = y(x_i, t_j)
    std::vector<std::vector<std::vector<cplx>>> components;  // components[ell][j][i], optional

    const std::vector<cplx>& at_t(std::size_t j) const { return values.at(j); }
};

inline SolutionField solve_field(const ContourEvaluator& ev, const EvaluationGrid& grid, bool with_components = false) {
    grid.check(ev.options().t_max);
    SolutionField f;
    f.params = ev.params();
    f.grid = grid;
    f.tol = ev.options().tol;
    const std::size_t nx = grid.x.size(), nt = grid.t.size(), np = ev.tables().size();
    f.values.assign(nt, std::vector<cplx>(nx));
    if (with_components) f.components.assign(np, std::vector<std::vector<cplx>>(nt, std::vector<cplx>(nx)));
    parallel_for(nx * nt, [&](std::size_t q) {
        const std::size_t j = q / nx, i = q % nx;
        const auto c = ev.components(grid.x[i], grid.t[j]);
        cplx s{0.0, 0.0};
        for (std::size_t l = 0; l < np; ++l) {
            s += c[l];
            if (with_components) f.components[l][j][i] = c[l];
        }
        f.values[j][i] = s;
    });
    return f;
}

// ---- trace recovery ----

struct TraceRow {
    double t, err0, err1;
};

struct TraceReport {
    std::vector<TraceRow> rows;
    double max_err0 = 0, max_err1 = 0;  // absolute
    double max_g0 = 0, max_g1 = 0;
    double rel0() const { return max_g0 > 0 ? max_err0 / max_g0 : max_err0; }
    double rel1() const { return max_g1 > 0 ? max_err1 / max_g1 : max_err1; }
};

inline TraceReport trace_report(const ContourEvaluator& ev, const std::vector<double>& t_grid, double x_min) {
    if (!(x_min >= 1e-4 && x_min <= 1e-2)) throw std::invalid_argument("trace_report: x_min must lie in [1e-4, 1e-2]");
    const auto& g0 = ev.data().g0->datum();
    const auto& g1 = ev.data().g1->datum();
    TraceReport r;
    r.rows.resize(t_grid.size());
    parallel_for(t_grid.size(), [&](std::size_t j) {
        const double t = t_grid[j];
        r.rows[j] = {t, std::abs(ev.evaluate(x_min, t) - g0(t)), std::abs(ev.evaluate(x_min, t, 1) - g1(t))};
    });
    for (const auto& row : r.rows) {
        r.max_err0 = std::max(r.max_err0, row.err0);
        r.max_err1 = std::max(r.max_err1, row.err1);
        r.max_g0 = std::max(r.max_g0, std::abs(g0(row.t)));
        r.max_g1 = std::max(r.max_g1, std::abs(g1(row.t)));
    }
    return r;
}

// ---- kernels K_1..K_5 (alpha = beta = 1) ----

namespace detail {

// psi(s0 + v^2) as a function of v
struct SqrtShiftPhase {
    PhaseSpec base;
    double s0;
    double operator()(double v) const { return base(s0 + v * v); }
    double d1(double v) const { return base.d1(s0 + v * v) * 2 * v; }
};

// int_a^inf A(s) e^{i psi(s)} ds: Filon up to S past every stationary point, two IBPs beyond.
inline QuadResult osc_half_line(const Amplitude3& A, const PhaseSpec& ph, double a, double tol) {
    const auto st = ph.stationary(a, 1e6);
    double S = a + 1.0;
    for (double r : st) S = std::max(S, 1.5 * r + 1.0);
    QuadResult tail;
    for (int it = 0;; ++it) {
        if (it > 80) throw QuadratureError("kernel tail did not converge");
        tail = ibp_tail(A, ph, S, +1, 0.5 * tol);
        if (tail.error_estimate <= 0.5 * tol) break;
        S *= 1.25;
    }
    auto r = filon_segment(A.f, ph, a, S, 0.5 * tol, st);
    r.value += tail.value;
    r.error_estimate += tail.error_estimate;
    return r;
}

}  // namespace detail

// K1(y;x,t) = int_0^inf e^{-sx + i(s^4+s^2)t - isy} ds
// K2(y;x,t) = -(1/2pi) int_R e^{i(s^4-s^2)t + is(x-y)} ds
// K3(y;x,t) = int_{1/sqrt2}^inf e^{is(x-y) - i(4s^4-2s^2+1/4)t - m x} ds, m = (s^2-1/2)^{1/2}
// K4(y;x,t) = K3 with is(x-y) replaced by -is(x+y)
// K5(y;x,t) = -(1/2pi) int_{-inf}^{-1/sqrt2} e^{is(x-y) + i(s^4-s^2)t} ds
inline QuadResult kernel_K_q(int ell, double y, double x, double t, double tol = 1e-10) {
    if (!(t > 0)) throw std::invalid_argument("kernel_K: t must be positive");
    if (!(x >= 0)) throw std::invalid_argument("kernel_K: x must be >= 0");
    switch (ell) {
    case 1: {
        const PhaseSpec ph = model_phase(OscKind::van, y, t);
        Amplitude3 A{[x](double s) { return cplx(std::exp(-s * x), 0.0); },
                     [x](double s) { return cplx(-x * std::exp(-s * x), 0.0); },
                     [x](double s) { return cplx(x * x * std::exp(-s * x), 0.0); }};
        return detail::osc_half_line(A, ph, 0.0, tol);
    }
    case 2: {
        auto r = oscillatory_I_q(OscKind::benartzi, 0.0, x - y, t, tol * 2 * pi);
        r.value *= -1.0 / (2 * pi);
        r.error_estimate /= 2 * pi;
        return r;
    }
    case 3:
    case 4: {
        const double c = 0.5, s0 = std::sqrt(c), d = 0.5;
        const double om = (ell == 3) ? x - y : -(x + y);
        const PhaseSpec ph = model_phase(OscKind::van2, om, t);
        // [s0, s0 + d] in v = (s - s0)^{1/2}, which removes the square-root point of m
        const detail::SqrtShiftPhase sp{ph, s0};
        auto amp_v = [x, s0](double v) { return cplx(2 * v * std::exp(-x * v * std::sqrt(2 * s0 + v * v)), 0.0); };
        std::vector<double> brk;
        for (double r : ph.stationary(s0, s0 + d)) brk.push_back(std::sqrt(r - s0));
        auto head = filon_segment(amp_v, sp, 0.0, std::sqrt(d), 0.5 * tol, brk);
        auto m = [c](double s) { return std::sqrt(s * s - c); };
        Amplitude3 A{[x, m](double s) { return cplx(std::exp(-x * m(s)), 0.0); },
                     [x, m](double s) { return cplx(-x * s / m(s) * std::exp(-x * m(s)), 0.0); },
                     [x, m, c](double s) {
                         const double mm = m(s), m1 = s / mm, m2 = -c / (mm * mm * mm);
                         return cplx((x * x * m1 * m1 - x * m2) * std::exp(-x * mm), 0.0);
                     }};
        auto r = detail::osc_half_line(A, ph, s0 + d, 0.5 * tol);
        r.value += head.value;
        r.error_estimate += head.error_estimate;
        r.panels_used += head.panels_used;
        return r;
    }
    case 5: {
        // s -> -s: int_{1/sqrt2}^inf e^{-is(x-y) + i(s^4-s^2)t} ds
        PhaseSpec ph;
        ph.c = {0.0, -(x - y) / t, -1.0, 0.0, 1.0};
        ph.t = t;
        Amplitude3 A{[](double) { return cplx(1.0, 0.0); }, [](double) { return cplx(0.0, 0.0); },
                     [](double) { return cplx(0.0, 0.0); }};
        auto r = detail::osc_half_line(A, ph, std::sqrt(0.5), tol * 2 * pi);
        r.value *= -1.0 / (2 * pi);
        r.error_estimate /= 2 * pi;
        return r;
    }
    default: throw std::invalid_argument("kernel_K: ell must be 1..5");
    }
}

inline cplx kernel_K(int ell, double y, double x, double t) { return kernel_K_q(ell, y, x, t).value; }

}  // namespace fokas

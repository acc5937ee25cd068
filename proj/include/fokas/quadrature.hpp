#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fokas/complex_plane.hpp"

namespace fokas {

struct QuadResult {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    int panels_used = 0;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule, full symmetric tables.
struct GK15 {
    std::array<double, 15> x{}, wk{}, wg{};
    GK15() {
        using K = boost::math::quadrature::gauss_kronrod<double, 15>;
        using G = boost::math::quadrature::gauss<double, 7>;
        const auto& ax = K::abscissa();
        const auto& kw = K::weights();
        const auto& gw = G::weights();
        for (int i = 0; i < 8; ++i) {
            x[7 + i] = ax[i];
            x[7 - i] = -ax[i];
            wk[7 + i] = wk[7 - i] = kw[i];
            const double g = (i % 2 == 0) ? gw[i / 2] : 0.0;
            wg[7 + i] = wg[7 - i] = g;
        }
    }
};

inline const GK15& gk15() {
    static const GK15 r;
    return r;
}

// n-point Gauss-Legendre nodes/weights on [-1, 1], ascending
template <int N>
struct GLRule {
    std::array<double, N> x{}, w{};
    GLRule() {
        using G = boost::math::quadrature::gauss<double, N>;
        const auto& ax = G::abscissa();
        const auto& aw = G::weights();
        const int h = N / 2;
        for (int i = 0; i < int(ax.size()); ++i) {
            if (N % 2 == 1) {
                x[h + i] = ax[i];
                x[h - i] = -ax[i];
                w[h + i] = w[h - i] = aw[i];
            } else {
                x[h + i] = ax[i];
                x[h - 1 - i] = -ax[i];
                w[h + i] = w[h - 1 - i] = aw[i];
            }
        }
    }
};

template <int N>
inline const GLRule<N>& gl_rule() {
    static const GLRule<N> r;
    return r;
}

struct Panel {
    double a, b;
    cplx value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
Panel gk_panel(F& f, double a, double b) {
    const auto& r = gk15();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx k{0.0, 0.0}, g{0.0, 0.0};
    for (int i = 0; i < 15; ++i) {
        const cplx v = f(c + h * r.x[i]);
        k += r.wk[i] * v;
        g += r.wg[i] * v;
    }
    return {a, b, h * k, std::abs(h * (k - g))};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod on [a, b]; splits the worst panel until the
// summed error estimate is below tol.
template <class F>
QuadResult adaptive_quad(F&& f, double a, double b, double tol, int max_panels = 20000) {
    if (a == b) return {};
    std::priority_queue<detail::Panel> q;
    auto p0 = detail::gk_panel(f, a, b);
    double err = p0.err;
    q.push(p0);
    while (err > tol) {
        if (int(q.size()) >= max_panels)
            throw QuadratureError("adaptive_quad: panel limit exceeded");
        auto p = q.top();
        q.pop();
        const double m = 0.5 * (p.a + p.b);
        auto l = detail::gk_panel(f, p.a, m);
        auto r = detail::gk_panel(f, m, p.b);
        err += l.err + r.err - p.err;
        q.push(l);
        q.push(r);
        // recompute occasionally to shed accumulated roundoff in err
        if (q.size() % 256 == 0) {
            auto c = q;
            err = 0;
            while (!c.empty()) {
                err += c.top().err;
                c.pop();
            }
        }
    }
    // deterministic summation order: by left endpoint
    std::vector<detail::Panel> ps;
    ps.reserve(q.size());
    while (!q.empty()) {
        ps.push_back(q.top());
        q.pop();
    }
    std::sort(ps.begin(), ps.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    QuadResult r;
    for (const auto& p : ps) {
        r.value += p.value;
        r.error_estimate += p.err;
    }
    r.panels_used = int(ps.size());
    return r;
}

// Integral over [a, inf) given tail(s) >= int_s^inf |f|, nonincreasing.
template <class F, class Tail>
QuadResult adaptive_quad_inf(F&& f, double a, Tail&& tail, double tol, int max_panels = 20000) {
    double S = a + 1.0, step = 1.0;
    while (tail(S) > 0.25 * tol) {
        S += step;
        step *= 1.5;
        if (!std::isfinite(S) || S > 1e12) throw QuadratureError("adaptive_quad_inf: tail bound never below tol");
    }
    auto r = adaptive_quad(f, a, S, 0.75 * tol, max_panels);
    r.error_estimate += tail(S);
    return r;
}

// Brute-force oracle along a contour path, in the path's quadrature parameter.
// f receives k and returns the integrand; dk is included here.
template <class F, class Tail>
QuadResult adaptive_path_quad(F&& f, const ContourPath& q, double tol, Tail&& tail, int max_panels = 20000) {
    auto g = [&](double u) { return f(q.qpos(u)) * q.qvel(u); };
    if (std::isinf(q.u_hi)) return adaptive_quad_inf(g, q.u_lo, tail, tol, max_panels);
    if (std::isinf(q.u_lo)) {
        auto h = [&](double v) { return g(-v); };
        return adaptive_quad_inf(h, -q.u_hi, tail, tol, max_panels);
    }
    return adaptive_quad(g, q.u_lo, q.u_hi, tol, max_panels);
}

// int_start^inf f with |f(s)| <= M exp(-sigma s).
template <class F>
QuadResult laplace_tail(F&& f, double sigma, double M, double start, double tol, int max_panels = 20000) {
    if (!(sigma > 0)) throw std::invalid_argument("laplace_tail: sigma must be positive");
    if (M == 0) return {};
    const double decay = M * std::exp(-sigma * start);
    const double span = std::max(0.0, std::log(2.0 * decay / (sigma * tol)) / sigma);
    const double stop = start + span;
    auto r = adaptive_quad(f, start, stop, 0.5 * tol, max_panels);
    r.error_estimate += decay * std::exp(-sigma * span) / sigma;
    return r;
}

// Real quartic phase c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0, multiplied by t.
struct PhaseSpec {
    std::array<double, 5> c{};  // c[j] multiplies x^j
    double t = 1.0;

    double operator()(double x) const { return t * ((((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]); }
    double d1(double x) const { return t * (((4 * c[4] * x + 3 * c[3]) * x + 2 * c[2]) * x + c[1]); }
    double d2(double x) const { return t * ((12 * c[4] * x + 6 * c[3]) * x + 2 * c[2]); }
    double d3(double x) const { return t * (24 * c[4] * x + 6 * c[3]); }

    // psi(x + d) - psi(x) - psi'(x) d without cancellation
    double residual(double x, double d) const {
        return d * d * (0.5 * d2(x) + d * (d3(x) / 6.0 + d * t * c[4]));
    }

    // real stationary points in [a, b]
    std::vector<double> stationary(double a, double b) const {
        std::vector<double> out;
        // split at the roots of d2 (at most two), d1 is monotone between them
        std::vector<double> brk{a};
        const double A = 12 * c[4], B = 6 * c[3], C = 2 * c[2];
        if (A != 0) {
            const double disc = B * B - 4 * A * C;
            if (disc >= 0) {
                const double r0 = (-B - std::sqrt(disc)) / (2 * A), r1 = (-B + std::sqrt(disc)) / (2 * A);
                for (double r : {std::min(r0, r1), std::max(r0, r1)})
                    if (r > a && r < b) brk.push_back(r);
            }
        } else if (B != 0) {
            const double r = -C / B;
            if (r > a && r < b) brk.push_back(r);
        }
        brk.push_back(b);
        for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
            double lo = brk[i], hi = brk[i + 1];
            double flo = d1(lo), fhi = d1(hi);
            if (flo == 0) {
                out.push_back(lo);
                continue;
            }
            if (flo * fhi > 0) continue;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
                const double m = 0.5 * (lo + hi);
                const double fm = d1(m);
                if ((fm > 0) == (flo > 0)) {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            const double r = 0.5 * (lo + hi);
            if (out.empty() || std::abs(out.back() - r) > 1e-12) out.push_back(r);
        }
        if (d1(b) == 0 && (out.empty() || out.back() != b)) out.push_back(b);
        return out;
    }
};

namespace detail {

// j_0..j_{n-1}(w) for w >= 0: upward recurrence when w > n, Miller's
// downward recurrence normalized by j_0 otherwise.
template <int N>
inline void sph_bessel_all(double w, std::array<double, N>& j) {
    if (w == 0) {
        j.fill(0.0);
        j[0] = 1.0;
        return;
    }
    if (w < 1e-3) {  // the recurrence overflows; leading series terms are exact to rounding here
        double lead = 1.0;  // w^n / (2n+1)!!
        const double w2 = w * w;
        for (int n = 0; n < N; ++n) {
            if (n > 0) lead *= w / (2 * n + 1);
            j[n] = lead * (1.0 - w2 / (2.0 * (2 * n + 3)) + w2 * w2 / (8.0 * (2 * n + 3) * (2 * n + 5)));
        }
        return;
    }
    if (w > 2 * N) {
        j[0] = std::sin(w) / w;
        if (N > 1) j[1] = std::sin(w) / (w * w) - std::cos(w) / w;
        for (int n = 1; n + 1 < N; ++n) j[n + 1] = (2 * n + 1) / w * j[n] - j[n - 1];
        return;
    }
    const int start = N + 16 + int(w);
    double jp1 = 0.0, jn = 1e-300;
    for (int n = start; n >= 1; --n) {
        const double jm1 = (2 * n + 1) / w * jn - jp1;
        jp1 = jn;
        jn = jm1;
        if (n - 1 < N) j[n - 1] = jn;
        if (std::abs(jn) > 1e250) {  // rescale
            for (int m = n - 1; m < N; ++m) j[m] *= 1e-250;
            jn *= 1e-250;
            jp1 *= 1e-250;
        }
    }
    // normalize with whichever of sin(w)/w and j_1 is better conditioned
    const double j0 = std::sin(w) / w;
    const double j1 = std::sin(w) / (w * w) - std::cos(w) / w;
    const double sc = (std::abs(j0) > std::abs(j1)) ? j0 / j[0] : j1 / j[1];
    for (auto& v : j) v *= sc;
}

constexpr int filon_nodes = 16;

// P_j at the Gauss nodes, scaled by the weight and (2j+1)/2
inline const std::array<std::array<double, filon_nodes>, filon_nodes>& legendre_table() {
    static const auto tab = [] {
        std::array<std::array<double, filon_nodes>, filon_nodes> t{};
        const auto& r = gl_rule<filon_nodes>();
        for (int j = 0; j < filon_nodes; ++j)
            for (int i = 0; i < filon_nodes; ++i) t[j][i] = 0.5 * (2 * j + 1) * r.w[i] * std::legendre(unsigned(j), r.x[i]);
        return t;
    }();
    return tab;
}

struct FilonPanel {
    cplx value;
    double err;
    double mass = 0.0;  // 2h sum |a_j|, sets the roundoff floor
};

// One Legendre-Filon panel: the phase is linearized at the midpoint, the
// residual exp(i R) is folded into the amplitude and expanded in Legendre
// polynomials; the tail coefficients give the error estimate.
template <class Amp, class Phase>
FilonPanel filon_panel(Amp& f, const Phase& psi, double a, double b) {
    const auto& r = gl_rule<filon_nodes>();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double p0 = psi(c), w = psi.d1(c) * h;
    std::array<cplx, filon_nodes> v;
    bool any = false;
    for (int i = 0; i < filon_nodes; ++i) {
        const double u = r.x[i];
        const cplx fv = f(c + h * u);
        if (fv != cplx(0.0, 0.0)) any = true;
        double R;
        if constexpr (requires { psi.residual(c, h); })
            R = psi.residual(c, h * u);
        else
            R = psi(c + h * u) - p0 - w * u;
        v[i] = fv * std::exp(cplx(0.0, R));
    }
    if (!any) return {{0.0, 0.0}, 0.0, 0.0};
    const auto& P = legendre_table();
    std::array<double, filon_nodes> jb;
    sph_bessel_all<filon_nodes>(std::abs(w), jb);
    static const cplx ip[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx sum{0.0, 0.0};
    double scale = 0.0;
    double tailc = 0.0;
    for (int j = 0; j < filon_nodes; ++j) {
        cplx a_j{0.0, 0.0};
        for (int i = 0; i < filon_nodes; ++i) a_j += P[j][i] * v[i];
        // int P_j e^{iwu} = 2 i^j j_j(w), with j_j(-w) = (-1)^j j_j(w)
        const double jj = (w < 0 && (j % 2)) ? -jb[j] : jb[j];
        sum += a_j * (2.0 * ip[j % 4] * jj);
        scale += std::abs(a_j);
        if (j >= filon_nodes - 3) tailc += std::abs(a_j);
    }
    const cplx e = std::exp(cplx(0.0, p0));
    return {h * e * sum, 2.0 * h * tailc, 2.0 * h * scale};
}

}  // namespace detail

// Adaptive Filon rule for int_a^b f(x) exp(i psi(x)) dx. psi needs
// operator() and d1(). Breakpoints (e.g. stationary points) seed the panels.
template <class Amp, class Phase>
QuadResult filon_segment(Amp&& f, const Phase& psi, double a, double b, double tol,
                         std::vector<double> breaks = {}, int max_panels = 200000) {
    QuadResult res;
    if (a == b) return res;
    std::vector<double> e{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks)
        if (x > a && x < b) e.push_back(x);
    e.push_back(b);
    const double len = b - a;
    struct Item {
        double a, b;
        int depth;
    };
    std::vector<Item> stack;
    for (std::size_t i = e.size() - 1; i > 0; --i) stack.push_back({e[i - 1], e[i], 0});
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const auto p = detail::filon_panel(f, psi, it.a, it.b);
        const double local = tol * (it.b - it.a) / len;
        if (p.err <= local || p.err <= 1e-14 * p.mass || it.depth >= 60) {
            res.value += p.value;
            res.error_estimate += p.err;
            ++res.panels_used;
            if (res.panels_used > max_panels) throw QuadratureError("filon_segment: panel limit exceeded");
            continue;
        }
        const double m = 0.5 * (it.a + it.b);
        stack.push_back({m, it.b, it.depth + 1});
        stack.push_back({it.a, m, it.depth + 1});
    }
    return res;
}

// Amplitude with its first two derivatives, for integration by parts.
struct Amplitude3 {
    std::function<cplx(double)> f, f1, f2;
};

// int_S^{dir*inf} f e^{i psi} by two integrations by parts. Needs d1..d3 on
// psi and psi' != 0 beyond S. Returns the boundary terms plus the remainder
// integral bounded by int |f2|; the bound is the error estimate.
template <class Phase>
QuadResult ibp_tail(const Amplitude3& A, const Phase& psi, double S, int dir, double tol) {
    auto f1 = [&](double s) {
        const double p1 = psi.d1(s), p2 = psi.d2(s);
        return (A.f1(s) * p1 - A.f(s) * p2) / (cplx(0, 1) * p1 * p1);
    };
    auto f2 = [&](double s) {
        const double p1 = psi.d1(s), p2 = psi.d2(s), p3 = psi.d3(s);
        const cplx fv = A.f(s), d1 = A.f1(s), d2 = A.f2(s);
        return -((d2 * p1 - fv * p3) * p1 - 3.0 * p2 * (d1 * p1 - fv * p2)) / (p1 * p1 * p1 * p1);
    };
    const cplx I(0, 1);
    const double p1 = psi.d1(S);
    // int_S^inf e^{i psi} f = -e^{i psi(S)} [f/(i psi') - f1/(i psi')](S) + int e^{i psi} f2
    cplx bnd = -std::exp(I * psi(S)) * (A.f(S) / (I * p1) - f1(S) / (I * p1));
    // integrate |f2| over [S, inf) by s = S + dir*(1/v - 1), v in (0, 1]
    auto g = [&](double v) -> cplx {
        if (v <= 0) return {0.0, 0.0};
        const double s = S + dir * (1.0 / v - 1.0);
        return std::abs(f2(s)) / (v * v);
    };
    // only a bound is needed: a few digits suffice
    const double rough = std::abs(adaptive_quad(g, 0.0, 1.0, inf, 1).value);
    auto rem = adaptive_quad(g, 0.0, 1.0, std::max({tol * 1e-3, 1e-3 * rough, 1e-300}), 4000);
    QuadResult r;
    r.value = double(dir) * bnd;
    r.error_estimate = std::abs(rem.value) + rem.error_estimate;
    r.panels_used = rem.panels_used;
    return r;
}

}  // namespace fokas

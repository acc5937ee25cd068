#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fokas/boundary_data.hpp"
#include "fokas/complex_plane.hpp"
#include "fokas/quadrature.hpp"

namespace fokas {

namespace detail {

constexpr int cc_order = 16;  // 17 nodes per panel

struct CCRule {
    std::array<double, cc_order + 1> x{}, w{};
    CCRule() {
        const int n = cc_order;
        for (int j = 0; j <= n; ++j) {
            const double th = pi * j / n;
            x[j] = -std::cos(th);
            double s = 0.0;
            for (int k = 1; k <= n / 2; ++k) {
                const double b = (k == n / 2) ? 1.0 : 2.0;
                s += b * std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
            }
            const double c = (j == 0 || j == n) ? 1.0 : 2.0;
            w[j] = c / n * (1.0 - s);
        }
    }
};

inline const CCRule& cc_rule() {
    static const CCRule r;
    return r;
}

}  // namespace detail

// g~(kappa, t) = int_0^t e^{kappa s} g(s) ds.
// Imaginary kappa (the contour and the real line): Legendre expansion of g on
// adaptive panels with exact moments, cost independent of |kappa|.
// Otherwise panelized Clenshaw-Curtis, samples cached per (t, panel count).
class TTransform {
public:
    explicit TTransform(BoundaryDatum g) : g_(std::move(g)) {}

    const BoundaryDatum& datum() const { return g_; }

    QuadResult operator()(cplx kappa, double t_upper) const {
        if (!(t_upper > 0)) throw std::invalid_argument("t_transform: t_upper must be positive");
        if (kappa.real() > 1e-10 * std::max(1.0, std::abs(kappa)))
            throw std::invalid_argument("t_transform: Re kappa > 0 not supported");
        if (g_.is_zero()) return {};
        const double lo = g_.a, hi = std::min(g_.b, t_upper);
        if (hi <= lo) return {};
        const double L = hi - lo;
        // roundoff-level Re kappa on the contour counts as zero
        if (std::abs(kappa.real()) * L <= 1e-13 * std::max(1.0, std::abs(kappa) * L)) return filon(kappa.imag(), t_upper);
        const double rate = std::max(std::abs(kappa.imag()), std::abs(kappa.real()));
        const int nseg = int(edges(t_upper).size()) - 1;
        const int need = 4 * std::max(1, int(std::ceil(rate * L / (2 * pi))));
        int P = 4;  // panels per smooth segment
        while (P * nseg < need) P *= 2;
        auto lev = level(t_upper, P);
        cplx prev = sum(*lev, kappa);
        for (;;) {
            if (2 * P * nseg > max_panels) throw QuadratureError("t_transform: panel limit exceeded");
            P *= 2;
            lev = level(t_upper, P);
            const cplx cur = sum(*lev, kappa);
            const double diff = std::abs(cur - prev);
            // well inside the 1e-10 target, so transforms of linear combinations stay linear to ~1e-13
            if (diff <= 1e-12 * std::abs(cur) + 1e-15 * lev->l1) return {cur, diff, P * nseg};
            prev = cur;
        }
    }

    static constexpr int max_panels = 1 << 18;

private:
    struct Level {
        std::vector<double> lo, H;  // per smooth segment
        int P;                      // panels per segment
        std::vector<cplx> g;        // segments * P * (cc_order + 1)
        double l1 = 0.0;
    };

    // [lo, breakpoints..., hi]: g is smooth between consecutive edges
    std::vector<double> edges(double t_upper) const {
        const double lo = g_.a, hi = std::min(g_.b, t_upper);
        std::vector<double> e{lo};
        for (double x : g_.breakpoints())
            if (x > lo && x < hi) e.push_back(x);
        e.push_back(hi);
        return e;
    }

    struct LegPanel {
        double c, h;
        std::array<cplx, detail::filon_nodes> a;
    };
    struct LegRep {
        std::vector<LegPanel> panels;
        double tail = 0.0;  // sum of 2h |tail coefficients|
    };

    BoundaryDatum g_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<double, int>, std::shared_ptr<const Level>> cache_;
    mutable std::map<double, std::shared_ptr<const LegRep>> leg_;

    std::shared_ptr<const LegRep> legendre(double t_upper) const {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = leg_.find(t_upper);
            if (it != leg_.end()) return it->second;
        }
        constexpr int N = detail::filon_nodes;
        const auto& r = detail::gl_rule<N>();
        const auto& P = detail::legendre_table();
        const double lo = g_.a, hi = std::min(g_.b, t_upper);
        const double gmax = std::max(g_.max_abs(), 1e-300);
        auto rep = std::make_shared<LegRep>();
        std::vector<std::pair<double, double>> stack;
        const auto e = edges(t_upper);
        if (e.size() == 2) {
            constexpr int seed = 8;
            for (int i = seed - 1; i >= 0; --i) stack.push_back({lo + (hi - lo) * i / seed, lo + (hi - lo) * (i + 1) / seed});
        } else {
            for (std::size_t i = e.size() - 1; i > 0; --i) stack.push_back({e[i - 1], e[i]});
        }
        while (!stack.empty()) {
            const auto [a, b] = stack.back();
            stack.pop_back();
            LegPanel pn{0.5 * (a + b), 0.5 * (b - a), {}};
            std::array<cplx, N> v;
            for (int i = 0; i < N; ++i) v[i] = g_(pn.c + pn.h * r.x[i]);
            double tail = 0.0;
            for (int j = 0; j < N; ++j) {
                cplx s{0.0, 0.0};
                for (int i = 0; i < N; ++i) s += P[j][i] * v[i];
                pn.a[j] = s;
                if (j >= N - 3) tail += std::abs(s);
            }
            if (tail > 1e-14 * gmax && b - a > 1e-9 * (hi - lo)) {
                stack.push_back({pn.c, b});
                stack.push_back({a, pn.c});
                continue;
            }
            rep->tail += 2 * pn.h * tail;
            rep->panels.push_back(pn);
        }
        std::lock_guard<std::mutex> lk(mu_);
        return leg_.emplace(t_upper, rep).first->second;
    }

    QuadResult filon(double tau, double t_upper) const {
        constexpr int N = detail::filon_nodes;
        static const cplx ip[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const auto rep = legendre(t_upper);
        cplx total{0.0, 0.0};
        std::array<double, N> jb;
        for (const auto& pn : rep->panels) {
            // int_{-1}^{1} P_j(u) e^{i w u} du = 2 i^j j_j(w)
            const double w = tau * pn.h;
            detail::sph_bessel_all<N>(std::abs(w), jb);
            cplx s{0.0, 0.0};
            for (int j = 0; j < N; ++j) {
                const double jj = (w < 0 && (j % 2)) ? -jb[j] : jb[j];
                s += pn.a[j] * (ip[j % 4] * jj);
            }
            total += 2.0 * pn.h * std::exp(cplx(0.0, tau * pn.c)) * s;
        }
        return {total, rep->tail, int(rep->panels.size())};
    }

    std::shared_ptr<const Level> level(double t_upper, int P) const {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = cache_.find({t_upper, P});
            if (it != cache_.end()) return it->second;
        }
        const auto& r = detail::cc_rule();
        constexpr int n = detail::cc_order + 1;
        const auto e = edges(t_upper);
        auto lev = std::make_shared<Level>();
        lev->P = P;
        lev->g.reserve((e.size() - 1) * std::size_t(P) * n);
        for (std::size_t s = 0; s + 1 < e.size(); ++s) {
            const double H = (e[s + 1] - e[s]) / P;
            lev->lo.push_back(e[s]);
            lev->H.push_back(H);
            for (int p = 0; p < P; ++p) {
                const double a = e[s] + p * H;
                for (int j = 0; j < n; ++j) {
                    const cplx v = g_(a + 0.5 * H * (1.0 + r.x[j]));
                    lev->g.push_back(v);
                    lev->l1 += 0.5 * H * r.w[j] * std::abs(v);
                }
            }
        }
        std::lock_guard<std::mutex> lk(mu_);
        auto [it, ok] = cache_.emplace(std::make_pair(t_upper, P), lev);
        if (cache_.size() > 64) {
            // keep memory bounded for long-lived transforms
            for (auto i = cache_.begin(); i != cache_.end();) i = (i->first.second > 4096) ? cache_.erase(i) : std::next(i);
        }
        return it->second;
    }

    static cplx sum(const Level& lev, cplx kappa) {
        const auto& r = detail::cc_rule();
        constexpr int n = detail::cc_order + 1;
        std::array<cplx, n> E;
        cplx step{0.0, 0.0};
        double Hcur = -1.0;
        cplx total{0.0, 0.0};
        const cplx* gp = lev.g.data();
        for (std::size_t s = 0; s < lev.lo.size(); ++s) {
            const double H = lev.H[s];
            if (H != Hcur) {
                for (int j = 0; j < n; ++j) E[j] = 0.5 * H * r.w[j] * std::exp(kappa * (0.5 * H * (1.0 + r.x[j])));
                step = std::exp(kappa * H);
                Hcur = H;
            }
            cplx z{0.0, 0.0};
            for (int p = 0; p < lev.P; ++p, gp += n) {
                if (p % 32 == 0)
                    z = std::exp(kappa * (lev.lo[s] + p * H));
                else
                    z *= step;
                cplx acc{0.0, 0.0};
                for (int j = 0; j < n; ++j) acc += E[j] * gp[j];
                total += z * acc;
            }
        }
        return total;
    }
};
inline cplx t_transform(const BoundaryDatum& g, cplx kappa, double t_upper) {
    return TTransform(g)(kappa, t_upper).value;
}

// Boundary data pair with cached transforms.
struct DataPair {
    std::shared_ptr<TTransform> g0, g1;
    double T = 1.0;

    DataPair(const BoundaryDatum& a, const BoundaryDatum& b, double T_)
        : g0(std::make_shared<TTransform>(a)), g1(std::make_shared<TTransform>(b)), T(T_) {}

    bool is_zero() const { return g0->datum().is_zero() && g1->datum().is_zero(); }
};

// G(k; t) = -2ik(k + nu) g1~(w, t) - 2k nu (k + nu) g0~(w, t)
inline cplx spectral_G(cplx k, const DataPair& d, double t, const SpectralParams& p, const BranchCut& cut) {
    if (k == cplx(0.0, 0.0) || d.is_zero()) return {0.0, 0.0};
    const cplx w = spectral_w(k, p);
    const cplx nu = invariance_nu(k, p, cut);
    const cplx t0 = d.g0->datum().is_zero() ? cplx(0.0, 0.0) : (*d.g0)(w, t).value;
    const cplx t1 = d.g1->datum().is_zero() ? cplx(0.0, 0.0) : (*d.g1)(w, t).value;
    return -2.0 * cplx(0, 1) * k * (k + nu) * t1 - 2.0 * k * nu * (k + nu) * t0;
}

inline cplx spectral_G(cplx k, const BoundaryDatum& g0, const BoundaryDatum& g1, double T, const SpectralParams& p,
                       const BranchCut& cut) {
    return spectral_G(k, DataPair(g0, g1, T), T, p, cut);
}

// G without the (k + nu) factor: -2ik g1~ - 2k nu g0~
inline cplx spectral_G_reduced(cplx k, cplx nu, const DataPair& d, double t, const SpectralParams& p) {
    const cplx w = spectral_w(k, p);
    const cplx t0 = d.g0->datum().is_zero() ? cplx(0.0, 0.0) : (*d.g0)(w, t).value;
    const cplx t1 = d.g1->datum().is_zero() ? cplx(0.0, 0.0) : (*d.g1)(w, t).value;
    return -2.0 * cplx(0, 1) * k * t1 - 2.0 * k * nu * t0;
}

// The five spectral densities for alpha, beta > 0 (c = beta/(2 alpha)):
//   1: G(is),  s >= 0
//   2: G(s),   0 <= s <= sqrt(c)
//   3: G(s + i m)(1 + is/m),   s >= sqrt(c), m = sqrt(s^2 - c)
//   4: G(-s + i m)(-1 + is/m), s >= sqrt(c)
//   5: G(s),   s <= -sqrt(c)
// Near s = sqrt(c) the factor (k + nu) = (2k^2 - 2c)/(k - nu) = +-4ism/(k - nu)
// cancels 1/m before evaluation.
inline constexpr double psi_stabilize_window = 1e-4;

inline cplx psi_hat(int i, double s, const DataPair& d, const SpectralParams& p, double eps = default_epsilon) {
    if (config_of(p) != Config::A) throw std::invalid_argument("psi_hat: defined for alpha, beta > 0");
    if (i < 1 || i > 5) throw std::invalid_argument("psi_hat: index must be 1..5");
    const double c = p.c(), sc = std::sqrt(c);
    const double T = d.T;
    const cplx I(0, 1);
    switch (i) {
    case 1:
        if (s < 0) return 0.0;
        return spectral_G(I * s, d, T, p, component_cut(+1, eps));
    case 2:
        if (s < 0 || s > sc) return 0.0;
        return spectral_G(cplx(s, 0.0), d, T, p, component_cut(+1, eps));
    case 3:
    case 4: {
        if (s < sc) return 0.0;
        const int side = (i == 3) ? +1 : -1;
        const double m = std::sqrt(std::max(0.0, s * s - c));
        const cplx k(side * s, m);
        const BranchCut cut = component_cut(side, eps);
        const cplx nu = invariance_nu(k, p, cut);
        if (s - sc < psi_stabilize_window) {
            const cplx B = spectral_G_reduced(k, nu, d, T, p);
            const cplx f = (i == 3) ? cplx(m, s) : cplx(m, -s);
            return B * 4.0 * I * s * f / (k - nu);
        }
        const cplx jac = (i == 3) ? cplx(1.0, s / m) : cplx(-1.0, s / m);
        return spectral_G(k, d, T, p, cut) * jac;
    }
    case 5:
        if (s > -sc) return 0.0;
        return spectral_G(cplx(s, 0.0), d, T, p, component_cut(-1, eps));
    }
    return 0.0;
}

// Psi_i sampled through a piecewise Legendre expansion of its transform.
// Psi(y) = (1/2pi) int e^{isy} Psi^(s) ds is then exact for the expansion at
// every y (linear phase, exact moments).
struct PsiSpec {
    int index = 1;
    double s_lo = 0.0, s_hi = 0.0;   // truncated support
    std::vector<double> s_grid;      // quadrature nodes, ascending
    std::vector<cplx> hat_values;    // Psi^ at s_grid
    std::vector<double> panel_lo, panel_hi;
    std::vector<std::array<cplx, detail::filon_nodes>> coeff;  // Legendre coefficients per panel
    cplx hat_lo{0.0, 0.0}, hat_hi{0.0, 0.0};                   // one-sided end values
    cplx dhat_lo{0.0, 0.0}, dhat_hi{0.0, 0.0};                 // one-sided end slopes
    double hat_max = 0.0;
    double edge_ratio = 0.0;  // |Psi^| at truncated infinite ends / max
};

struct PsiError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::pair<double, double> psi_support(int i, double sc) {
    switch (i) {
    case 1: return {0.0, inf};
    case 2: return {0.0, sc};
    case 3:
    case 4: return {sc, inf};
    case 5: return {-inf, -sc};
    }
    return {0.0, 0.0};
}

}  // namespace detail

inline PsiSpec make_psi_spec(int i, const DataPair& d, const SpectralParams& p, double rel_tol = 1e-12,
                             double eps = default_epsilon) {
    PsiSpec ps;
    ps.index = i;
    const double sc = p.threshold();
    auto f = [&](double s) { return psi_hat(i, s, d, p, eps); };
    auto [lo, hi] = detail::psi_support(i, sc);
    // march out along infinite ends until the density has decayed
    auto truncate = [&](double start, double dir) {
        double step = 0.25, s = start, mx = 0.0;
        int quiet = 0;
        double last = start;
        // the k^2 factor lifts transform roundoff into a slowly growing plateau;
        // once below 1e-10 of the peak, stop at the minimum if |Psi^| turns back up
        double vmin = inf, smin = start;
        for (int it = 0; it < 4000 && quiet < 4; ++it) {
            s += dir * step;
            const double v = std::abs(f(s));
            mx = std::max(mx, v);
            ps.hat_max = std::max(ps.hat_max, v);
            quiet = (v <= rel_tol * 1e-2 * std::max(mx, 1e-300)) ? quiet + 1 : 0;
            last = s;
            if (v < vmin) {
                vmin = v;
                smin = s;
            } else if (vmin <= 1e-10 * mx && std::abs(s - smin) >= 8 * step) {
                return smin;
            }
        }
        return last;
    };
    if (d.is_zero()) {
        ps.s_lo = std::isinf(lo) ? -sc : lo;
        ps.s_hi = std::isinf(hi) ? sc : hi;
        return ps;
    }
    if (std::isinf(hi)) hi = truncate(lo, +1.0);
    if (std::isinf(lo)) lo = truncate(hi, -1.0);
    ps.s_lo = lo;
    ps.s_hi = hi;

    const auto& r = detail::gl_rule<detail::filon_nodes>();
    const auto& Ptab = detail::legendre_table();
    struct Item {
        double a, b;
        int depth;
    };
    std::vector<Item> stack;
    const int init = std::max(4, int(std::ceil((hi - lo) / 0.25)));
    for (int k = init - 1; k >= 0; --k) stack.push_back({lo + (hi - lo) * k / init, lo + (hi - lo) * (k + 1) / init, 0});
    struct Done {
        double a, b;
        std::array<cplx, detail::filon_nodes> c, v;
    };
    std::vector<Done> done;
    double scale = ps.hat_max;
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        Done dn{it.a, it.b, {}, {}};
        const double c = 0.5 * (it.a + it.b), h = 0.5 * (it.b - it.a);
        for (int n = 0; n < detail::filon_nodes; ++n) {
            dn.v[n] = f(c + h * r.x[n]);
            scale = std::max(scale, std::abs(dn.v[n]));
        }
        double tail = 0.0;
        for (int j = 0; j < detail::filon_nodes; ++j) {
            cplx a{0.0, 0.0};
            for (int n = 0; n < detail::filon_nodes; ++n) a += Ptab[j][n] * dn.v[n];
            dn.c[j] = a;
            if (j >= detail::filon_nodes - 3) tail += std::abs(a);
        }
        if (tail <= rel_tol * std::max(scale, 1e-300) || it.depth >= 30) {
            done.push_back(dn);
        } else {
            const double m = 0.5 * (it.a + it.b);
            stack.push_back({m, it.b, it.depth + 1});
            stack.push_back({it.a, m, it.depth + 1});
        }
    }
    std::sort(done.begin(), done.end(), [](const Done& x, const Done& y) { return x.a < y.a; });
    ps.hat_max = scale;
    for (const auto& dn : done) {
        ps.panel_lo.push_back(dn.a);
        ps.panel_hi.push_back(dn.b);
        ps.coeff.push_back(dn.c);
        const double c = 0.5 * (dn.a + dn.b), h = 0.5 * (dn.b - dn.a);
        for (int n = 0; n < detail::filon_nodes; ++n) {
            ps.s_grid.push_back(c + h * r.x[n]);
            ps.hat_values.push_back(dn.v[n]);
        }
    }
    // end values and slopes of the expansion: P_j(+-1) = (+-1)^j, P_j'(+-1) = (+-1)^{j+1} j(j+1)/2
    auto ends = [&](std::size_t k, double sgn, cplx& val, cplx& slope) {
        const double h = 0.5 * (ps.panel_hi[k] - ps.panel_lo[k]);
        val = slope = 0.0;
        for (int j = 0; j < detail::filon_nodes; ++j) {
            const double pj = (sgn > 0 || j % 2 == 0) ? 1.0 : -1.0;
            val += ps.coeff[k][j] * pj;
            slope += ps.coeff[k][j] * (pj * sgn * 0.5 * j * (j + 1) / h);
        }
    };
    ends(0, -1.0, ps.hat_lo, ps.dhat_lo);
    ends(ps.coeff.size() - 1, +1.0, ps.hat_hi, ps.dhat_hi);
    const auto [slo, shi] = detail::psi_support(i, sc);
    double edge = 0.0;
    if (std::isinf(shi)) edge = std::max(edge, std::abs(ps.hat_hi));
    if (std::isinf(slo)) edge = std::max(edge, std::abs(ps.hat_lo));
    ps.edge_ratio = edge / std::max(ps.hat_max, 1e-300);
    return ps;
}

// Psi(y) = (1/2pi) int e^{isy} Psi^(s) ds at each y.
inline std::vector<cplx> psi_from_hat(const PsiSpec& ps, const std::vector<double>& y_grid, double decay_tol = 1e-12) {
    if (ps.edge_ratio > decay_tol) throw PsiError("psi_from_hat: transform has not decayed at the truncation edge");
    std::vector<cplx> out(y_grid.size(), cplx(0.0, 0.0));
    static const cplx ip[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t q = 0; q < y_grid.size(); ++q) {
        const double y = y_grid[q];
        cplx total{0.0, 0.0};
        for (std::size_t k = 0; k < ps.coeff.size(); ++k) {
            const double c = 0.5 * (ps.panel_lo[k] + ps.panel_hi[k]), h = 0.5 * (ps.panel_hi[k] - ps.panel_lo[k]);
            const double w = y * h;
            std::array<double, detail::filon_nodes> jb;
            detail::sph_bessel_all<detail::filon_nodes>(std::abs(w), jb);
            cplx s{0.0, 0.0};
            for (int j = 0; j < detail::filon_nodes; ++j) {
                const double jj = (w < 0 && (j % 2)) ? -jb[j] : jb[j];
                s += ps.coeff[k][j] * (2.0 * ip[j % 4] * jj);
            }
            total += h * std::exp(cplx(0.0, y * c)) * s;
        }
        out[q] = total / (2 * pi);
    }
    return out;
}

// Forward transform of Psi on a y grid (trapezoid), used for round trips.
inline cplx psi_forward(const std::vector<double>& y, const std::vector<cplx>& v, double s) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double h = y[i + 1] - y[i];
        acc += 0.5 * h * (std::exp(cplx(0.0, -s * y[i])) * v[i] + std::exp(cplx(0.0, -s * y[i + 1])) * v[i + 1]);
    }
    return acc;
}

// ||Psi^||_2 from the Legendre expansion (Gauss sums on each panel).
inline double psi_hat_l2(const PsiSpec& ps) {
    const auto& r = detail::gl_rule<detail::filon_nodes>();
    double acc = 0.0;
    for (std::size_t k = 0; k < ps.coeff.size(); ++k) {
        const double h = 0.5 * (ps.panel_hi[k] - ps.panel_lo[k]);
        for (int n = 0; n < detail::filon_nodes; ++n)
            acc += h * r.w[n] * std::norm(ps.hat_values[k * detail::filon_nodes + n]);
    }
    return std::sqrt(acc);
}

struct PsiNorm {
    int index = 0;
    double r_prime = 2.0;
    double value = 0.0;
    double tail = 0.0;       // asymptotic contribution from |y| > Y
    double Y = 0.0;
    bool converged = true;   // false when the L^{r'} norm is infinite (jump, r' = 1) or the tail is not small
};

// L^{r'} norm of Psi_i on R by the trapezoid rule on [-Y, Y] plus the
// asymptotic tails: a jump J in Psi^ gives |Psi| ~ |J|/(2pi|y|), a kink D
// gives |Psi| ~ |D|/(2pi y^2).
inline PsiNorm psi_norm(const PsiSpec& ps, double r_prime, double Y = 400.0, int refine = 1) {
    if (!(r_prime >= 1.0 && r_prime <= 2.0)) throw std::invalid_argument("psi_norm: r' must lie in [1, 2]");
    PsiNorm out;
    out.index = ps.index;
    out.r_prime = r_prime;
    out.Y = Y;
    if (ps.coeff.empty() || ps.hat_max == 0.0) return out;
    const double smax = std::max(std::abs(ps.s_lo), std::abs(ps.s_hi));
    const double dy = pi / (8.0 * std::max(1.0, smax) * refine);
    const int n = int(std::ceil(Y / dy));
    std::vector<double> y(2 * n + 1);
    for (int k = -n; k <= n; ++k) y[k + n] = k * (Y / n);
    const auto v = psi_from_hat(ps, y, inf);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < y.size(); ++k)
        acc += 0.5 * (y[k + 1] - y[k]) * (std::pow(std::abs(v[k]), r_prime) + std::pow(std::abs(v[k + 1]), r_prime));
    const double J = std::abs(ps.hat_lo) + std::abs(ps.hat_hi);
    const double D = std::abs(ps.dhat_lo) + std::abs(ps.dhat_hi);
    const double jump_scale = 1e-9 * ps.hat_max;
    if (J > jump_scale) {
        const double a = J / (2 * pi);
        if (r_prime == 1.0) {
            out.converged = false;  // log-divergent
        } else {
            out.tail = 2.0 * std::pow(a, r_prime) * std::pow(Y, 1.0 - r_prime) / (r_prime - 1.0);
        }
    } else {
        const double a = D / (2 * pi);
        out.tail = 2.0 * std::pow(a, r_prime) * std::pow(Y, 1.0 - 2.0 * r_prime) / (2.0 * r_prime - 1.0);
    }
    const double total = acc + out.tail;
    // the asymptotic tail carries a relative error O(1/Y)
    if (out.converged && out.tail / Y > 1e-6 * total) out.converged = false;
    out.value = std::pow(total, 1.0 / r_prime);
    return out;
}

}  // namespace fokas

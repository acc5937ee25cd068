#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "fokas/boundary_data.hpp"
#include "fokas/complex_plane.hpp"
#include "fokas/evaluator.hpp"
#include "fokas/transforms.hpp"

namespace fokas {

struct FDGrid {
    double L = 20.0;
    int Nx = 2000;
    double dt = 1e-3;
    int Nt = 1000;

    double h() const { return L / Nx; }
    double T() const { return dt * Nt; }

    static FDGrid make(double L, int Nx, double T, double dt) {
        FDGrid g;
        g.L = L;
        g.Nx = Nx;
        g.Nt = std::max(1, int(std::lround(T / dt)));
        g.dt = T / g.Nt;
        g.check();
        return g;
    }

    void check() const {
        if (!(L >= 10)) throw std::invalid_argument("oracle.L must be >= 10");
        if (Nx < 200) throw std::invalid_argument("oracle.Nx must be >= 200");
        if (!(dt > 0) || Nt < 1) throw std::invalid_argument("oracle.dt must be positive");
    }
};

struct FDError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FDSolution {
    FDGrid grid;
    std::vector<double> x;                  // 0, h, ..., L
    std::vector<double> t_out;              // snapshot times
    std::vector<std::vector<cplx>> values;  // values[j] = y(., t_out[j]) on x
    std::vector<double> t_steps;            // 0, dt, ..., T
    std::vector<cplx> g0, g1, g2, g3;       // traces per step; g2, g3 measured
    double leakage = 0.0;                   // max |y| on the last 5% of [0, L] over max |y|
    bool leakage_ok = true;

    // snapshot index for time t (exact match to the step grid)
    std::size_t index_of(double t) const {
        for (std::size_t j = 0; j < t_out.size(); ++j)
            if (std::abs(t_out[j] - t) <= 1e-9 * std::max(1.0, t)) return j;
        throw std::invalid_argument("FDSolution: no snapshot at t = " + std::to_string(t));
    }

    BoundaryDatum trace(int j) const {
        const auto& v = (j == 0) ? g0 : (j == 1) ? g1 : (j == 2) ? g2 : g3;
        return BoundaryDatum::from_samples(grid.T(), t_steps, v, 0.0, grid.T(), 0.0, false);
    }
};

struct FDOptions {
    std::vector<double> t_out;                            // snapshot times, default {T}
    std::function<cplx(double, double)> forcing;          // f(x, t) added to y_t = i(alpha y'''' + beta y'')
    std::function<cplx(double)> initial;                  // y(x, 0), default 0
    double leakage_tol = 1e-6;
    bool throw_on_leakage = false;
};

namespace detail {

// Ghost values u(-h), u(-2h), u(-3h) and u''(0), u'''(0) from the degree-7
// polynomial through u(0) = g0, u'(0) = g1, u(jh) = u_j (j = 1..6).
// Row q of W gives the weights on (g0, h g1, u_1..u_6).
struct GhostFit {
    Eigen::Matrix<double, 3, 8> ghost;
    Eigen::Matrix<double, 2, 8> deriv;  // h^2 u''(0), h^3 u'''(0)

    GhostFit() {
        Eigen::Matrix<double, 8, 8> V = Eigen::Matrix<double, 8, 8>::Zero();
        V(0, 0) = 1;
        V(1, 1) = 1;
        for (int j = 1; j <= 6; ++j)
            for (int m = 0; m < 8; ++m) V(j + 1, m) = std::pow(double(j), m);
        const Eigen::Matrix<double, 8, 8> C = V.inverse();  // coefficients from data
        for (int q = 1; q <= 3; ++q)
            for (int c = 0; c < 8; ++c) {
                double s = 0;
                for (int m = 0; m < 8; ++m) s += std::pow(-double(q), m) * C(m, c);
                ghost(q - 1, c) = s;
            }
        for (int c = 0; c < 8; ++c) {
            deriv(0, c) = 2 * C(2, c);
            deriv(1, c) = 6 * C(3, c);
        }
    }
};

inline const GhostFit& ghost_fit() {
    static const GhostFit g;
    return g;
}

}  // namespace detail

// Crank-Nicolson for y_t = i(alpha y_xxxx + beta y_xx) on [0, L], y(0) = g0,
// y_x(0) = g1 through polynomial ghost points, y = y_x = 0 at L (even mirror).
inline FDSolution fd_solve(const SpectralParams& p, const BoundaryDatum& g0, const BoundaryDatum& g1, const FDGrid& grid,
                           const FDOptions& opt = {}) {
    grid.check();
    const int N = grid.Nx, n = N - 1;
    const double h = grid.h(), dt = grid.dt;
    const cplx I(0, 1);
    static const double c4[7] = {-1 / 6.0, 2.0, -39 / 6.0, 56 / 6.0, -39 / 6.0, 2.0, -1 / 6.0};
    static const double c2[5] = {-1 / 12.0, 16 / 12.0, -30 / 12.0, 16 / 12.0, -1 / 12.0};
    const double a4 = p.alpha / (h * h * h * h), a2 = p.beta / (h * h);
    const auto& gf = detail::ghost_fit();

    // A u + g0 b0 + g1 b1 is the discrete i(alpha D4 + beta D2) on interior nodes 1..N-1
    std::vector<Eigen::Triplet<cplx>> trip;
    Eigen::VectorXcd b0 = Eigen::VectorXcd::Zero(n), b1 = Eigen::VectorXcd::Zero(n);
    for (int i = 1; i <= N - 1; ++i) {
        std::vector<std::pair<int, double>> terms;
        for (int d = -3; d <= 3; ++d) terms.push_back({i + d, a4 * c4[d + 3]});
        for (int d = -2; d <= 2; ++d) terms.push_back({i + d, a2 * c2[d + 2]});
        for (auto [j, c] : terms) {
            if (j > N) j = 2 * N - j;  // even mirror at L
            if (j == N) continue;      // y(L) = 0
            if (j >= 1) {
                trip.emplace_back(i - 1, j - 1, I * c);
            } else if (j == 0) {
                b0(i - 1) += I * c;
            } else {
                const int q = -j - 1;
                b0(i - 1) += I * c * gf.ghost(q, 0);
                b1(i - 1) += I * c * gf.ghost(q, 1) * h;
                for (int m = 1; m <= 6; ++m) trip.emplace_back(i - 1, m - 1, I * c * gf.ghost(q, m + 1));
            }
        }
    }
    Eigen::SparseMatrix<cplx> A(n, n), Id(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Id.setIdentity();
    Eigen::SparseMatrix<cplx> M = Id - (0.5 * dt) * A, R = Id + (0.5 * dt) * A;
    M.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) throw FDError("fd_solve: factorization failed");

    FDSolution sol;
    sol.grid = grid;
    for (int i = 0; i <= N; ++i) sol.x.push_back(i * h);
    sol.t_out = opt.t_out.empty() ? std::vector<double>{grid.T()} : opt.t_out;
    std::vector<int> out_step;
    for (double t : sol.t_out) {
        const double s = t / dt;
        const int k = int(std::lround(s));
        if (std::abs(s - k) > 1e-8 || k < 0 || k > grid.Nt) throw std::invalid_argument("oracle.t_out must lie on the step grid");
        out_step.push_back(k);
    }
    sol.values.resize(sol.t_out.size());

    Eigen::VectorXcd u(n), fvec(n), fnext(n);
    for (int i = 1; i <= n; ++i) u(i - 1) = opt.initial ? opt.initial(i * h) : cplx(0.0, 0.0);
    auto force = [&](double t, Eigen::VectorXcd& f) {
        for (int i = 1; i <= n; ++i) f(i - 1) = opt.forcing(i * h, t);
    };
    double umax = 0.0, farmax = 0.0;
    const int far0 = int(0.95 * N);
    auto record = [&](int step) {
        const double t = step * dt;
        const cplx G0 = g0(t), G1 = g1(t);
        Eigen::Matrix<cplx, 8, 1> data;
        data(0) = G0;
        data(1) = h * G1;
        for (int m = 1; m <= 6; ++m) data(m + 1) = u(m - 1);
        sol.t_steps.push_back(t);
        sol.g0.push_back(G0);
        sol.g1.push_back(G1);
        sol.g2.push_back((gf.deriv.row(0).cast<cplx>() * data)(0) / (h * h));
        sol.g3.push_back((gf.deriv.row(1).cast<cplx>() * data)(0) / (h * h * h));
        umax = std::max(umax, std::abs(G0));
        for (int i = 1; i <= n; ++i) {
            const double a = std::abs(u(i - 1));
            umax = std::max(umax, a);
            if (i >= far0) farmax = std::max(farmax, a);
        }
        for (std::size_t j = 0; j < out_step.size(); ++j)
            if (out_step[j] == step) {
                auto& v = sol.values[j];
                v.assign(std::size_t(N + 1), cplx(0.0, 0.0));
                v[0] = G0;
                for (int i = 1; i <= n; ++i) v[std::size_t(i)] = u(i - 1);
            }
    };
    record(0);
    if (opt.forcing) force(0.0, fvec);
    for (int s = 1; s <= grid.Nt; ++s) {
        const double t0 = (s - 1) * dt, t1 = s * dt;
        Eigen::VectorXcd rhs = R * u + (0.5 * dt) * ((g0(t0) + g0(t1)) * b0 + (g1(t0) + g1(t1)) * b1);
        if (opt.forcing) {
            force(t1, fnext);
            rhs += (0.5 * dt) * (fvec + fnext);
            fvec = fnext;
        }
        u = lu.solve(rhs);
        if (lu.info() != Eigen::Success) throw FDError("fd_solve: linear solve failed");
        record(s);
    }
    sol.leakage = umax > 0 ? farmax / umax : 0.0;
    sol.leakage_ok = sol.leakage <= opt.leakage_tol;
    if (!sol.leakage_ok && opt.throw_on_leakage)
        throw FDError("fd_solve: far-field leakage " + std::to_string(sol.leakage) + " exceeds tolerance");
    return sol;
}

// yhat(k) = int_0^L e^{-ikx} y(x) dx on a uniform grid (composite Simpson, odd
// node count; an even count falls back to Simpson 3/8 on the last three intervals).
inline cplx half_line_fourier(const std::vector<double>& x, const std::vector<cplx>& y, cplx k) {
    if (k.imag() > 0) throw std::invalid_argument("half_line_fourier: Im k must be <= 0");
    const std::size_t n = y.size();
    if (n != x.size() || n < 4) throw std::invalid_argument("half_line_fourier: need >= 4 samples");
    const double h = (x.back() - x.front()) / double(n - 1);
    const cplx I(0, 1);
    auto f = [&](std::size_t i) { return std::exp(-I * k * x[i]) * y[i]; };
    cplx s{0.0, 0.0};
    std::size_t m = n - 1;  // intervals
    std::size_t end = (m % 2 == 0) ? m : m - 3;
    for (std::size_t i = 0; i + 2 <= end; i += 2) s += h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
    if (end != m) s += 3.0 * h / 8.0 * (f(end) + 3.0 * f(end + 1) + 3.0 * f(end + 2) + f(end + 3));
    return s;
}

struct GlobalRelation {
    cplx lhs, rhs;            // e^{wt} yhat(k, t) and the trace combination
    double term_scale = 0.0;  // max modulus of the individual trace terms
    double residual = 0.0;    // |lhs - rhs| / max(|lhs|, |rhs|, term_scale, 1e-300)
};

// e^{w t} yhat(k,t) = -i alpha g3~ + alpha k g2~ + i(alpha k^2 - beta) g1~ + (beta k - alpha k^3) g0~
inline GlobalRelation global_relation(const FDSolution& fd, const SpectralParams& p, cplx k, double t) {
    if (k.imag() > 0) throw std::invalid_argument("global_relation: Im k must be <= 0");
    const std::size_t j = fd.index_of(t);
    const cplx w = spectral_w(k, p);
    if (w.real() > 1e-12 * std::max(1.0, std::abs(w)))
        throw std::invalid_argument("global_relation: Re w(k) > 0 is outside the t-transform range");
    const cplx I(0, 1);
    GlobalRelation g;
    g.lhs = std::exp(w * t) * half_line_fourier(fd.x, fd.values[j], k);
    const double a = p.alpha, b = p.beta;
    const cplx coef[4] = {b * k - a * k * k * k, I * (a * k * k - b), a * k, -I * a};
    cplx rhs{0.0, 0.0};
    for (int m = 0; m < 4; ++m) {
        const cplx term = coef[m] * t_transform(fd.trace(m), w, t);
        g.term_scale = std::max(g.term_scale, std::abs(term));
        rhs += term;
    }
    g.rhs = rhs;
    g.residual = std::abs(g.lhs - g.rhs) / std::max({std::abs(g.lhs), std::abs(g.rhs), g.term_scale, 1e-300});
    return g;
}

inline double global_relation_residual(const FDSolution& fd, const SpectralParams& p, cplx k, double t) {
    return global_relation(fd, p, k, t).residual;
}

struct FieldComparison {
    std::vector<double> t;
    std::vector<double> rel_l2;   // ||a - b||_2 / ||b||_2 over [x_min, L]
    std::vector<double> max_abs;  // max pointwise |a - b|
    double worst_rel_l2 = 0.0;
};

// Field vs FD: FD interpolated to the field's x nodes (cubic spline), L2 by trapezoid on those nodes.
inline FieldComparison compare_fields(const SolutionField& a, const FDSolution& b) {
    FieldComparison r;
    const auto& xs = a.grid.x;
    if (xs.back() > b.x.back() * (1 + 1e-12)) throw std::invalid_argument("compare_fields: field extends past the FD domain");
    using spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    const double h = b.grid.h();
    for (std::size_t j = 0; j < a.grid.t.size(); ++j) {
        const std::size_t jb = b.index_of(a.grid.t[j]);
        const auto& v = b.values[jb];
        std::vector<double> re(v.size()), im(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            re[i] = v[i].real();
            im[i] = v[i].imag();
        }
        spline sr(re.begin(), re.end(), 0.0, h), si(im.begin(), im.end(), 0.0, h);
        double num = 0, den = 0, mx = 0;
        std::vector<double> d2(xs.size()), b2(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const cplx fb(sr(xs[i]), si(xs[i]));
            const cplx diff = a.values[j][i] - fb;
            d2[i] = std::norm(diff);
            b2[i] = std::norm(fb);
            mx = std::max(mx, std::abs(diff));
        }
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const double dx = xs[i + 1] - xs[i];
            num += 0.5 * dx * (d2[i] + d2[i + 1]);
            den += 0.5 * dx * (b2[i] + b2[i + 1]);
        }
        r.t.push_back(a.grid.t[j]);
        r.rel_l2.push_back(den > 0 ? std::sqrt(num / den) : std::sqrt(num));
        r.max_abs.push_back(mx);
        r.worst_rel_l2 = std::max(r.worst_rel_l2, r.rel_l2.back());
    }
    return r;
}

}  // namespace fokas

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fokas/evaluator.hpp"
#include "fokas/parallel.hpp"
#include "fokas/transforms.hpp"

namespace fokas {

struct DispersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormSample {
    double t = 0.0;
    double r = 2.0;  // inf for the sup norm
    double value = 0.0;
};

// Uniform x slice of the field at one time, x_j = j dx from the boundary.
struct FieldSlice {
    double t = 0.0;
    double dx = 0.0;
    std::vector<double> x;
    std::vector<cplx> y;
    double peak = 0.0;
    double tail_ratio = 0.0;  // max |y| over the last chunk / peak
    double noise = 0.0;       // evaluator accuracy; tails below it count as decayed
};

// Sweep outward in chunks of `chunk` length units until two consecutive
// chunks stay below tail_tol of the running maximum (or below the evaluator
// noise 10 tol, which decides at times where the whole field is that small).
inline FieldSlice sample_slice(const ContourEvaluator& ev, double t, double dx, double tail_tol = 1e-4,
                               double chunk = 50.0) {
    if (!(dx > 0)) throw std::invalid_argument("sample_slice: dx must be positive");
    FieldSlice s;
    s.t = t;
    s.dx = dx;
    const int per = std::max(16, int(std::lround(chunk / dx)));
    if (ev.data().is_zero()) {
        s.x.resize(per);
        for (int j = 0; j < per; ++j) s.x[j] = j * dx;
        s.y.assign(per, cplx(0.0, 0.0));
        return s;
    }
    const double x_max = ev.options().x_max;
    s.noise = 10.0 * ev.options().tol * ev.data_scale();
    int quiet = 0;
    for (int c = 0; quiet < 2; ++c) {
        const int j0 = c * per;
        if ((j0 + per - 1) * dx > x_max)
            throw DispersionError("sample_slice: field has not decayed to the tail tolerance by x_max = " +
                                  std::to_string(x_max) + " at t = " + std::to_string(t));
        const auto v = ev.sweep_x(j0 * dx, dx, per, t);
        double m = 0.0;
        for (int j = 0; j < per; ++j) {
            s.x.push_back((j0 + j) * dx);
            s.y.push_back(v[j]);
            m = std::max(m, std::abs(v[j]));
        }
        s.peak = std::max(s.peak, m);
        s.tail_ratio = m / std::max(s.peak, 1e-300);
        quiet = (m <= std::max(tail_tol * s.peak, s.noise)) ? quiet + 1 : 0;
    }
    return s;
}

// L^r(R+) norm of samples on an increasing grid (trapezoid); r = inf gives the grid max.
inline double lr_norm(const std::vector<double>& x, const std::vector<cplx>& y, double r, double tail_tol = 1e-4,
                      double noise = 0.0) {
    if (x.size() != y.size()) throw std::invalid_argument("lr_norm: size mismatch");
    if (!(r >= 1.0)) throw std::invalid_argument("lr_norm: r must be >= 1");
    if (x.size() < 2) throw std::invalid_argument("lr_norm: need at least two nodes");
    double mx = 0.0;
    for (const auto& v : y) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return 0.0;
    if (std::abs(y.back()) > std::max(tail_tol * mx, noise)) throw DispersionError("lr_norm: tail not decayed, extend the grid");
    if (std::isinf(r)) return mx;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        if (!(h > 0)) throw std::invalid_argument("lr_norm: grid must be increasing");
        acc += 0.5 * h * (std::pow(std::abs(y[i]) / mx, r) + std::pow(std::abs(y[i + 1]) / mx, r));
    }
    return mx * std::pow(acc, 1.0 / r);
}

inline double lr_norm(const FieldSlice& s, double r, double tail_tol = 1e-4) {
    return lr_norm(s.x, s.y, r, tail_tol, s.noise);
}

inline double conjugate_exponent(double r) {
    if (std::isinf(r)) return 1.0;
    if (!(r > 1.0)) throw std::invalid_argument("conjugate_exponent: r must exceed 1");
    return r / (r - 1.0);
}

// C(t) = t^{1/4 - 1/(2r)} ||y||_r / sum_i ||Psi_i||_{r'}
inline double dispersion_ratio(double t, double r, double norm, double psi_sum) {
    if (!(t > 0 && t <= 1.0)) throw std::invalid_argument("dispersion_ratio: need 0 < t <= 1");
    if (!(r >= 2.0)) throw std::invalid_argument("dispersion_ratio: need r >= 2");
    if (!(psi_sum > 0)) throw DispersionError("dispersion_ratio: zero denominator (zero data)");
    const double e = 0.25 - (std::isinf(r) ? 0.0 : 0.5 / r);
    return std::pow(t, e) * norm / psi_sum;
}

// The five Psi_i built once; norms for any r' come from these.
struct PsiNormSet {
    double r = 2.0;
    double r_prime = 2.0;
    std::array<PsiNorm, 5> norms{};
    double sum = 0.0;
    bool converged = true;
};

inline std::vector<PsiSpec> make_psi_specs(const DataPair& d, const SpectralParams& p, double eps = default_epsilon) {
    std::vector<PsiSpec> out(5);
    parallel_for(5, [&](std::size_t i) { out[i] = make_psi_spec(int(i) + 1, d, p, 1e-12, eps); });
    return out;
}

inline PsiNormSet psi_norm_set(const std::vector<PsiSpec>& specs, double r, int refine = 1, double Y = 400.0) {
    if (specs.size() != 5) throw std::invalid_argument("psi_norm_set: need the five Psi specs");
    PsiNormSet s;
    s.r = r;
    s.r_prime = conjugate_exponent(r);
    parallel_for(5, [&](std::size_t i) { s.norms[i] = psi_norm(specs[i], s.r_prime, Y, refine); });
    for (const auto& n : s.norms) {
        s.sum += n.value;
        s.converged = s.converged && n.converged;
    }
    return s;
}

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of the log residuals
};

// least squares log(value) = intercept + slope log(t)
inline DecayFit decay_fit(const std::vector<NormSample>& s) {
    if (s.size() < 8) throw std::invalid_argument("decay_fit: need at least 8 samples");
    double tmin = inf, tmax = 0.0;
    for (const auto& q : s) {
        if (q.r != s.front().r) throw std::invalid_argument("decay_fit: samples must share r");
        if (!(q.t > 0 && q.t <= 1.0)) throw std::invalid_argument("decay_fit: t must lie in (0, 1]");
        if (!(q.value > 0) || !std::isfinite(q.value)) throw std::invalid_argument("decay_fit: degenerate sample value");
        tmin = std::min(tmin, q.t);
        tmax = std::max(tmax, q.t);
    }
    if (!(tmax > tmin)) throw std::invalid_argument("decay_fit: degenerate t samples");
    const double n = double(s.size());
    double mx = 0, my = 0;
    for (const auto& q : s) {
        mx += std::log(q.t) / n;
        my += std::log(q.value) / n;
    }
    double sxx = 0, sxy = 0;
    for (const auto& q : s) {
        const double a = std::log(q.t) - mx, b = std::log(q.value) - my;
        sxx += a * a;
        sxy += a * b;
    }
    DecayFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rr = 0;
    for (const auto& q : s) {
        const double e = std::log(q.value) - f.intercept - f.slope * std::log(q.t);
        rr += e * e;
    }
    f.residual = std::sqrt(rr / n);
    return f;
}

// 1/8 = 1/(4r) + 1/lambda with both exponents in [2, inf]
inline bool admissible_pair(double lambda, double r) {
    auto in = [](double v) { return v >= 2.0; };
    if (!in(lambda) || !in(r)) return false;
    const double il = std::isinf(lambda) ? 0.0 : 1.0 / lambda, ir = std::isinf(r) ? 0.0 : 1.0 / r;
    return std::abs(0.125 - 0.25 * ir - il) <= 1e-12;
}

// ||g||_{H^s} with g extended by zero: ((1/2pi) int (1 + tau^2)^s |g^(tau)|^2 dtau)^{1/2},
// g^(tau) = int e^{-i tau t} g(t) dt.
inline double hs_norm(const BoundaryDatum& g, double s, double rel_tol = 1e-10) {
    if (g.is_zero()) return 0.0;
    const double L = std::max(g.b - g.a, 1e-12);
    TTransform tt(g);
    auto f = [&](double tau) { return std::pow(1.0 + tau * tau, s) * std::norm(tt(cplx(0.0, -tau), g.T).value); };
    // Parseval: the s = 0 integral is 2 pi ||g||_2^2, a floor for every s >= 0
    const double base = 2 * pi * adaptive_quad([&](double u) { return cplx(std::norm(g(u)), 0.0); }, g.a, g.b,
                                               1e-12 * L * std::norm(g.amp)).value.real();
    const double W = 8.0 * 2 * pi / L;  // a few oscillations of g^ per block
    double total = 0.0;
    for (double dir : {1.0, -1.0}) {
        int quiet = 0;
        for (int k = 0; quiet < 3; ++k) {
            if (k > 100000) throw DispersionError("hs_norm: transform does not decay");
            auto g_dir = [&](double u) { return cplx(f(dir * u), 0.0); };
            const double part = adaptive_quad(g_dir, k * W, (k + 1) * W, rel_tol * 1e-2 * base).value.real();
            total += part;
            quiet = (part <= rel_tol * 1e-2 * base) ? quiet + 1 : 0;
        }
    }
    return std::sqrt(total / (2 * pi));
}

struct StrichartzReport {
    double lambda = inf, r = 2.0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    double h38 = 0.0, h18 = 0.0;  // ||g0||_{H^{3/8}}, ||g1||_{H^{1/8}}
    bool zero_data = false;
    std::vector<NormSample> samples;  // ||y(., t)||_r over the t grid
};

// t grid on (0, T]: n_uniform steps on (0, t_active], n_log log-spaced nodes on (t_active, T]
inline std::vector<double> strichartz_t_grid(double T, double t_active, int n_uniform, int n_log) {
    if (!(t_active > 0 && t_active < T) || n_uniform < 1 || n_log < 1)
        throw std::invalid_argument("strichartz_t_grid: need 0 < t_active < T and positive counts");
    std::vector<double> t;
    for (int j = 1; j <= n_uniform; ++j) t.push_back(t_active * j / n_uniform);
    const double r = std::log(T / t_active);
    for (int j = 1; j <= n_log; ++j) t.push_back(j == n_log ? T : t_active * std::exp(r * j / n_log));
    return t;
}

// ||y||_r at every t, slices taken in parallel over t
inline std::vector<std::vector<NormSample>> slice_norms(const ContourEvaluator& ev, const std::vector<double>& t_grid,
                                                        const std::vector<double>& r_values, double dx,
                                                        double tail_tol = 1e-4) {
    std::vector<std::vector<NormSample>> out(r_values.size(), std::vector<NormSample>(t_grid.size()));
    parallel_for(t_grid.size(), [&](std::size_t j) {
        const auto s = sample_slice(ev, t_grid[j], dx, tail_tol);
        for (std::size_t a = 0; a < r_values.size(); ++a)
            out[a][j] = {t_grid[j], r_values[a], lr_norm(s, r_values[a], tail_tol)};
    });
    return out;
}

// LHS/RHS from precomputed ||y(., t)||_r samples; y(., 0) = 0 closes the t integral at 0.
inline StrichartzReport strichartz_from_samples(double lambda, double r, const std::vector<NormSample>& samples,
                                                const BoundaryDatum& g0, const BoundaryDatum& g1) {
    if (!admissible_pair(lambda, r)) throw std::invalid_argument("strichartz_report: (lambda, r) is not admissible");
    StrichartzReport rep;
    rep.lambda = lambda;
    rep.r = r;
    rep.samples = samples;
    rep.h38 = hs_norm(g0, 3.0 / 8.0);
    rep.h18 = hs_norm(g1, 1.0 / 8.0);
    rep.rhs = rep.h38 + rep.h18;
    if (rep.rhs == 0.0) {
        rep.zero_data = true;
        return rep;
    }
    if (std::isinf(lambda)) {
        for (const auto& q : samples) rep.lhs = std::max(rep.lhs, q.value);
    } else {
        double mx = 0.0;
        for (const auto& q : samples) mx = std::max(mx, q.value);
        double acc = 0.0, tp = 0.0, vp = 0.0;
        for (const auto& q : samples) {
            if (!(q.t > tp)) throw std::invalid_argument("strichartz_report: t grid must increase from 0");
            const double v = mx > 0 ? std::pow(q.value / mx, lambda) : 0.0;
            acc += 0.5 * (q.t - tp) * (v + vp);
            tp = q.t;
            vp = v;
        }
        rep.lhs = mx * std::pow(acc, 1.0 / lambda);
    }
    rep.ratio = rep.lhs / rep.rhs;
    return rep;
}

inline StrichartzReport strichartz_report(const ContourEvaluator& ev, double lambda, double r,
                                          const std::vector<double>& t_grid, double dx) {
    if (!admissible_pair(lambda, r)) throw std::invalid_argument("strichartz_report: (lambda, r) is not admissible");
    const auto& d = ev.data();
    if (d.is_zero()) {
        StrichartzReport rep;
        rep.lambda = lambda;
        rep.r = r;
        rep.zero_data = true;
        return rep;
    }
    const auto n = slice_norms(ev, t_grid, {r}, dx);
    return strichartz_from_samples(lambda, r, n[0], d.g0->datum(), d.g1->datum());
}

struct DispersionOptions {
    std::vector<double> r_values{2.0, 4.0, inf};
    int n_t = 20;
    double t_lo = 0.02, t_hi = 1.0;
    double dx = 0.05;
    double tail_tol = 1e-4;
    int psi_refine = 1;
    double psi_Y = 400.0;
    double slope_margin = 0.05;
    double ratio_spread = 20.0;  // allowed max/min of C(t)
};

struct DispersionRow {
    double t, r, norm, psi_sum, ratio;
};

struct DispersionFit {
    double r = 2.0;
    DecayFit fit;
    double slope_bound = 0.0;
    double ratio_max = 0.0, ratio_min = 0.0;
    bool psi_converged = true;
    bool pass = false;  // slope within bound and ratio spread within limit
};

struct DispersionStudy {
    std::vector<DispersionRow> rows;
    std::vector<DispersionFit> fits;
    bool pass() const {
        for (const auto& f : fits)
            if (!f.pass) return false;
        return !fits.empty();
    }
};

inline std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0 && hi > lo) || n < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> t(n);
    for (int j = 0; j < n; ++j) t[j] = (j == n - 1) ? hi : lo * std::pow(hi / lo, double(j) / (n - 1));
    return t;
}

inline DispersionStudy dispersion_study(const ContourEvaluator& ev, const DispersionOptions& o) {
    const auto& d = ev.data();
    if (d.is_zero()) throw DispersionError("dispersion_study: zero data");
    if (o.t_hi > 1.0) throw std::invalid_argument("dispersion_study: the estimate holds for t <= 1");
    const auto t = log_grid(o.t_lo, o.t_hi, o.n_t);
    const auto specs = make_psi_specs(d, ev.params(), ev.options().eps);
    const auto norms = slice_norms(ev, t, o.r_values, o.dx, o.tail_tol);
    DispersionStudy st;
    for (std::size_t a = 0; a < o.r_values.size(); ++a) {
        const double r = o.r_values[a];
        const auto ps = psi_norm_set(specs, r, o.psi_refine, o.psi_Y);
        DispersionFit f;
        f.r = r;
        f.psi_converged = ps.converged;
        f.fit = decay_fit(norms[a]);
        f.slope_bound = -(0.25 - (std::isinf(r) ? 0.0 : 0.5 / r)) + o.slope_margin;
        f.ratio_min = inf;
        for (const auto& q : norms[a]) {
            const double c = dispersion_ratio(q.t, r, q.value, ps.sum);
            st.rows.push_back({q.t, r, q.value, ps.sum, c});
            f.ratio_max = std::max(f.ratio_max, c);
            f.ratio_min = std::min(f.ratio_min, c);
        }
        f.pass = f.fit.slope <= f.slope_bound && f.ratio_max <= o.ratio_spread * f.ratio_min;
        st.fits.push_back(f);
    }
    return st;
}

}  // namespace fokas

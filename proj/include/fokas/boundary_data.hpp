#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "fokas/complex_plane.hpp"

namespace fokas {

namespace detail {

// smooth step: 0 for u <= 0, 1 for u >= 1, C-infinity in between
inline double smooth_step(double u) {
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    const double f0 = std::exp(-1.0 / u), f1 = std::exp(-1.0 / (1.0 - u));
    return f0 / (f0 + f1);
}

}  // namespace detail

// C-infinity cutoff supported in [a, b], equal to 1 on [a + d, b - d].
inline double cutoff(double t, double a, double b, double d) {
    return detail::smooth_step((t - a) / d) * detail::smooth_step((b - t) / d);
}

enum class DatumKind { zero, gaussian_bump, poly_bump, file_samples, sampled, custom };

inline const char* to_string(DatumKind k) {
    switch (k) {
    case DatumKind::zero: return "zero";
    case DatumKind::gaussian_bump: return "gaussian";
    case DatumKind::poly_bump: return "poly_bump";
    case DatumKind::file_samples: return "file";
    case DatumKind::sampled: return "sampled";
    case DatumKind::custom: return "custom";
    }
    return "?";
}

// Compactly supported boundary trace g(t), t in (0, T).
class BoundaryDatum {
public:
    DatumKind kind = DatumKind::zero;
    double T = 1.0;
    double a = 0.0, b = 1.0;  // support
    cplx amp{0.0, 0.0};
    double center = 0.5, width = 0.1, ramp = 0.1;
    int m = 4;

    static BoundaryDatum zero(double T) {
        BoundaryDatum g;
        g.T = T;
        g.b = T;
        return g;
    }

    // A exp(-(t-c)^2/sigma^2) chi(t), chi the cutoff on [a, b] with ramp width d
    static BoundaryDatum gaussian(double T, cplx A, double c, double sigma, double a, double b, double d) {
        BoundaryDatum g;
        g.kind = DatumKind::gaussian_bump;
        g.T = T;
        g.amp = A;
        g.center = c;
        g.width = sigma;
        g.a = a;
        g.b = b;
        g.ramp = d;
        g.check();
        return g;
    }

    // A (t-a)^m (b-t)^m / ((b-a)/2)^(2m) on (a, b)
    static BoundaryDatum poly_bump(double T, cplx A, int m, double a, double b) {
        BoundaryDatum g;
        g.kind = DatumKind::poly_bump;
        g.T = T;
        g.amp = A;
        g.m = m;
        g.a = a;
        g.b = b;
        g.check();
        if (m < 4) throw std::invalid_argument("data.m must be >= 4");
        return g;
    }

    // uniformly spaced samples, cubic B-spline interpolation, tapered by the cutoff on [a, b]
    static BoundaryDatum from_samples(double T, const std::vector<double>& t, const std::vector<cplx>& v,
                                      double a, double b, double d, bool taper = true) {
        if (t.size() < 4 || t.size() != v.size()) throw std::invalid_argument("data.file needs >= 4 samples");
        const double h = (t.back() - t.front()) / double(t.size() - 1);
        for (std::size_t i = 1; i < t.size(); ++i)
            if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
                throw std::invalid_argument("data.file samples must be uniformly spaced");
        BoundaryDatum g;
        g.kind = taper ? DatumKind::file_samples : DatumKind::sampled;
        g.T = T;
        g.a = a;
        g.b = b;
        g.ramp = d;
        g.amp = 1.0;
        std::vector<double> re(v.size()), im(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            re[i] = v[i].real();
            im[i] = v[i].imag();
        }
        g.t0_ = t.front();
        g.t1_ = t.back();
        g.kh_ = h;
        g.re_ = std::make_shared<spline>(re.begin(), re.end(), t.front(), h);
        g.im_ = std::make_shared<spline>(im.begin(), im.end(), t.front(), h);
        g.check();
        return g;
    }

    // arbitrary evaluator, caller guarantees support in [a, b]
    static BoundaryDatum custom(double T, double a, double b, std::function<cplx(double)> f) {
        BoundaryDatum g;
        g.kind = DatumKind::custom;
        g.T = T;
        g.a = a;
        g.b = b;
        g.amp = 1.0;
        g.fn_ = std::make_shared<std::function<cplx(double)>>(std::move(f));
        g.check();
        return g;
    }

    static BoundaryDatum from_csv(double T, const std::string& path, double a, double b, double d) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open data file " + path);
        std::vector<double> t;
        std::vector<cplx> v;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            for (auto& ch : line)
                if (ch == ',') ch = ' ';
            std::istringstream ss(line);
            double tt, re, im;
            if (!(ss >> tt >> re >> im)) continue;  // header
            t.push_back(tt);
            v.emplace_back(re, im);
        }
        return from_samples(T, t, v, a, b, d);
    }

    cplx operator()(double t) const {
        if (kind == DatumKind::zero || t < a || t > b) return {0.0, 0.0};
        switch (kind) {
        case DatumKind::gaussian_bump: {
            const double u = (t - center) / width;
            return amp * (std::exp(-u * u) * cutoff(t, a, b, ramp));
        }
        case DatumKind::poly_bump: {
            const double half = 0.5 * (b - a);
            const double p = (t - a) * (b - t) / (half * half);
            return amp * std::pow(p, m);
        }
        case DatumKind::file_samples:
        case DatumKind::sampled: {
            if (t < t0_ || t > t1_) return {0.0, 0.0};
            const cplx v = amp * cplx((*re_)(t), (*im_)(t));
            return kind == DatumKind::file_samples ? v * cutoff(t, a, b, ramp) : v;
        }
        case DatumKind::custom: return amp * (*fn_)(t);
        default: return {0.0, 0.0};
        }
    }

    // interior points where the evaluator is only piecewise smooth (spline knots)
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        if (kind != DatumKind::file_samples && kind != DatumKind::sampled) return out;
        const long n = std::lround((t1_ - t0_) / kh_);
        for (long i = 0; i <= n; ++i) {
            const double x = t0_ + kh_ * double(i);
            if (x > a && x < b) out.push_back(x);
        }
        return out;
    }

    bool is_zero() const { return kind == DatumKind::zero || amp == cplx(0.0, 0.0); }

    // max |g| on a fine sampling of the support
    double max_abs(int n = 4001) const {
        double m = 0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs((*this)(a + (b - a) * i / (n - 1.0))));
        return m;
    }

    BoundaryDatum scaled(cplx s) const {
        BoundaryDatum g = *this;
        g.amp *= s;
        return g;
    }

private:
    using spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    std::shared_ptr<spline> re_, im_;
    std::shared_ptr<std::function<cplx(double)>> fn_;
    double t0_ = 0, t1_ = 0, kh_ = 1;

    void check() const {
        if (!(T > 0)) throw std::invalid_argument("data.T must be positive");
        if (!(a >= 0 && b <= T && a < b)) throw std::invalid_argument("data.support must lie in [0, T]");
        if (kind == DatumKind::gaussian_bump || kind == DatumKind::file_samples)
            if (!(ramp > 0 && 2 * ramp <= b - a)) throw std::invalid_argument("data.ramp must be in (0, (b-a)/2]");
        if (kind == DatumKind::gaussian_bump && !(width > 0)) throw std::invalid_argument("data.sigma must be positive");
    }
};

}  // namespace fokas

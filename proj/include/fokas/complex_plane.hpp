#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fokas {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double default_epsilon = pi / 100.0;
inline constexpr double inf = std::numeric_limits<double>::infinity();

struct SpectralParams {
    double alpha = 1.0;
    double beta = 1.0;

    SpectralParams() = default;
    SpectralParams(double a, double b) : alpha(a), beta(b) {
        if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument("params.alpha must be finite and nonzero");
    }

    // c in the hyperbola a^2 - b^2 = c bounding D+
    double c() const { return beta / (2.0 * alpha); }
    // real threshold sqrt(c) where the hyperbola meets the real axis (0 if c <= 0)
    double threshold() const { return c() > 0 ? std::sqrt(c()) : 0.0; }
};

// Sign configurations of (alpha, beta). beta == 0 is its own case.
enum class Config { A, B, C, D, BiharmonicPos, BiharmonicNeg };

inline Config config_of(const SpectralParams& p) {
    if (p.beta == 0.0) return p.alpha > 0 ? Config::BiharmonicPos : Config::BiharmonicNeg;
    if (p.alpha > 0) return p.beta > 0 ? Config::A : Config::B;
    return p.beta < 0 ? Config::C : Config::D;
}

// Square root with argument window [arg_lo, arg_lo + 2pi).
struct BranchCut {
    double epsilon = default_epsilon;
    double arg_lo = default_epsilon;
    bool validated = true;

    static BranchCut window(double lo, double eps = default_epsilon, bool ok = true) {
        if (!(eps > 0 && eps < pi / 8)) throw std::invalid_argument("branch cut epsilon outside (0, pi/8)");
        return BranchCut{eps, lo, ok};
    }

    double reduce(double a) const {
        const double hi = arg_lo + 2 * pi;
        while (a < arg_lo) a += 2 * pi;
        while (a >= hi) a -= 2 * pi;
        return a;
    }
};

enum class CutChoice { Section2, Section4 };

// Window named by the sign configuration. For alpha, beta > 0 the two
// published windows disagree; Section2 is the default, Section4 is kept
// selectable but flagged.
inline BranchCut paper_cut(const SpectralParams& p, CutChoice choice = CutChoice::Section2,
                           double eps = default_epsilon) {
    switch (config_of(p)) {
    case Config::A:
        if (choice == CutChoice::Section4) return BranchCut::window(-pi + eps, eps, false);
        return BranchCut::window(eps, eps);
    case Config::B:
    case Config::BiharmonicPos:
        return BranchCut::window(eps, eps);  // also the beta = 0 choice
    case Config::C:
        return BranchCut::window(-pi - eps, eps);
    case Config::D:
        return BranchCut::window(-eps, eps);
    case Config::BiharmonicNeg:
        return BranchCut::window(eps, eps);
    }
    return BranchCut::window(eps, eps);
}

// Window used on one connected component of D+. On the component with
// Re k > 0 the values of beta/alpha - k^2 sit in the lower half plane, on
// the one with Re k < 0 in the upper half plane; the cut is placed just
// outside each image so nu is analytic there with Im nu >= 0.
inline BranchCut component_cut(int side, double eps = default_epsilon) {
    return side > 0 ? BranchCut::window(eps, eps) : BranchCut::window(-eps, eps);
}

inline cplx branch_sqrt(cplx z, const BranchCut& cut) {
    if (z == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
    const double a = std::arg(z);
    const double r = cut.reduce(a);
    // std::sqrt returns half of std::arg; each 2pi shift flips the sign
    const long n = std::lround((r - a) / (2 * pi));
    const cplx s = std::sqrt(z);
    return (n % 2 == 0) ? s : -s;
}

inline cplx spectral_w(cplx k, const SpectralParams& p) {
    const cplx k2 = k * k;
    return cplx(0, -1) * (p.alpha * k2 * k2 - p.beta * k2);
}

inline cplx invariance_nu(cplx k, const SpectralParams& p, const BranchCut& cut) {
    return branch_sqrt(p.beta / p.alpha - k * k, cut);
}

enum class Region { inside_D_plus, on_boundary, outside };

inline double re_w(cplx k, const SpectralParams& p) {
    const double a = k.real(), b = k.imag();
    return 2 * a * b * (2 * p.alpha * (a * a - b * b) - p.beta);
}

inline Region region_classify(cplx k, const SpectralParams& p) {
    const double rw = re_w(k, p);
    if (std::abs(rw) <= 1e-12) return Region::on_boundary;
    if (k.imag() > 0 && rw < 0) return Region::inside_D_plus;
    return Region::outside;
}

enum class DecayClass { laplace_in_x, oscillatory_bounded, oscillatory_ray, mixed_hyperbola };

inline const char* to_string(DecayClass d) {
    switch (d) {
    case DecayClass::laplace_in_x: return "laplace-in-x";
    case DecayClass::oscillatory_bounded: return "oscillatory-bounded";
    case DecayClass::oscillatory_ray: return "oscillatory-ray";
    case DecayClass::mixed_hyperbola: return "mixed-hyperbola";
    }
    return "?";
}

enum class PathKind { imag_axis, real_axis, hyperbola };

// One oriented piece of the boundary of D+.
//
// position/velocity use the display parameter s (k = is, k = s, or
// k = +-s + i sqrt(s^2 - c)). Quadrature uses a second parameter u on
// [u_lo, u_hi] in which the path is smooth: u = s on the axes and
// u = Im k on hyperbolas with c > 0 (removes the square-root endpoint).
struct ContourPath {
    std::string label;
    PathKind kind = PathKind::real_axis;
    int side = +1;         // +1: component with Re k > 0, -1: Re k < 0
    int hsign = +1;        // hyperbola branch: k = hsign*s + i*sqrt(s^2 - c)
    double c = 0.0;        // hyperbola constant
    double s_lo = 0.0, s_hi = inf;
    double u_lo = 0.0, u_hi = inf;
    DecayClass decay = DecayClass::oscillatory_bounded;
    BranchCut cut;
    std::vector<double> singular_u;  // branch points of nu on the path (u values)
    bool use_m = false;              // hyperbola quadrature in u = Im k

    cplx position(double s) const {
        switch (kind) {
        case PathKind::imag_axis: return {0.0, s};
        case PathKind::real_axis: return {s, 0.0};
        case PathKind::hyperbola: return {hsign * s, std::sqrt(std::max(0.0, s * s - c))};
        }
        return {};
    }
    cplx velocity(double s) const {
        switch (kind) {
        case PathKind::imag_axis: return {0.0, 1.0};
        case PathKind::real_axis: return {1.0, 0.0};
        case PathKind::hyperbola: return {double(hsign), s / std::sqrt(s * s - c)};
        }
        return {};
    }
    cplx qpos(double u) const {
        if (kind == PathKind::hyperbola && use_m) return {hsign * std::sqrt(u * u + c), u};
        return position(u);
    }
    cplx qvel(double u) const {
        if (kind == PathKind::hyperbola && use_m) {
            const double s = std::sqrt(u * u + c);
            return {hsign * u / s, 1.0};
        }
        return velocity(u);
    }
    double s_of_u(double u) const { return (kind == PathKind::hyperbola && use_m) ? std::sqrt(u * u + c) : u; }
    double u_of_s(double s) const {
        return (kind == PathKind::hyperbola && use_m) ? std::sqrt(std::max(0.0, s * s - c)) : s;
    }
};

struct ContourSet {
    SpectralParams params;
    std::vector<ContourPath> paths;
    std::vector<int> orientation;  // +1 if traversed with increasing parameter
};

namespace detail {

inline ContourPath make_path(std::string label, PathKind kind, int side, double s_lo, double s_hi,
                             DecayClass dc, double eps, int hsign = +1, double c = 0.0) {
    ContourPath q;
    q.label = std::move(label);
    q.kind = kind;
    q.side = side;
    q.hsign = hsign;
    q.c = c;
    q.s_lo = s_lo;
    q.s_hi = s_hi;
    q.decay = dc;
    q.cut = component_cut(side, eps);
    q.use_m = (kind == PathKind::hyperbola && c > 0);
    q.u_lo = q.u_of_s(s_lo);
    q.u_hi = std::isinf(s_hi) ? inf : q.u_of_s(s_hi);
    return q;
}

}  // namespace detail

// Oriented boundary of D+ from Re w = 2ab(2 alpha (a^2 - b^2) - beta).
// alpha = beta = 1 gives gamma1..gamma5 with threshold 1/sqrt(2).
inline ContourSet build_contour(const SpectralParams& p, double eps = default_epsilon) {
    if (p.alpha == 0.0) throw std::invalid_argument("params.alpha must be nonzero");
    using detail::make_path;
    ContourSet cs;
    cs.params = p;
    const double c = p.c();
    const double sc = std::sqrt(std::abs(c));
    const double bp = std::sqrt(std::abs(p.beta / p.alpha));  // |branch point of nu|
    auto add = [&](ContourPath q, int orient) {
        cs.paths.push_back(std::move(q));
        cs.orientation.push_back(orient);
    };
    switch (config_of(p)) {
    case Config::A:
    case Config::BiharmonicPos: {
        add(make_path("gamma1", PathKind::imag_axis, +1, 0.0, inf, DecayClass::laplace_in_x, eps), -1);
        if (sc > 0) add(make_path("gamma2", PathKind::real_axis, +1, 0.0, sc, DecayClass::oscillatory_bounded, eps), +1);
        add(make_path("gamma3", PathKind::hyperbola, +1, sc, inf, DecayClass::mixed_hyperbola, eps, +1, c), +1);
        add(make_path("gamma4", PathKind::hyperbola, -1, sc, inf, DecayClass::mixed_hyperbola, eps, -1, c), +1);
        auto g5 = make_path("gamma5", PathKind::real_axis, -1, -inf, -sc, DecayClass::oscillatory_ray, eps);
        if (bp > 0) g5.singular_u.push_back(-bp);
        add(std::move(g5), +1);
        break;
    }
    case Config::C:
    case Config::BiharmonicNeg: {
        auto r = make_path("real_right", PathKind::real_axis, +1, sc, inf, DecayClass::oscillatory_ray, eps);
        if (bp > 0) r.singular_u.push_back(bp);
        add(std::move(r), +1);
        add(make_path("hyp_right", PathKind::hyperbola, +1, sc, inf, DecayClass::mixed_hyperbola, eps, +1, c), -1);
        add(make_path("hyp_left", PathKind::hyperbola, -1, sc, inf, DecayClass::mixed_hyperbola, eps, -1, c), -1);
        if (sc > 0) add(make_path("real_left", PathKind::real_axis, -1, -sc, 0.0, DecayClass::oscillatory_bounded, eps), +1);
        add(make_path("imag", PathKind::imag_axis, -1, 0.0, inf, DecayClass::laplace_in_x, eps), +1);
        break;
    }
    case Config::B: {
        auto im = make_path("imag_upper", PathKind::imag_axis, +1, sc, inf, DecayClass::laplace_in_x, eps);
        im.singular_u.push_back(bp);
        add(std::move(im), -1);
        add(make_path("hyp_right", PathKind::hyperbola, +1, 0.0, inf, DecayClass::mixed_hyperbola, eps, +1, c), +1);
        add(make_path("real_left", PathKind::real_axis, -1, -inf, 0.0, DecayClass::oscillatory_ray, eps), +1);
        add(make_path("imag_lower", PathKind::imag_axis, -1, 0.0, sc, DecayClass::laplace_in_x, eps), +1);
        add(make_path("hyp_left", PathKind::hyperbola, -1, 0.0, inf, DecayClass::mixed_hyperbola, eps, -1, c), +1);
        break;
    }
    case Config::D: {
        auto im = make_path("imag_upper", PathKind::imag_axis, -1, sc, inf, DecayClass::laplace_in_x, eps);
        im.singular_u.push_back(bp);
        add(std::move(im), +1);
        add(make_path("hyp_left", PathKind::hyperbola, -1, 0.0, inf, DecayClass::mixed_hyperbola, eps, -1, c), -1);
        add(make_path("real_right", PathKind::real_axis, +1, 0.0, inf, DecayClass::oscillatory_ray, eps), +1);
        add(make_path("hyp_right", PathKind::hyperbola, +1, 0.0, inf, DecayClass::mixed_hyperbola, eps, +1, c), -1);
        add(make_path("imag_lower", PathKind::imag_axis, +1, 0.0, sc, DecayClass::laplace_in_x, eps), -1);
        break;
    }
    }
    return cs;
}

// Unit normal pointing to the left of the direction of traversal.
inline cplx left_normal(const ContourPath& q, int orient, double s) {
    const cplx v = q.velocity(s) * double(orient);
    return cplx(0, 1) * v / std::abs(v);
}

// Representative finite parameter inside a path, for probes.
inline double path_mid(const ContourPath& q) {
    double lo = q.s_lo, hi = q.s_hi;
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(hi)) return lo + 1.0;
    if (std::isinf(lo)) return hi - 1.0;
    return 0.5 * (lo + hi);
}

}  // namespace fokas

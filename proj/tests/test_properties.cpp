// Randomized invariants; every generator is seeded so failures reproduce.
#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fokas;
using namespace fokas::testing;

namespace {

const cplx I(0, 1);
const std::vector<std::pair<double, double>> configs{{1, 1}, {1, -1}, {-1, -1}, {-1, 1}, {1, 0}, {2, 3}, {-0.5, 2}};

cplx rand_c(SplitMix64& g, double r) { return {g.uniform(-r, r), g.uniform(-r, r)}; }

}  // namespace

TEST_CASE("nu squares to beta/alpha - k^2 and preserves w", "[property]") {
    SplitMix64 g(1);
    for (auto [a, b] : configs) {
        const SpectralParams p(a, b);
        const auto cut = paper_cut(p);
        for (int i = 0; i < 500; ++i) {
            const cplx k = rand_c(g, 4.0);
            const cplx nu = invariance_nu(k, p, cut);
            const cplx target = b / a - k * k;
            CHECK(std::abs(nu * nu - target) <= 1e-13 * (1 + std::abs(target)));
            const cplx w = spectral_w(k, p);
            CHECK(std::abs(spectral_w(nu, p) - w) <= 1e-12 * (1 + std::abs(w)));
            CHECK(std::abs(spectral_w(-k, p) - w) <= 1e-12 * (1 + std::abs(w)));
        }
    }
}

TEST_CASE("nu has nonnegative imaginary part on D+", "[property]") {
    SplitMix64 g(2);
    for (auto [a, b] : configs) {
        const SpectralParams p(a, b);
        int hits = 0;
        for (int i = 0; i < 4000 && hits < 300; ++i) {
            const cplx k(g.uniform(-4, 4), g.uniform(0, 4));
            if (region_classify(k, p) != Region::inside_D_plus) continue;
            ++hits;
            const cplx nu = invariance_nu(k, p, component_cut(k.real() > 0 ? +1 : -1));
            CHECK(nu.imag() >= -1e-12 * (1 + std::abs(nu)));
        }
        CHECK(hits >= 100);
    }
}

TEST_CASE("branch_sqrt is continuous off its cut", "[property]") {
    SplitMix64 g(3);
    for (double lo : {default_epsilon, -pi + default_epsilon, -pi - default_epsilon, -default_epsilon}) {
        const auto cut = BranchCut::window(lo);
        for (int i = 0; i < 500; ++i) {
            const double r = g.uniform(0.1, 5), th = g.uniform(lo + 0.05, lo + 2 * pi - 0.05);
            const cplx z = std::polar(r, th), dz = std::polar(1e-7 * r, g.uniform(0, 2 * pi));
            CHECK(std::abs(branch_sqrt(z + dz, cut) - branch_sqrt(z, cut)) <= 1e-6 * std::sqrt(r));
        }
    }
}

TEST_CASE("contour paths lie on Re w = 0", "[property]") {
    SplitMix64 g(4);
    for (auto [a, b] : configs) {
        const SpectralParams p(a, b);
        const auto cs = build_contour(p);
        for (const auto& q : cs.paths)
            for (int i = 0; i < 50; ++i) {
                const double lo = std::isinf(q.s_lo) ? q.s_hi - 6 : q.s_lo;
                const double hi = std::isinf(q.s_hi) ? q.s_lo + 6 : q.s_hi;
                const cplx k = q.position(g.uniform(lo, hi));
                CHECK(std::abs(re_w(k, p)) <= 1e-12 * (1 + std::pow(std::abs(k), 4)));
            }
    }
}

TEST_CASE("t-transform linearity for random coefficients", "[property]") {
    SplitMix64 g(5);
    const auto u = gauss0(), v = BoundaryDatum::poly_bump(2.0, cplx(0.3, -1), 5, 0.25, 1.75);
    const TTransform tu(u), tv(v);
    for (int i = 0; i < 40; ++i) {
        const cplx a = rand_c(g, 2), b = rand_c(g, 2);
        const cplx kappa(-g.uniform(0, 5), g.uniform(-60, 60));
        const double t = g.uniform(0.1, 2.0);
        const auto m = BoundaryDatum::custom(2.0, 0.0, 2.0, [&](double s) { return a * u(s) + b * v(s); });
        const cplx lhs = TTransform(m)(kappa, t).value;
        const cplx rhs = a * tu(kappa, t).value + b * tv(kappa, t).value;
        // the floor is roundoff on the data's L1 norm (both data are bounded by ~1 on [0, 2])
        const double floor = 1e-14 * 2.0 * (std::abs(a) + std::abs(b));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max({std::abs(lhs), std::abs(a * tu(kappa, t).value), std::abs(b * tv(kappa, t).value)}) + floor);
    }
}

TEST_CASE("Psi^ vanishes exactly off its support", "[property]") {
    SplitMix64 g(6);
    const SpectralParams p(1, 1);
    const auto d = gauss_pair();
    const double sc = p.threshold();
    for (int i = 0; i < 200; ++i) {
        const double s = g.uniform(-5, 5);
        if (s < 0) CHECK(psi_hat(1, s, d, p) == cplx(0, 0));
        if (s < 0 || s > sc) CHECK(psi_hat(2, s, d, p) == cplx(0, 0));
        if (s < sc) {
            CHECK(psi_hat(3, s, d, p) == cplx(0, 0));
            CHECK(psi_hat(4, s, d, p) == cplx(0, 0));
        }
        if (s > -sc) CHECK(psi_hat(5, s, d, p) == cplx(0, 0));
    }
}

TEST_CASE("Filon and Laplace rules agree with adaptive quadrature", "[property]") {
    SplitMix64 g(7);
    for (int i = 0; i < 30; ++i) {
        PhaseSpec ph;
        ph.c = {0, g.uniform(-5, 5), g.uniform(-2, 2), g.uniform(-1, 1), g.uniform(0.2, 1.5)};
        ph.t = g.uniform(0.2, 3);
        const double b0 = g.uniform(0, 1), cq = g.uniform(0, 1);
        auto amp = [&](double x) { return std::exp(-b0 * x) / (1 + cq * x * x) + 0.3 * I * std::sin(x); };
        const double a = g.uniform(-2, 0), b = g.uniform(0.5, 3);
        const auto f = filon_segment(amp, ph, a, b, 1e-11, ph.stationary(a, b));
        const auto r = adaptive_quad([&](double x) { return amp(x) * std::exp(I * ph(x)); }, a, b, 1e-12, 400000);
        CHECK(std::abs(f.value - r.value) <= std::max(f.error_estimate + r.error_estimate, 1e-10));
    }
    for (int i = 0; i < 30; ++i) {
        const double A = g.uniform(0.5, 2), sg = g.uniform(0.3, 3), om = g.uniform(-10, 10), pp = g.uniform(-0.9, 0.9),
                     nu = g.uniform(0, 5);
        auto f = [&](double s) { return A * std::exp(-sg * s + I * om * s) * (1 + pp * std::sin(nu * s)); };
        const auto l = laplace_tail(f, sg, A * (1 + std::abs(pp)), 0.0, 1e-10);
        const auto r = adaptive_quad(f, 0.0, 60.0 / sg, 1e-13, 400000);
        CHECK(std::abs(l.value - r.value) <= std::max(l.error_estimate + r.error_estimate, 1e-12));
    }
}

TEST_CASE("certificate dominance at random points", "[property]") {
    SplitMix64 g(8);
    for (int i = 0; i < 150; ++i) {
        const double s = g.uniform(0.1, 10), y = g.uniform(-20, 20), t = std::exp(g.uniform(std::log(0.01), 0.0));
        CHECK(std::abs(oscillatory_I(OscKind::van, s, y, t)) <= vdc_certificate(OscKind::van, s, y, t).total_bound);
    }
}

TEST_CASE("L^p norms are log-convex and homogeneous", "[property]") {
    SplitMix64 g(9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x;
        std::vector<cplx> y;
        const cplx c1 = rand_c(g, 1), c2 = rand_c(g, 1);
        const double w = g.uniform(0.5, 3);
        for (int i = 0; i <= 4000; ++i) {
            x.push_back(30.0 * i / 4000);
            y.push_back((c1 + c2 * std::cos(w * x.back())) * std::exp(-x.back() * x.back() / 20));
        }
        const double n2 = lr_norm(x, y, 2.0), ninf = lr_norm(x, y, inf);
        for (double r : {3.0, 4.0, 8.0}) CHECK(lr_norm(x, y, r) <= std::pow(n2, 2 / r) * std::pow(ninf, 1 - 2 / r) * (1 + 1e-10));
        const cplx a = rand_c(g, 3);
        std::vector<cplx> ay;
        for (cplx v : y) ay.push_back(a * v);
        for (double r : {2.0, 4.0, inf}) CHECK(std::abs(lr_norm(x, ay, r) - std::abs(a) * lr_norm(x, y, r)) <= 1e-12 * lr_norm(x, ay, r));
    }
}

TEST_CASE("field is linear in the data for a random multiplier", "[property]") {
    SplitMix64 g(10);
    const SpectralParams p(1, 1);
    const ContourEvaluator ev(p, gauss_pair());
    const cplx a = rand_c(g, 3);
    const ContourEvaluator ev2(p, DataPair(gauss0().scaled(a), gauss1().scaled(a), 2.0));
    for (int i = 0; i < 20; ++i) {
        const double x = g.uniform(0, 10), t = g.uniform(0.05, 2);
        const cplx u = ev.evaluate(x, t);
        CHECK(std::abs(ev2.evaluate(x, t) - a * u) <= 1e-10 * std::abs(a) * std::max(std::abs(u), 1e-3));
        const auto comp = ev.components(x, t);
        cplx s{0.0, 0.0};
        for (cplx c : comp) s += c;
        CHECK(std::abs(s - u) <= 10 * ev.options().tol);
    }
}

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fokas;
using namespace fokas::testing;
using Catch::Matchers::WithinAbs;

TEST_CASE("t-transform of zero data vanishes", "[transforms]") {
    const auto z = BoundaryDatum::zero(2.0);
    for (cplx kappa : {cplx(0, 0), cplx(0, 7), cplx(-3, 1)}) CHECK(t_transform(z, kappa, 2.0) == cplx(0, 0));
}

TEST_CASE("t-transform of s(T-s) at kappa = 0 is T^3/6", "[transforms]") {
    const double T = 1.7;
    const auto g = BoundaryDatum::custom(T, 0.0, T, [T](double s) { return cplx(s * (T - s), 0.0); });
    CHECK(rel(t_transform(g, 0.0, T), T * T * T / 6) <= 1e-13);
}

TEST_CASE("t-transform at kappa = 10i matches adaptive quadrature", "[transforms]") {
    const auto g = gauss0();
    const cplx kappa(0, 10);
    for (double tu : {0.7, 1.3, 2.0}) {
        const auto ref = adaptive_quad([&](double s) { return std::exp(kappa * s) * g(s); }, 0.0, tu, 1e-14);
        CHECK(rel(t_transform(g, kappa, tu), ref.value) <= 1e-10);
    }
}

TEST_CASE("t-transform argument checks", "[transforms]") {
    const auto g = gauss0();
    CHECK_THROWS(t_transform(g, cplx(0, 1), 0.0));
    CHECK_THROWS(t_transform(g, cplx(0.5, 1), 1.0));
}

TEST_CASE("t-transform is linear", "[transforms]") {
    const auto g = gauss0(), h = BoundaryDatum::poly_bump(2.0, 1.0, 4, 0.2, 1.8);
    const cplx a(0.3, -1.2), b(-2.0, 0.4);
    const auto sum = BoundaryDatum::custom(2.0, 0.0, 2.0, [&](double s) { return a * g(s) + b * h(s); });
    for (cplx kappa : {cplx(0, 3), cplx(-0.5, -20), cplx(-2, 0)}) {
        const cplx lhs = t_transform(sum, kappa, 1.5);
        const cplx rhs = a * t_transform(g, kappa, 1.5) + b * t_transform(h, kappa, 1.5);
        CHECK(rel(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("G vanishes for zero data, at k = 0 and at the threshold", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto cut = paper_cut(p);
    const auto z = zero_pair();
    CHECK(spectral_G(cplx(0.3, 0.2), z, 2.0, p, cut) == cplx(0, 0));
    const auto d = gauss_pair();
    CHECK(spectral_G(0.0, d, 2.0, p, cut) == cplx(0, 0));
    const double s0 = 1 / std::sqrt(2.0);
    CHECK(std::abs(invariance_nu(s0, p, cut) + s0) <= 1e-15);
    CHECK(std::abs(spectral_G(s0, d, 2.0, p, cut)) <= 1e-14);
}

TEST_CASE("G is jointly linear in the data", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto cut = paper_cut(p);
    const auto g0 = gauss0(), g1 = gauss1();
    const auto h0 = BoundaryDatum::poly_bump(2.0, cplx(0.5, 0.5), 4, 0.1, 1.9);
    const auto h1 = BoundaryDatum::poly_bump(2.0, -1.0, 5, 0.3, 1.6);
    const cplx a(1.1, -0.2), b(0.0, 2.0);
    auto mix = [&](const BoundaryDatum& u, const BoundaryDatum& v) {
        return BoundaryDatum::custom(2.0, 0.0, 2.0, [&, u, v](double s) { return a * u(s) + b * v(s); });
    };
    const auto m0 = mix(g0, h0), m1 = mix(g1, h1);
    // k with Re w(k) <= 0, where the t-transforms are defined
    for (cplx k : {cplx(0.4, 0.0), cplx(0, 1.3), cplx(0.3, 0.2), cplx(-2, 0), cplx(1.5, -0.3)}) {
        const cplx lhs = spectral_G(k, m0, m1, 2.0, p, cut);
        const cplx rhs = a * spectral_G(k, g0, g1, 2.0, p, cut) + b * spectral_G(k, h0, h1, 2.0, p, cut);
        CHECK(rel(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("Psi^ pieces", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto d = gauss_pair();
    CHECK(psi_hat(1, -1.0, d, p) == cplx(0, 0));
    CHECK(psi_hat(2, 0.8, d, p) == cplx(0, 0));
    CHECK(psi_hat(3, 0.5, d, p) == cplx(0, 0));
    CHECK(psi_hat(5, -0.5, d, p) == cplx(0, 0));
    CHECK(psi_hat(2, 0.5, d, p) == spectral_G(0.5, d, 2.0, p, component_cut(+1)));
    CHECK(psi_hat(1, 1.5, d, p) == spectral_G(cplx(0, 1.5), d, 2.0, p, component_cut(+1)));
    CHECK_THROWS(psi_hat(1, 1.0, d, SpectralParams(1, -1)));
    CHECK_THROWS(psi_hat(6, 1.0, d, p));
}

TEST_CASE("Psi^3 and Psi^4 have finite limits at the threshold", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto d = gauss_pair();
    const double s0 = 1 / std::sqrt(2.0);
    for (int i : {3, 4}) {
        // Psi^ is smooth in m = (s^2 - 1/2)^{1/2} ~ sqrt(s - s0): differences shrink by about sqrt(10)
        std::vector<cplx> v;
        for (int j = 4; j <= 8; ++j) v.push_back(psi_hat(i, s0 + std::pow(10.0, -j), d, p));
        std::vector<double> diff;
        for (std::size_t q = 1; q < v.size(); ++q) diff.push_back(std::abs(v[q] - v[q - 1]));
        for (std::size_t q = 1; q < diff.size(); ++q) CHECK(diff[q] <= 0.5 * diff[q - 1]);
        // extrapolating linearly in m to m = 0 gives the same limit from either end
        auto mm = [s0](int j) { const double s = s0 + std::pow(10.0, -j); return std::sqrt(s * s - 0.5); };
        auto limit = [&](int j) { return (v[j - 4] * mm(j + 1) - v[j - 3] * mm(j)) / (mm(j + 1) - mm(j)); };
        CHECK(rel(limit(5), limit(7)) <= 1e-3);
        CHECK(std::isfinite(std::abs(v.back())));
        // stabilized form against the direct product just inside the switch window
        const double s = s0 + 0.99e-4;
        const double m = std::sqrt(s * s - 0.5);
        const cplx k((i == 3 ? 1 : -1) * s, m);
        const cplx jac = (i == 3) ? cplx(1.0, s / m) : cplx(-1.0, s / m);
        const cplx direct = spectral_G(k, d, d.T, p, component_cut(i == 3 ? 1 : -1)) * jac;
        CHECK(rel(psi_hat(i, s, d, p), direct) <= 1e-8);
    }
}

TEST_CASE("Psi of zero data is zero", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto z = zero_pair();
    for (int i = 1; i <= 5; ++i) {
        const auto ps = make_psi_spec(i, z, p);
        for (cplx v : psi_from_hat(ps, {-3.0, 0.0, 2.5})) CHECK(v == cplx(0, 0));
        CHECK(psi_norm(ps, 1.0).value == 0.0);
        CHECK(psi_norm(ps, 2.0).value == 0.0);
    }
}

TEST_CASE("Psi_2 matches direct inversion and round-trips", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto d = gauss_pair();
    const auto ps = make_psi_spec(2, d, p);
    const double s0 = 1 / std::sqrt(2.0);
    const std::vector<double> ys{-7.0, -1.0, 0.0, 0.4, 5.5};
    const auto v = psi_from_hat(ps, ys);
    for (std::size_t q = 0; q < ys.size(); ++q) {
        const auto ref = adaptive_quad([&](double s) { return std::exp(cplx(0, s * ys[q])) * psi_hat(2, s, d, p); }, 0.0,
                                       s0, 1e-13);
        CHECK(std::abs(v[q] - ref.value / (2 * pi)) <= 1e-8 * std::max(1.0, std::abs(v[q])));
    }
}

TEST_CASE("Plancherel for Psi_1", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto ps = make_psi_spec(1, gauss_pair(), p);
    const auto n = psi_norm(ps, 2.0);
    CHECK(n.converged);
    CHECK(std::abs(n.value - psi_hat_l2(ps) / std::sqrt(2 * pi)) <= 1e-6 * n.value);
}

TEST_CASE("L1 norm of Psi_1 is stable under refinement", "[transforms]") {
    const SpectralParams p(1, 1);
    const auto ps = make_psi_spec(1, gauss_pair(), p);
    const double a = psi_norm(ps, 1.0, 400.0, 1).value, b = psi_norm(ps, 1.0, 400.0, 2).value;
    CHECK(std::abs(a - b) <= 1e-5 * b);
}

TEST_CASE("psi_norm rejects r' outside [1, 2]", "[transforms]") {
    const auto ps = make_psi_spec(1, gauss_pair(), SpectralParams(1, 1));
    CHECK_THROWS(psi_norm(ps, 0.5));
    CHECK_THROWS(psi_norm(ps, 3.0));
}

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fokas;
using namespace fokas::testing;

namespace {

const cplx I(0, 1);

const ContourEvaluator& gauss_ev() {
    static const ContourEvaluator ev(SpectralParams(1, 1), gauss_pair());
    return ev;
}

// Brute-force contour integral of -(1/2pi) e^{ikx - wt} G(k; T) over one path,
// cut off where |k| is far beyond the data's spectral content.
cplx path_oracle(const ContourPath& q, int orient, const DataPair& d, const SpectralParams& p, double x, double t) {
    auto f = [&](double u) {
        const cplx k = q.qpos(u);
        const cplx w = spectral_w(k, p);
        return -p.alpha / (2 * pi) * std::exp(I * k * x - w * t) * spectral_G(k, d, d.T, p, q.cut) * q.qvel(u);
    };
    const double U = 10.0;
    double lo = q.u_lo, hi = q.u_hi;
    if (std::isinf(hi)) hi = U;
    if (std::isinf(lo)) lo = -U;
    return double(orient) * adaptive_quad(f, lo, hi, 1e-12, 400000).value;
}

}  // namespace

TEST_CASE("zero data gives the zero field", "[evaluator]") {
    const ContourEvaluator ev(SpectralParams(1, 1), zero_pair());
    for (double x : {0.001, 1.0, 7.0})
        for (double t : {0.1, 1.0, 2.0}) {
            CHECK(ev.evaluate(x, t) == cplx(0, 0));
            CHECK(derivative_field(ev, x, t, 4, 1) == cplx(0, 0));
            for (cplx c : ev.components(x, t)) CHECK(c == cplx(0, 0));
        }
    const auto tr = trace_report(ev, {0.5, 1.0, 1.5}, 1e-3);
    CHECK(tr.max_err0 <= 10 * ev.options().tol);
    CHECK(tr.max_err1 <= 10 * ev.options().tol);
}

TEST_CASE("component sum matches brute-force contour quadrature", "[evaluator]") {
    const auto& ev = gauss_ev();
    const auto& cs = ev.contour();
    const auto d = gauss_pair();
    const double x = 1.0, t = 0.5;
    const auto comp = ev.components(x, t);
    cplx total{0.0, 0.0};
    for (std::size_t i = 0; i < cs.paths.size(); ++i) {
        const cplx ref = path_oracle(cs.paths[i], cs.orientation[i], d, cs.params, x, t);
        CHECK(std::abs(comp[i] - ref) <= 1e-8);
        total += comp[i];
    }
    CHECK(std::abs(total - ev.evaluate(x, t)) <= 1e-14);
}

TEST_CASE("gamma1 component equals its Laplace-type display", "[evaluator]") {
    const auto& ev = gauss_ev();
    const auto d = gauss_pair();
    const SpectralParams p(1, 1);
    const double x = 2.0, t = 1.0;
    auto f = [&](double s) {
        return std::exp(-s * x + I * (s * s * s * s + s * s) * t) * spectral_G(I * s, d, 2.0, p, component_cut(+1));
    };
    const cplx ref = I / (2 * pi) * adaptive_quad(f, 0.0, 40.0, 1e-13, 400000).value;
    CHECK(std::abs(ev.component(0, x, t) - ref) <= 1e-9);
}

TEST_CASE("field is linear in the data", "[evaluator]") {
    const auto& ev = gauss_ev();
    const cplx a(-0.7, 1.9);
    const ContourEvaluator ev2(SpectralParams(1, 1), DataPair(gauss0().scaled(a), gauss1().scaled(a), 2.0));
    for (auto [x, t] : std::vector<std::pair<double, double>>{{0.01, 1.2}, {1.0, 0.5}, {4.0, 2.0}}) {
        const cplx u = ev.evaluate(x, t);
        CHECK(std::abs(ev2.evaluate(x, t) - a * u) <= 1e-10 * std::abs(a) * std::max(std::abs(u), 1e-3));
    }
}

TEST_CASE("one-shot helpers agree with the evaluator", "[evaluator]") {
    const auto& ev = gauss_ev();
    const SpectralParams p(1, 1);
    CHECK(std::abs(evaluate_point(1.0, 0.5, gauss0(), gauss1(), p) - ev.evaluate(1.0, 0.5)) <= 1e-13);
    CHECK(std::abs(evaluate_component(3, 1.0, 0.5, gauss0(), gauss1(), p) - ev.component(2, 1.0, 0.5)) <= 1e-13);
    CHECK_THROWS(evaluate_component(9, 1.0, 0.5, gauss0(), gauss1(), p));
}

TEST_CASE("PDE residual vanishes and derivatives match finite differences", "[evaluator]") {
    const auto& ev = gauss_ev();
    const double bound = 10 * ev.options().tol * ev.data_scale();
    for (auto [x, t] : std::vector<std::pair<double, double>>{{0.3, 0.4}, {1.0, 1.0}, {2.5, 1.7}})
        CHECK(std::abs(pde_residual(ev, x, t)) <= bound);
    const double h = 1e-4;
    for (double t : {0.8, 1.0, 1.3}) {
        const double x = 1e-3 + h;
        const cplx fd = (ev.evaluate(x + h, t) - ev.evaluate(x - h, t)) / (2 * h);
        const cplx yx = derivative_field(ev, x, t, 1, 0);
        CHECK(std::abs(fd - yx) <= 1e-5 * std::abs(yx));
    }
    CHECK_THROWS(derivative_field(ev, 1.0, 1.0, 5, 0));
    CHECK_THROWS(derivative_field(ev, 1.0, 1.0, 0, 2));
}

TEST_CASE("boundary traces are reproduced", "[evaluator]") {
    const auto& ev = gauss_ev();
    const auto tr = trace_report(ev, EvaluationGrid::linear_t(0.05, 2.0, 40), 1e-3);
    CHECK(tr.rel0() <= 1e-3);
    CHECK(tr.rel1() <= 5e-3);
    CHECK_THROWS(trace_report(ev, {1.0}, 0.5));
}

TEST_CASE("solve_field fills the grid and splits into components", "[evaluator]") {
    const auto& ev = gauss_ev();
    const auto grid = EvaluationGrid::graded(1e-3, 1.0, 5.0, 5, 8, {0.5, 1.0});
    const auto f = solve_field(ev, grid, true);
    REQUIRE(f.values.size() == 2);
    REQUIRE(f.components.size() == ev.tables().size());
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < grid.x.size(); ++i) {
            cplx s{0.0, 0.0};
            for (const auto& c : f.components) s += c[j][i];
            CHECK(std::isfinite(std::abs(f.values[j][i])));
            CHECK(std::abs(s - f.values[j][i]) <= 10 * f.tol);
        }
    CHECK_THROWS(EvaluationGrid::graded(0.0, 1.0, 5.0, 5, 8, {1.0}));
    CHECK_THROWS(solve_field(ev, EvaluationGrid::graded(1e-3, 1.0, 5.0, 5, 8, {1.0, 3.0})));
}

TEST_CASE("kernel K1", "[evaluator]") {
    for (double x : {0.1, 0.5, 2.0})
        for (double y : {-20.0, 0.0, 13.0})
            for (double t : {0.05, 1.0}) CHECK(std::abs(kernel_K(1, y, x, t)) <= 1 / x);
    const PhaseSpec ph = model_phase(OscKind::van, 0.0, 1.0);
    auto ref = adaptive_quad([&](double s) { return std::exp(-s + I * ph(s)); }, 0.0, 40.0, 1e-13, 400000);
    CHECK(std::abs(kernel_K(1, 0.0, 1.0, 1.0) - ref.value) <= 1e-8);
    CHECK_THROWS(kernel_K(1, 0.0, -1.0, 1.0));
    CHECK_THROWS(kernel_K(6, 0.0, 1.0, 1.0));
}

TEST_CASE("kernels K3 and K5 against brute force", "[evaluator]") {
    // x = 3 damps the gamma3 integrand to 1e-12 by s ~ 10
    const double x = 3.0, y = 0.5, t = 0.7, s0 = inv_sqrt2;
    const auto ph = model_phase(OscKind::van2, x - y, t);
    // s = s0 + v^2 removes the square-root point of m
    auto f3 = [&](double v) {
        const double s = s0 + v * v;
        return 2 * v * std::exp(-x * std::sqrt(s * s - 0.5) + I * ph(s));
    };
    auto r3 = adaptive_quad(f3, 0.0, 3.2, 1e-13, 400000);
    CHECK(std::abs(kernel_K(3, y, x, t) - r3.value) <= 1e-8);

    // K5 through a smooth window on the oscillatory tail
    auto win = [](double s) { return 0.5 * std::erfc((s - 6.0) / 0.5); };
    auto f5 = [&](double s) { return win(s) * std::exp(-I * s * (x - y) + I * (s * s * s * s - s * s) * t); };
    const cplx r5 = -adaptive_quad(f5, s0, 8.0, 1e-13, 400000).value / (2 * pi);
    CHECK(std::abs(kernel_K(5, y, x, t) - r5) <= 1e-8);
}

TEST_CASE("evaluator rejects points outside its tables", "[evaluator]") {
    const auto& ev = gauss_ev();
    CHECK_THROWS(ev.evaluate(-1.0, 1.0));
    CHECK_THROWS(ev.evaluate(1.0, 3.0));
}

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace fokas;
using namespace fokas::testing;

namespace {

const cplx I(0, 1);

// y = e^{-x} tau(t) solves y_t = i(y'''' + y'') + f for f = e^{-x}(tau' - 2i tau)
struct Manufactured {
    double T = 0.1;
    static cplx tau(double t) { return {std::cos(3 * t), t}; }
    static cplx dtau(double t) { return {-3 * std::sin(3 * t), 1.0}; }

    double error(int Nx, double dt) const {
        const SpectralParams p(1, 1);
        const auto g0 = BoundaryDatum::custom(T, 0.0, T, [](double t) { return tau(t); });
        const auto g1 = BoundaryDatum::custom(T, 0.0, T, [](double t) { return -tau(t); });
        FDOptions o;
        o.forcing = [](double x, double t) { return std::exp(-x) * (dtau(t) - 2.0 * I * tau(t)); };
        o.initial = [](double x) { return std::exp(-x) * tau(0.0); };
        const auto s = fd_solve(p, g0, g1, FDGrid::make(30.0, Nx, T, dt), o);
        double e = 0;
        for (std::size_t i = 0; i < s.x.size(); ++i) e = std::max(e, std::abs(s.values[0][i] - std::exp(-s.x[i]) * tau(T)));
        return e;
    }
};

double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_CASE("zero data gives the zero FD field", "[oracle]") {
    const auto z = BoundaryDatum::zero(0.5);
    const auto s = fd_solve(SpectralParams(1, 1), z, z, FDGrid::make(10.0, 200, 0.5, 0.01));
    for (const auto& row : s.values)
        for (cplx v : row) CHECK(v == cplx(0, 0));
    CHECK(global_relation_residual(s, SpectralParams(1, 1), cplx(0, -2), 0.5) <= 1e-10);
}

TEST_CASE("Crank-Nicolson is second order in time", "[oracle]") {
    const Manufactured m;
    const double e1 = m.error(1200, 0.02), e2 = m.error(1200, 0.01), e3 = m.error(1200, 0.005);
    CHECK(order(e1, e2) >= 1.9);
    CHECK(order(e2, e3) >= 1.9);
}

TEST_CASE("spatial stencils are fourth order", "[oracle]") {
    const Manufactured m;
    const double e1 = m.error(300, 1e-5), e2 = m.error(600, 1e-5), e3 = m.error(1200, 1e-5);
    CHECK(order(e1, e2) >= 3.7);
    CHECK(order(e2, e3) >= 3.7);
}

TEST_CASE("homogeneous boundary data conserve the L2 norm", "[oracle]") {
    const auto z = BoundaryDatum::zero(0.05);
    FDOptions o;
    o.initial = [](double x) { return cplx(std::exp(-(x - 5) * (x - 5)), 0.0); };
    o.t_out = {0.01, 0.02, 0.03, 0.04, 0.05};
    const auto s = fd_solve(SpectralParams(1, 1), z, z, FDGrid::make(20.0, 800, 0.05, 1e-3), o);
    auto norm = [&](const std::vector<cplx>& v) {
        double a = 0;
        for (cplx c : v) a += std::norm(c);
        return std::sqrt(a * s.grid.h());
    };
    for (std::size_t j = 1; j < s.values.size(); ++j)
        CHECK(std::abs(norm(s.values[j]) - norm(s.values[j - 1])) <= 1e-6 * 10);  // 10 steps per snapshot
}

TEST_CASE("half-line Fourier transform", "[oracle]") {
    std::vector<double> x;
    std::vector<cplx> y, z;
    for (int i = 0; i <= 4000; ++i) {
        x.push_back(40.0 * i / 4000);
        y.push_back(std::exp(-x.back()));
        z.push_back(0.0);
    }
    CHECK(half_line_fourier(x, z, cplx(1, -1)) == cplx(0, 0));
    CHECK(std::abs(half_line_fourier(x, y, 0.0) - 1.0) <= 1e-8);
    // 1/(1 + ik) at k = -i/2 is 1/(3/2)
    CHECK(std::abs(half_line_fourier(x, y, cplx(0, -0.5)) - 2.0 / 3.0) <= 1e-6);
    CHECK(std::abs(half_line_fourier(x, y, cplx(2, -0.3)) - 1.0 / (1.0 + I * cplx(2, -0.3))) <= 1e-6);
    CHECK_THROWS(half_line_fourier(x, y, cplx(0, 0.1)));
}

TEST_CASE("global relation on the gaussian FD solution", "[oracle]") {
    const SpectralParams p(1, 1);
    FDOptions o;
    o.t_out = {1.0, 2.0};
    std::vector<double> r1, r2;
    for (double dt : {2e-3, 1e-3}) {
        const auto s = fd_solve(p, gauss0(), gauss1(), FDGrid::make(20.0, 2000, 2.0, dt), o);
        r1.push_back(global_relation_residual(s, p, cplx(0, -2), 2.0));
        r2.push_back(global_relation_residual(s, p, cplx(3, -1), 1.0));
    }
    CHECK(r1.back() <= 5e-3);
    CHECK(r2.back() <= 5e-3);
    CHECK(r1[1] < r1[0]);
    CHECK(r2[1] < r2[0]);
}

TEST_CASE("Fokas field against FD under refinement", "[oracle]") {
    const SpectralParams p(1, 1);
    const ContourEvaluator ev(p, gauss_pair());
    const auto grid = EvaluationGrid::graded(1e-3, 0.1, 20.0, 10, 400, {1.0});
    const auto field = solve_field(ev, grid);
    std::vector<double> diff;
    FDOptions o;
    o.t_out = {1.0};
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        const auto s = fd_solve(p, gauss0(), gauss1(), FDGrid::make(20.0, 2000, 1.0, dt), o);
        diff.push_back(compare_fields(field, s).worst_rel_l2);
    }
    CHECK(diff[1] < diff[0]);
    CHECK(diff[2] < diff[1]);
    CHECK(diff[2] <= 5e-3);
}

TEST_CASE("compare_fields of a field with itself", "[oracle]") {
    const SpectralParams p(1, 1);
    FDOptions o;
    o.t_out = {0.5, 1.0};
    const auto s = fd_solve(p, gauss0(), gauss1(), FDGrid::make(20.0, 1000, 1.0, 2e-3), o);
    SolutionField f;
    f.params = p;
    f.grid.x.assign(s.x.begin() + 1, s.x.end());
    f.grid.t = o.t_out;
    for (const auto& row : s.values) f.values.emplace_back(row.begin() + 1, row.end());
    const auto r = compare_fields(f, s);
    for (double v : r.rel_l2) CHECK(v <= 1e-12);
    for (double v : r.max_abs) CHECK(v <= 1e-12);

    // off-node interpolation error shrinks like h^4
    SolutionField g = f;
    g.grid.x.clear();
    g.values.assign(2, {});
    for (double x = 0.013; x < 19.9; x += 0.1) g.grid.x.push_back(x);
    for (std::size_t j = 0; j < 2; ++j)
        for (double x : g.grid.x) g.values[j].push_back(std::exp(-x) * cplx(1, j));
    SolutionField h = g;
    FDSolution coarse = s, fine = s;
    for (auto* sol : {&coarse, &fine}) {
        const int N = (sol == &coarse) ? 1000 : 2000;
        sol->grid = FDGrid::make(20.0, N, 1.0, 2e-3);
        sol->x.clear();
        for (int i = 0; i <= N; ++i) sol->x.push_back(20.0 * i / N);
        sol->values.assign(2, {});
        for (std::size_t j = 0; j < 2; ++j)
            for (double x : sol->x) sol->values[j].push_back(std::exp(-x) * cplx(1, j));
    }
    const double ec = compare_fields(h, coarse).worst_rel_l2, ef = compare_fields(h, fine).worst_rel_l2;
    CHECK(ec <= 1e-6);
    CHECK(ef < ec / 8);
}

TEST_CASE("FD grid validation", "[oracle]") {
    CHECK_THROWS(FDGrid::make(5.0, 2000, 1.0, 1e-3));
    CHECK_THROWS(FDGrid::make(20.0, 100, 1.0, 1e-3));
    const auto g = FDGrid::make(20.0, 2000, 1.0, 3e-3);
    CHECK(std::abs(g.T() - 1.0) <= 1e-15);
}

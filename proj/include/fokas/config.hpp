#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fokas/boundary_data.hpp"
#include "fokas/complex_plane.hpp"
#include "fokas/evaluator.hpp"
#include "fokas/oracle.hpp"

namespace fokas {

using json = nlohmann::ordered_json;

// Thrown with every violation found, one per line, each naming its field.
struct ConfigError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ConfigError(std::vector<std::string> v) : std::runtime_error(join(v)), violations(std::move(v)) {}

    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& e : v) s += "\n  " + e;
        return s;
    }
};

struct DatumSpec {
    std::string kind = "gaussian_bump";  // gaussian_bump | poly_bump | file_samples | zero
    cplx amp{1.0, 0.0};
    double center = 1.0, width = 0.25;
    double a = 0.0, b = 2.0;
    double ramp = 0.1;
    int m = 4;
    std::string path;
};

struct XGridSpec {
    double min = 1e-3, split = 1.0, max = 20.0;
    int n_geo = 40, n_lin = 190;
};

struct TGridSpec {
    std::string kind = "linear";  // linear | log
    double min = 0.25, max = 1.0;
    int count = 4;
};

struct QuadratureSpec {
    double tol = 1e-8;
    double x_max = 20.0;
    double panel_phase = 4 * pi;
    double h_max = 0.5;
    double g_floor = 1e-13;
    double min_extent = 2.0;
    double eps = default_epsilon;
};

struct ContourCmd {
    int samples = 200;    // per path
    double s_span = 4.0;  // parameter length shown on infinite paths
};

struct KernelsCmd {
    double x = 0.2;
    std::vector<double> t{1.0, 0.25, 0.0625, 0.015625};
    double y_min = -20, y_max = 20;
    int n_y = 161;
};

struct PsiCmd {
    double y_max = 20.0;
    int n_y = 401;
    std::vector<double> r_prime{1.0, 4.0 / 3.0, 2.0};
    double Y = 400.0;
    int refine = 1;
};

struct VdcCmd {
    int n = 10;
    double s_lo = 0.1, s_hi = 10.0;
    double shift_lo = -20.0, shift_hi = 20.0;
    double t_lo = 0.01, t_hi = 1.0;
};

struct DispersionCmd {
    int n_t = 20;
    double t_lo = 0.02, t_hi = 1.0;
    double dx = 0.05;
    double x_max = 2000.0;
    double tol = 1e-6;
    double panel_phase = 8 * pi;
};

struct OracleCmd {
    double L = 20.0;
    int Nx = 2000;
    double dt = 1e-3;
    double T = 1.0;  // FD run length
    std::vector<double> t_out{0.25, 0.5, 1.0};
};

struct RunConfig {
    SpectralParams params{1.0, 1.0};
    double T = 2.0;
    std::string preset = "gaussian";
    DatumSpec g0, g1;
    XGridSpec x;
    TGridSpec t;
    QuadratureSpec quad;
    ContourCmd contour;
    KernelsCmd kernels;
    PsiCmd psi;
    VdcCmd vdc;
    DispersionCmd dispersion;
    OracleCmd oracle;
    std::string out_dir = "out";
    std::uint64_t seed = 20240607;
    json echo;  // resolved configuration, defaults filled

    BoundaryDatum datum(const DatumSpec& d) const {
        if (d.kind == "zero") return BoundaryDatum::zero(T);
        if (d.kind == "gaussian_bump") return BoundaryDatum::gaussian(T, d.amp, d.center, d.width, d.a, d.b, d.ramp);
        if (d.kind == "poly_bump") return BoundaryDatum::poly_bump(T, d.amp, d.m, d.a, d.b);
        return BoundaryDatum::from_csv(T, d.path, d.a, d.b, d.ramp);
    }
    DataPair data() const { return DataPair(datum(g0), datum(g1), T); }

    EvalOptions eval_options() const {
        EvalOptions o;
        o.tol = quad.tol;
        o.x_max = quad.x_max;
        o.panel_phase = quad.panel_phase;
        o.h_max = quad.h_max;
        o.g_floor = quad.g_floor;
        o.min_extent = quad.min_extent;
        o.eps = quad.eps;
        return o;
    }

    EvaluationGrid grid() const {
        std::vector<double> tn = (t.kind == "log") ? EvaluationGrid::log_t(t.min, t.max, t.count)
                                                   : EvaluationGrid::linear_t(t.min, t.max, t.count);
        return EvaluationGrid::graded(x.min, x.split, x.max, x.n_geo, x.n_lin, std::move(tn));
    }

    FDGrid fd_grid() const { return FDGrid::make(oracle.L, oracle.Nx, oracle.T, oracle.dt); }
};

// Named data sets. gaussian: bumps centred at T/2; early: narrow bumps at the
// start of (0, 1) so the solution has left the boundary well before t = 1.
inline void apply_preset(RunConfig& c, const std::string& name) {
    c.preset = name;
    if (name == "gaussian") {
        c.T = 2.0;
        c.g0 = {"gaussian_bump", {1.0, 0.0}, 1.0, 0.25, 0.0, 2.0, 0.1, 4, ""};
        c.g1 = {"gaussian_bump", {0.0, 0.8}, 1.0, 0.25, 0.0, 2.0, 0.1, 4, ""};
    } else if (name == "early") {
        c.T = 1.0;
        c.g0 = {"gaussian_bump", {1.0, 0.0}, 0.01, 0.0025, 0.0, 0.02, 0.003, 4, ""};
        c.g1 = {"gaussian_bump", {0.0, 0.8}, 0.01, 0.0025, 0.0, 0.02, 0.003, 4, ""};
    } else if (name == "poly_bump") {
        c.T = 2.0;
        c.g0 = {"poly_bump", {1.0, 0.0}, 1.0, 0.25, 0.0, 2.0, 0.1, 4, ""};
        c.g1 = {"poly_bump", {0.0, 0.8}, 1.0, 0.25, 0.0, 2.0, 0.1, 4, ""};
    } else if (name == "zero") {
        c.T = 2.0;
        c.g0 = c.g1 = {"zero", {0.0, 0.0}, 1.0, 0.25, 0.0, 2.0, 0.1, 4, ""};
    } else {
        throw ConfigError({"data.preset: unknown preset '" + name + "' (gaussian, early, poly_bump, zero)"});
    }
}

namespace detail {

// Reads fields from one JSON object, recording type errors and unknown keys.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& errs) : j_(j), path_(std::move(path)), errs_(errs) {
        if (!j_.is_object()) errs_.push_back(path_ + ": must be an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.push_back(key);
        if (!j_.is_object() || !j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const std::exception&) {
            errs_.push_back(name(key) + ": wrong type");
        }
    }

    void get_cplx(const char* key, cplx& out) {
        seen_.push_back(key);
        if (!j_.is_object() || !j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (v.is_number()) {
            out = {v.get<double>(), 0.0};
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            out = {v[0].get<double>(), v[1].get<double>()};
        } else {
            errs_.push_back(name(key) + ": expected a number or [re, im]");
        }
    }

    const json* child(const char* key) {
        seen_.push_back(key);
        if (!j_.is_object() || !j_.contains(key)) return nullptr;
        return &j_.at(key);
    }

    void finish() {
        if (!j_.is_object()) return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                errs_.push_back(name(it.key().c_str()) + ": unknown field");
    }

    std::string name(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& errs_;
    std::vector<std::string> seen_;
};

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline void read_datum(const json& j, const std::string& path, DatumSpec& d, std::vector<std::string>& errs) {
    Reader r(j, path, errs);
    r.get("kind", d.kind);
    r.get_cplx("amp", d.amp);
    r.get("center", d.center);
    r.get("width", d.width);
    std::vector<double> sup{d.a, d.b};
    r.get("support", sup);
    if (sup.size() == 2) {
        d.a = sup[0];
        d.b = sup[1];
    } else {
        errs.push_back("data.support: expected [a, b]");
    }
    r.get("ramp", d.ramp);
    r.get("m", d.m);
    r.get("path", d.path);
    r.finish();
}

inline json datum_json(const DatumSpec& d) {
    json j;
    j["kind"] = d.kind;
    j["amp"] = cplx_json(d.amp);
    if (d.kind == "gaussian_bump") {
        j["center"] = d.center;
        j["width"] = d.width;
    }
    j["support"] = json::array({d.a, d.b});
    if (d.kind == "gaussian_bump" || d.kind == "file_samples") j["ramp"] = d.ramp;
    if (d.kind == "poly_bump") j["m"] = d.m;
    if (d.kind == "file_samples") j["path"] = d.path;
    return j;
}

inline bool increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

}  // namespace detail

inline void validate(const RunConfig& c, std::vector<std::string>& e) {
    if (!(c.params.alpha != 0.0 && std::isfinite(c.params.alpha))) e.push_back("params.alpha: must be finite and nonzero");
    if (!std::isfinite(c.params.beta)) e.push_back("params.beta: must be finite");
    if (!(c.T > 0 && std::isfinite(c.T))) e.push_back("params.T: must be positive");
    for (const auto* d : {&c.g0, &c.g1}) {
        const std::string n = (d == &c.g0) ? "g0" : "g1";
        static const std::vector<std::string> kinds{"gaussian_bump", "poly_bump", "file_samples", "zero"};
        if (std::find(kinds.begin(), kinds.end(), d->kind) == kinds.end()) {
            e.push_back("data." + n + ".kind: unknown kind '" + d->kind + "'");
            continue;
        }
        if (d->kind == "zero") continue;
        if (!(d->a >= 0 && d->b <= c.T && d->a < d->b))
            e.push_back("data.support: " + n + " support [" + std::to_string(d->a) + ", " + std::to_string(d->b) +
                        "] must lie inside [0, T] with T = " + std::to_string(c.T));
        if (d->kind == "gaussian_bump" && !(d->width > 0)) e.push_back("data." + n + ".width: must be positive");
        if ((d->kind == "gaussian_bump" || d->kind == "file_samples") && !(d->ramp > 0 && 2 * d->ramp <= d->b - d->a))
            e.push_back("data." + n + ".ramp: must lie in (0, (b - a)/2]");
        if (d->kind == "poly_bump" && d->m < 4) e.push_back("data." + n + ".m: must be >= 4");
        if (d->kind == "file_samples" && !std::ifstream(d->path)) e.push_back("data." + n + ".path: cannot open '" + d->path + "'");
    }
    if (!(c.x.min > 0 && c.x.split > c.x.min && c.x.max > c.x.split))
        e.push_back("grids.x: need 0 < min < split < max");
    if (c.x.n_geo < 2 || c.x.n_lin < 1) e.push_back("grids.x: need n_geo >= 2 and n_lin >= 1");
    if (c.t.kind != "linear" && c.t.kind != "log") e.push_back("grids.t.kind: must be 'linear' or 'log'");
    if (!(c.t.min > 0 && c.t.max <= c.T && (c.t.count == 1 || c.t.max > c.t.min)))
        e.push_back("grids.t: need 0 < min < max <= T");
    if (c.t.count < 1) e.push_back("grids.t.count: must be >= 1");
    if (!(c.quad.tol >= 1e-12 && c.quad.tol <= 1e-4)) e.push_back("quadrature.tol: must lie in [1e-12, 1e-4]");
    if (!(c.quad.x_max >= c.x.max)) e.push_back("quadrature.x_max: must be >= grids.x.max");
    if (!(c.quad.panel_phase > 0)) e.push_back("quadrature.panel_phase: must be positive");
    if (!(c.quad.h_max > 0)) e.push_back("quadrature.h_max: must be positive");
    if (!(c.quad.g_floor >= 0 && c.quad.g_floor < 1e-6)) e.push_back("quadrature.g_floor: must lie in [0, 1e-6)");
    if (!(c.quad.min_extent >= 0)) e.push_back("quadrature.min_extent: must be >= 0");
    if (!(c.quad.eps > 0 && c.quad.eps < pi / 8)) e.push_back("quadrature.eps: must lie in (0, pi/8)");
    if (c.contour.samples < 2) e.push_back("contour.samples: must be >= 2");
    if (!(c.contour.s_span > 0)) e.push_back("contour.s_span: must be positive");
    if (!(c.kernels.x > 0)) e.push_back("kernels.x: must be positive");
    for (double t : c.kernels.t)
        if (!(t > 0)) e.push_back("kernels.t: times must be positive");
    if (!(c.kernels.y_max > c.kernels.y_min) || c.kernels.n_y < 2) e.push_back("kernels.y: need y_min < y_max, n_y >= 2");
    if (!(c.psi.y_max > 0) || c.psi.n_y < 2) e.push_back("psi.y: need y_max > 0, n_y >= 2");
    for (double r : c.psi.r_prime)
        if (!(r >= 1 && r <= 2)) e.push_back("psi.r_prime: values must lie in [1, 2]");
    if (!(c.psi.Y > 0) || c.psi.refine < 1) e.push_back("psi: need Y > 0 and refine >= 1");
    if (c.vdc.n < 1 || !(c.vdc.s_hi >= c.vdc.s_lo && c.vdc.s_lo > 0) || !(c.vdc.shift_hi >= c.vdc.shift_lo) ||
        !(c.vdc.t_lo > 0 && c.vdc.t_hi >= c.vdc.t_lo))
        e.push_back("vdc: need n >= 1, 0 < s_lo <= s_hi, shift_lo <= shift_hi, 0 < t_lo <= t_hi");
    if (c.dispersion.n_t < 8) e.push_back("dispersion.n_t: need >= 8");
    if (!(c.dispersion.t_lo > 0 && c.dispersion.t_hi > c.dispersion.t_lo && c.dispersion.t_hi <= 1.0 &&
          c.dispersion.t_hi <= c.T))
        e.push_back("dispersion.t: need 0 < t_lo < t_hi <= min(1, T)");
    if (!(c.dispersion.dx > 0)) e.push_back("dispersion.dx: must be positive");
    if (!(c.dispersion.x_max > 0)) e.push_back("dispersion.x_max: must be positive");
    if (!(c.dispersion.tol >= 1e-12 && c.dispersion.tol <= 1e-4)) e.push_back("dispersion.tol: must lie in [1e-12, 1e-4]");
    if (!(c.dispersion.panel_phase > 0)) e.push_back("dispersion.panel_phase: must be positive");
    if (!(c.oracle.L >= 10)) e.push_back("oracle.L: must be >= 10");
    if (c.oracle.Nx < 200) e.push_back("oracle.Nx: must be >= 200");
    if (!(c.oracle.dt > 0)) e.push_back("oracle.dt: must be positive");
    if (!(c.oracle.T > 0 && c.oracle.T <= c.T)) e.push_back("oracle.T: must lie in (0, T]");
    if (!detail::increasing(c.oracle.t_out)) e.push_back("oracle.t_out: must increase");
    for (double t : c.oracle.t_out)
        if (!(t > 0 && t <= c.oracle.T)) e.push_back("oracle.t_out: times must lie in (0, oracle.T]");
}

inline json to_json(const RunConfig& c) {
    json j;
    j["params"] = {{"alpha", c.params.alpha}, {"beta", c.params.beta}, {"T", c.T}};
    j["data"] = {{"preset", c.preset}, {"g0", detail::datum_json(c.g0)}, {"g1", detail::datum_json(c.g1)}};
    j["grids"] = {{"x", {{"min", c.x.min}, {"split", c.x.split}, {"max", c.x.max}, {"n_geo", c.x.n_geo}, {"n_lin", c.x.n_lin}}},
                  {"t", {{"kind", c.t.kind}, {"min", c.t.min}, {"max", c.t.max}, {"count", c.t.count}}}};
    j["quadrature"] = {{"tol", c.quad.tol}, {"x_max", c.quad.x_max}, {"panel_phase", c.quad.panel_phase},
                       {"h_max", c.quad.h_max}, {"g_floor", c.quad.g_floor}, {"min_extent", c.quad.min_extent},
                       {"eps", c.quad.eps}};
    j["contour"] = {{"samples", c.contour.samples}, {"s_span", c.contour.s_span}};
    j["kernels"] = {{"x", c.kernels.x}, {"t", c.kernels.t}, {"y_min", c.kernels.y_min}, {"y_max", c.kernels.y_max},
                    {"n_y", c.kernels.n_y}};
    j["psi"] = {{"y_max", c.psi.y_max}, {"n_y", c.psi.n_y}, {"r_prime", c.psi.r_prime}, {"Y", c.psi.Y},
                {"refine", c.psi.refine}};
    j["vdc"] = {{"n", c.vdc.n},           {"s_lo", c.vdc.s_lo}, {"s_hi", c.vdc.s_hi}, {"shift_lo", c.vdc.shift_lo},
                {"shift_hi", c.vdc.shift_hi}, {"t_lo", c.vdc.t_lo}, {"t_hi", c.vdc.t_hi}};
    j["dispersion"] = {{"n_t", c.dispersion.n_t}, {"t_lo", c.dispersion.t_lo}, {"t_hi", c.dispersion.t_hi},
                       {"dx", c.dispersion.dx}, {"x_max", c.dispersion.x_max}, {"tol", c.dispersion.tol},
                       {"panel_phase", c.dispersion.panel_phase}};
    j["oracle"] = {{"L", c.oracle.L}, {"Nx", c.oracle.Nx}, {"dt", c.oracle.dt}, {"T", c.oracle.T}, {"t_out", c.oracle.t_out}};
    j["output"] = {{"dir", c.out_dir}};
    j["seed"] = c.seed;
    return j;
}

inline RunConfig parse_config(const json& root) {
    RunConfig c;
    std::vector<std::string> e;
    detail::Reader top(root, "", e);
    if (const json* p = top.child("params")) {
        detail::Reader r(*p, "params", e);
        double a = 1.0, b = 1.0;
        r.get("alpha", a);
        r.get("beta", b);
        r.get("T", c.T);
        r.finish();
        c.params.alpha = a;  // checked in validate, not by the constructor
        c.params.beta = b;
    }
    const double T_user = c.T;
    const bool T_given = root.contains("params") && root["params"].is_object() && root["params"].contains("T");
    if (const json* d = top.child("data")) {
        detail::Reader r(*d, "data", e);
        std::string preset = "gaussian";
        r.get("preset", preset);
        try {
            apply_preset(c, preset);
        } catch (const ConfigError& ce) {
            e.insert(e.end(), ce.violations.begin(), ce.violations.end());
        }
        if (T_given) c.T = T_user;
        if (const json* g = r.child("g0")) {
            detail::read_datum(*g, "data.g0", c.g0, e);
            c.preset = "custom";
        }
        if (const json* g = r.child("g1")) {
            detail::read_datum(*g, "data.g1", c.g1, e);
            c.preset = "custom";
        }
        r.finish();
    } else {
        apply_preset(c, "gaussian");
        if (T_given) c.T = T_user;
    }
    if (const json* g = top.child("grids")) {
        detail::Reader r(*g, "grids", e);
        if (const json* x = r.child("x")) {
            detail::Reader rx(*x, "grids.x", e);
            rx.get("min", c.x.min);
            rx.get("split", c.x.split);
            rx.get("max", c.x.max);
            rx.get("n_geo", c.x.n_geo);
            rx.get("n_lin", c.x.n_lin);
            rx.finish();
        }
        if (const json* t = r.child("t")) {
            detail::Reader rt(*t, "grids.t", e);
            rt.get("kind", c.t.kind);
            rt.get("min", c.t.min);
            rt.get("max", c.t.max);
            rt.get("count", c.t.count);
            rt.finish();
        }
        r.finish();
    }
    if (const json* q = top.child("quadrature")) {
        detail::Reader r(*q, "quadrature", e);
        r.get("tol", c.quad.tol);
        r.get("x_max", c.quad.x_max);
        r.get("panel_phase", c.quad.panel_phase);
        r.get("h_max", c.quad.h_max);
        r.get("g_floor", c.quad.g_floor);
        r.get("min_extent", c.quad.min_extent);
        r.get("eps", c.quad.eps);
        r.finish();
    }
    if (const json* q = top.child("contour")) {
        detail::Reader r(*q, "contour", e);
        r.get("samples", c.contour.samples);
        r.get("s_span", c.contour.s_span);
        r.finish();
    }
    if (const json* q = top.child("kernels")) {
        detail::Reader r(*q, "kernels", e);
        r.get("x", c.kernels.x);
        r.get("t", c.kernels.t);
        r.get("y_min", c.kernels.y_min);
        r.get("y_max", c.kernels.y_max);
        r.get("n_y", c.kernels.n_y);
        r.finish();
    }
    if (const json* q = top.child("psi")) {
        detail::Reader r(*q, "psi", e);
        r.get("y_max", c.psi.y_max);
        r.get("n_y", c.psi.n_y);
        r.get("r_prime", c.psi.r_prime);
        r.get("Y", c.psi.Y);
        r.get("refine", c.psi.refine);
        r.finish();
    }
    if (const json* q = top.child("vdc")) {
        detail::Reader r(*q, "vdc", e);
        r.get("n", c.vdc.n);
        r.get("s_lo", c.vdc.s_lo);
        r.get("s_hi", c.vdc.s_hi);
        r.get("shift_lo", c.vdc.shift_lo);
        r.get("shift_hi", c.vdc.shift_hi);
        r.get("t_lo", c.vdc.t_lo);
        r.get("t_hi", c.vdc.t_hi);
        r.finish();
    }
    if (const json* q = top.child("dispersion")) {
        detail::Reader r(*q, "dispersion", e);
        r.get("n_t", c.dispersion.n_t);
        r.get("t_lo", c.dispersion.t_lo);
        r.get("t_hi", c.dispersion.t_hi);
        r.get("dx", c.dispersion.dx);
        r.get("x_max", c.dispersion.x_max);
        r.get("tol", c.dispersion.tol);
        r.get("panel_phase", c.dispersion.panel_phase);
        r.finish();
    }
    if (const json* q = top.child("oracle")) {
        detail::Reader r(*q, "oracle", e);
        r.get("L", c.oracle.L);
        r.get("Nx", c.oracle.Nx);
        r.get("dt", c.oracle.dt);
        r.get("T", c.oracle.T);
        r.get("t_out", c.oracle.t_out);
        r.finish();
    }
    if (const json* q = top.child("output")) {
        detail::Reader r(*q, "output", e);
        r.get("dir", c.out_dir);
        r.finish();
    }
    top.get("seed", c.seed);
    top.finish();
    // the default FD run length follows a short T
    if (!(root.contains("oracle") && root["oracle"].is_object() && root["oracle"].contains("T")))
        c.oracle.T = std::min(c.oracle.T, c.T);
    // default snapshots are clipped to the FD run, which always ends with one
    if (!(root.contains("oracle") && root["oracle"].is_object() && root["oracle"].contains("t_out"))) {
        std::vector<double> keep;
        for (double t : c.oracle.t_out)
            if (t < c.oracle.T) keep.push_back(t);
        keep.push_back(c.oracle.T);
        c.oracle.t_out = keep;
    }
    if (!e.empty()) throw ConfigError(e);
    validate(c, e);
    if (!e.empty()) throw ConfigError(e);
    c.echo = to_json(c);
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ConfigError({std::string("config: JSON parse error: ") + ex.what()});
    }
    return parse_config(root);
}

}  // namespace fokas

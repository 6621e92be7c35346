// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Everything runs at desk scale; the whole binary stays under a few
// minutes on a laptop.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "fvgrad/analysis.hpp"
#include "fvgrad/fields.hpp"
#include "fvgrad/gradient.hpp"
#include "fvgrad/grid_gen.hpp"
#include "fvgrad/ls1d.hpp"
#include "fvgrad/mesh.hpp"
#include "fvgrad/poisson.hpp"
#include "fvgrad/rng.hpp"

using namespace fvgrad;

namespace {

int g_failures = 0;
int g_checks = 0;

void record(int criterion, const std::string& label, bool ok, const std::string& detail = "") {
    ++g_checks;
    if (!ok) ++g_failures;
    std::printf("[%2d] %-4s %s%s%s\n", criterion, ok ? "PASS" : "FAIL", label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

/// mean of the last two observed orders of an error series
double tail_order(const std::vector<double>& errors) {
    const std::size_t n = errors.size();
    return 0.5 * (std::log2(errors[n - 3] / errors[n - 2]) +
                  std::log2(errors[n - 2] / errors[n - 1]));
}

/// order of the finest pair
double last_order(const std::vector<double>& errors) {
    const std::size_t n = errors.size();
    return std::log2(errors[n - 2] / errors[n - 1]);
}

Experiment1DResult run_1d(const std::vector<double>& stencil,
                          const std::vector<std::string>& methods, int halvings = 5) {
    Experiment1D exp;
    exp.stencil = stencil;
    exp.halvings = halvings;
    for (const std::string& m : methods) exp.methods.push_back(Method1D::parse(m));
    return run_experiment(exp);
}

std::vector<double> column(const Experiment1DResult& res, std::size_t m) {
    std::vector<double> out;
    for (const auto& row : res.mean_abs_error) out.push_back(row[m]);
    return out;
}

// ---------------------------------------------------------------- 1D criteria

void criterion_1() {
    const auto res = run_1d({-0.10, 0.10}, {"q0", "q1", "q1.5", "q2", "q3"});
    double max_spread = 0.0;
    for (std::size_t r = 0; r < res.mean_abs_error.size(); ++r)
        for (std::size_t m = 1; m < res.mean_abs_error[r].size(); ++m)
            max_spread = std::max(max_spread,
                                  std::abs(res.mean_abs_error[r][m] - res.mean_abs_error[r][0]));
    record(1, "symmetric stencil: diagonal methods agree", max_spread <= 1e-13,
           "spread " + num(max_spread));
    const double order = tail_order(column(res, 0));
    record(1, "symmetric stencil: order 2.0 +/- 0.1", std::abs(order - 2.0) <= 0.1,
           "order " + num(order));
}

void criterion_2() {
    const auto res = run_1d({-0.10, 0.05}, {"q0", "q1", "q1.5", "q2", "G"});
    const double o_q0 = tail_order(column(res, 0));
    const double o_q1 = tail_order(column(res, 1));
    const double o_q32 = tail_order(column(res, 2));
    const double o_q2 = tail_order(column(res, 3));
    const double o_G = tail_order(column(res, 4));
    record(2, "q=0 first order", std::abs(o_q0 - 1.0) <= 0.15, "order " + num(o_q0));
    record(2, "q=1 first order", std::abs(o_q1 - 1.0) <= 0.15, "order " + num(o_q1));
    record(2, "q=2 first order", std::abs(o_q2 - 1.0) <= 0.15, "order " + num(o_q2));
    record(2, "q=3/2 second order", std::abs(o_q32 - 2.0) <= 0.15, "order " + num(o_q32));
    record(2, "generalW second order", std::abs(o_G - 2.0) <= 0.15, "order " + num(o_G));
    const auto& last = res.mean_abs_error.back();
    record(2, "final-halving ranking e(q0) > e(q1) > e(q2)",
           last[0] > last[1] && last[1] > last[3],
           num(last[0]) + " > " + num(last[1]) + " > " + num(last[3]));
}

void criterion_3() {
    const auto res = run_1d({0.05, 0.10}, {"q0", "q1", "q1.5", "q2", "q3"});
    bool orders_ok = true;
    std::string detail;
    for (std::size_t m = 0; m < 5; ++m) {
        const double o = tail_order(column(res, m));
        orders_ok = orders_ok && std::abs(o - 1.0) <= 0.15;
        detail += (m ? "," : "") + num(o);
    }
    record(3, "one-sided stencil: all diagonal methods first order", orders_ok, detail);
    const auto& last = res.mean_abs_error.back();
    bool ranking = true;
    for (std::size_t m = 1; m < 5; ++m) ranking = ranking && last[m] < last[m - 1];
    record(3, "one-sided stencil: error decreases as q grows 0..3", ranking);
}

void criterion_4() {
    SplitMix64 rng(20240801);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double a = rng.next_double() * 4 - 2;
        const double b = rng.next_double() * 4 - 2;
        const double c = rng.next_double() * 4 - 2;
        const double x0 = rng.next_double() * 2 - 1;
        const int F = 2 + static_cast<int>(rng.next_double() * 4);
        std::vector<double> dx(F), dphi(F);
        for (int f = 0; f < F; ++f) {
            double d = 0.0;
            while (std::abs(d) < 0.02) d = rng.next_double() * 0.6 - 0.3;
            dx[f] = d;
            dphi[f] = b * d + c * ((x0 + d) * (x0 + d) - x0 * x0);
        }
        (void)a;
        const double exact = b + 2.0 * c * x0;
        const double err =
            std::abs(derivative_generalW(dx, dphi) - exact) / std::max(1.0, std::abs(exact));
        worst = std::max(worst, err);
    }
    record(4, "generalW exact on 20 random quadratics (F in 2..5)", worst < 1e-11,
           "worst relative error " + num(worst));
}

// ---------------------------------------------------------------- 2D studies

StudyResult cartesian_study() {
    StudySpec spec;
    spec.grid.family = GridFamily::cartesian;
    spec.grid.base_n = 4;
    spec.level_begin = 0;
    spec.level_end = 7;
    spec.schemes = {SchemeConfig::parse("gg:d0"), SchemeConfig::parse("ls:q0"),
                    SchemeConfig::parse("ls:q1"), SchemeConfig::parse("ls:q1.5"),
                    SchemeConfig::parse("ls:q2")};
    return run_study(spec);
}

void criterion_5() {
    const StudyResult res = cartesian_study();
    for (const char* scheme : {"gg:d0", "ls:q0", "ls:q1", "ls:q1.5", "ls:q2"}) {
        const double o = last_order(res.series(scheme, "eps_mean"));
        record(5, std::string("cartesian eps_mean order 2.0 (") + scheme + ")",
               std::abs(o - 2.0) <= 0.2, "order " + num(o));
    }
    for (const char* scheme : {"gg:d0", "ls:q0", "ls:q1", "ls:q2"}) {
        const double o = last_order(res.series(scheme, "eps_max"));
        record(5, std::string("cartesian eps_max order 1.0 (") + scheme + ")",
               std::abs(o - 1.0) <= 0.2, "order " + num(o));
    }
    const double o32 = last_order(res.series("ls:q1.5", "eps_max"));
    record(5, "cartesian eps_max order 2.0 (ls:q1.5)", std::abs(o32 - 2.0) <= 0.2,
           "order " + num(o32));

    // d0 and ls:q1 agree cell by cell on Cartesian grids
    double worst = 0.0;
    for (int level = 0; level <= 3; ++level) {
        GridSpec spec;
        spec.base_n = 4;
        spec.level = level;
        const Mesh m = gen_cartesian(spec);
        const ScalarField phi = sample(AnalyticField::tanh2d(), m);
        const GradientField gg = green_gauss(m, phi, 0);
        const GradientField ls = least_squares(m, phi, 1.0);
        for (std::size_t c = 0; c < m.cells.size(); ++c)
            worst = std::max(worst, norm(gg[c] - ls[c]));
    }
    record(5, "cartesian: gg:d0 equals ls:q1 within 1e-12", worst <= 1e-12,
           "max cell difference " + num(worst));
}

void criterion_6(EllipticGenerator& gen) {
    // grid-quality trend first: mean unevenness and skewness fall
    // monotonically (the maxima converge to the fixed shape of the
    // corner-clustered cells instead)
    double prev_unev = 0.0, prev_skew = 0.0;
    bool monotone = true;
    for (int level = 2; level <= 5; ++level) {
        const Mesh m = gen.mesh(level);
        const QualityMetrics q = quality_metrics(m);
        double unev = 0.0, skew = 0.0;
        int interior = 0;
        for (std::size_t f = 0; f < m.faces.size(); ++f) {
            if (m.faces[f].is_boundary()) continue;
            unev += q.unevenness[f];
            skew += q.skewness[f];
            ++interior;
        }
        unev /= interior;
        skew /= interior;
        if (level > 2) monotone = monotone && unev < prev_unev && skew < prev_skew;
        prev_unev = unev;
        prev_skew = skew;
    }
    record(6, "elliptic: mean unevenness and skewness decrease monotonically (r=2..5)", monotone);

    StudySpec spec;
    spec.grid.family = GridFamily::elliptic;
    spec.level_begin = 0;
    spec.level_end = 5;
    spec.schemes = {SchemeConfig::parse("gg:d0"), SchemeConfig::parse("gg:d1"),
                    SchemeConfig::parse("ls:q0"), SchemeConfig::parse("ls:q1"),
                    SchemeConfig::parse("ls:q1.5"), SchemeConfig::parse("ls:q2")};

    // share the already-solved generator: replicate run_study level loop
    StudyResult res;
    {
        std::map<std::string, std::vector<double>> dummy;
        for (int level = spec.level_begin; level <= spec.level_end; ++level) {
            const Mesh mesh = gen.mesh(level);
            const ScalarField phi = sample(spec.field, mesh);
            const GradientField exact = exact_gradient(spec.field, mesh);
            for (const SchemeConfig& scheme : spec.schemes) {
                const GradientField grad = compute_gradient(mesh, phi, scheme);
                const auto [mean, mx] = eps_norms(grad, exact, mesh, false);
                res.rows.push_back({"elliptic", level, 0.25 / (1 << level), scheme.label(), "",
                                    "", "eps_mean", "all", mean, std::nullopt});
                res.rows.push_back({"elliptic", level, 0.25 / (1 << level), scheme.label(), "",
                                    "", "eps_max", "all", mx, std::nullopt});
            }
        }
    }

    for (const char* scheme : {"gg:d0", "gg:d1", "ls:q0", "ls:q1", "ls:q1.5", "ls:q2"}) {
        const double o = last_order(res.series(scheme, "eps_mean"));
        record(6, std::string("elliptic eps_mean order 2.0 (") + scheme + ")",
               std::abs(o - 2.0) <= 0.3, "order " + num(o));
    }
    // eps_max first order concerns the least-squares family (the exception is
    // q-based); the corner-clustered cells pin the divergence-theorem maximum
    for (const char* scheme : {"ls:q0", "ls:q1", "ls:q2"}) {
        const double o = last_order(res.series(scheme, "eps_max"));
        record(6, std::string("elliptic eps_max order 1.0 (") + scheme + ")",
               std::abs(o - 1.0) <= 0.3, "order " + num(o));
    }
    const double o32 = last_order(res.series("ls:q1.5", "eps_max"));
    record(6, "elliptic eps_max order 2.0 (ls:q1.5)", std::abs(o32 - 2.0) <= 0.3,
           "order " + num(o32));

    const std::vector<double> d0 = res.series("gg:d0", "eps_mean");
    const std::vector<double> d1 = res.series("gg:d1", "eps_mean");
    record(6, "elliptic: one corrector step markedly more accurate",
           d1.back() < 0.5 * d0.back(),
           "d1 " + num(d1.back()) + " vs d0 " + num(d0.back()));
}

void criterion_7() {
    StudySpec spec;
    spec.grid.family = GridFamily::composite;
    spec.level_begin = 0;
    spec.level_end = 5;
    spec.schemes = {SchemeConfig::parse("gg:d0"),      SchemeConfig::parse("ls:q0"),
                    SchemeConfig::parse("ls:q1"),      SchemeConfig::parse("ls:q1.5"),
                    SchemeConfig::parse("ls:q2"),      SchemeConfig::parse("ls:q1:iw"),
                    SchemeConfig::parse("ls:q1.5:iw"), SchemeConfig::parse("ls:q2:iw")};
    const StudyResult res = run_study(spec);

    for (const char* scheme :
         {"ls:q0", "ls:q1", "ls:q1.5", "ls:q2", "ls:q1:iw", "ls:q1.5:iw", "ls:q2:iw"}) {
        const double o = last_order(res.series(scheme, "eps_mean_vol"));
        record(7, std::string("composite eps_mean_vol order 2.0 (") + scheme + ")",
               std::abs(o - 2.0) <= 0.2, "order " + num(o));
    }
    for (const char* q : {"1.5", "2"}) {
        const std::vector<double> plain = res.series("ls:q" + std::string(q), "eps_mean_vol");
        const std::vector<double> mod = res.series("ls:q" + std::string(q) + ":iw", "eps_mean_vol");
        record(7, std::string("composite: interface weights help at q=") + q,
               mod.back() <= plain.back(),
               num(mod.back()) + " <= " + num(plain.back()));
    }
    const double o_d0 = last_order(res.series("gg:d0", "eps_mean_vol"));
    record(7, "composite gg:d0 eps_mean_vol order 1.0", std::abs(o_d0 - 1.0) <= 0.2,
           "order " + num(o_d0));
    const double o_d0max = last_order(res.series("gg:d0", "eps_max"));
    record(7, "composite gg:d0 eps_max order 0.0", std::abs(o_d0max) <= 0.15,
           "order " + num(o_d0max));

    // d0 probe at a fine interface cell with phi = x: limit (3a+1)/2 = 0.95
    GridSpec gspec;
    gspec.family = GridFamily::composite;
    gspec.level = 5;
    const Mesh m = gen_composite(gspec);
    int probe = -1;
    for (int c = 0; c < static_cast<int>(m.cells.size()) && probe < 0; ++c) {
        if (m.level[c] != 1) continue;
        bool east_coarse = false, ok = true;
        for (int fi : m.cells[c].faces) {
            const Face& f = m.faces[fi];
            if (f.is_boundary()) { ok = false; break; }
            const Vec2 out = double(m.face_sign(fi, c)) * f.normal;
            const int jump = m.level_jump(fi, c);
            if (out.x > 0.5) {
                if (jump == -1) east_coarse = true;
            } else if (jump != 0) {
                ok = false;
            }
        }
        if (ok && east_coarse) probe = c;
    }
    const ScalarField phix = sample(AnalyticField::linear(0, 1, 0), m);
    const GradientField g = green_gauss(m, phix, 0);
    record(7, "composite fine-interface probe: d0 x-gradient of x near 0.95",
           probe >= 0 && std::abs(g[probe].x - 0.95) <= 0.01, "value " + num(g[probe].x));
}

void criterion_8() {
    StudySpec spec;
    spec.grid.family = GridFamily::perturbed;
    spec.grid.base_n = 4;
    spec.grid.seed = 42;
    spec.level_begin = 0;
    spec.level_end = 5;
    spec.schemes = {SchemeConfig::parse("ls:q0"), SchemeConfig::parse("ls:q1"),
                    SchemeConfig::parse("ls:q1.5"), SchemeConfig::parse("ls:q2"),
                    SchemeConfig::parse("gg:d0"), SchemeConfig::parse("gg:d1"),
                    SchemeConfig::parse("gg:d2")};
    const StudyResult res = run_study(spec);

    for (const char* scheme : {"ls:q0", "ls:q1", "ls:q1.5", "ls:q2"}) {
        const double o = last_order(res.series(scheme, "eps_mean"));
        record(8, std::string("random grids: eps_mean order 1.0 (") + scheme + ")",
               std::abs(o - 1.0) <= 0.2, "order " + num(o));
    }
    for (const char* scheme : {"gg:d0", "gg:d1", "gg:d2"}) {
        const double o = last_order(res.series(scheme, "eps_mean"));
        record(8, std::string("random grids: divergence-theorem stagnation (") + scheme + ")",
               o <= 0.3, "order " + num(o));
        const std::vector<double> emax = res.series(scheme, "eps_max");
        record(8, std::string("random grids: eps_max non-decreasing (") + scheme + ")",
               emax[emax.size() - 1] >= emax[emax.size() - 2],
               num(emax[emax.size() - 2]) + " -> " + num(emax[emax.size() - 1]));
    }
}

// ---------------------------------------------------------------- Poisson

std::vector<double> poisson_series(FluxKind kind, const SchemeConfig& gradient, bool perturbed,
                                   int levels_end) {
    std::vector<double> eps;
    for (int level = 0; level <= levels_end; ++level) {
        Mesh mesh;
        if (perturbed) {
            GridSpec spec;
            spec.family = GridFamily::perturbed;
            spec.base_n = 16; // 32*2^level cells per side, matching the Cartesian series
            spec.level = level;
            spec.seed = 42;
            spec.variant = PerturbVariant::straight_boundary;
            mesh = gen_perturbed(spec);
        } else {
            GridSpec spec;
            spec.base_n = 32;
            spec.level = level;
            mesh = gen_cartesian(spec);
        }
        FluxScheme flux;
        flux.kind = kind;
        flux.gradient = gradient;
        const SolveReport rep = solve_poisson(mesh, PoissonProblem::tanh_problem(), flux);
        if (!rep.converged) {
            std::printf("     (poisson level %d: %s, residual %.3g)\n", level,
                        rep.stagnated ? "stagnated" : "not converged", rep.residual);
        }
        eps.push_back(rep.eps_mean);
    }
    return eps;
}

void criterion_9() {
    const std::vector<double> eps =
        poisson_series(FluxKind::overrelaxed, SchemeConfig::parse("ls:q1"), false, 3);
    const double o = last_order(eps);
    record(9, "poisson cartesian: eps_mean order 2.0", std::abs(o - 2.0) <= 0.2,
           "order " + num(o));

    GridSpec spec;
    spec.base_n = 32;
    spec.level = 1;
    const Mesh m = gen_cartesian(spec);
    const PoissonProblem prob = PoissonProblem::tanh_problem();
    const ScalarField iterate = sample(prob.exact, m);
    const GradientField grads = least_squares(m, iterate, 1.0);
    FluxScheme over;
    over.kind = FluxKind::overrelaxed;
    FluxScheme stan;
    stan.kind = FluxKind::standard;
    const LinearSystem a = assemble(m, prob, over, iterate, grads);
    const LinearSystem b = assemble(m, prob, stan, iterate, grads);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.diag.size(); ++i) {
        worst = std::max(worst, std::abs(a.diag[i] - b.diag[i]) / std::abs(a.diag[i]));
        worst = std::max(worst, std::abs(a.rhs[i] - b.rhs[i]) / (1.0 + std::abs(a.rhs[i])));
    }
    for (std::size_t f = 0; f < a.face_coeff.size(); ++f)
        if (a.face_coeff[f] != 0.0)
            worst = std::max(worst,
                             std::abs(a.face_coeff[f] - b.face_coeff[f]) / a.face_coeff[f]);
    record(9, "poisson cartesian: flux schemes assemble identical systems", worst <= 1e-13,
           "max relative difference " + num(worst));
}

void criterion_10() {
    const std::vector<double> cart =
        poisson_series(FluxKind::overrelaxed, SchemeConfig::parse("ls:q1"), false, 3);
    const std::vector<double> l1s =
        poisson_series(FluxKind::standard, SchemeConfig::parse("ls:q1"), true, 3);
    bool within = true;
    std::string detail;
    for (std::size_t i = 0; i < l1s.size(); ++i) {
        within = within && l1s[i] <= 1.5 * cart[i];
        detail += (i ? "," : "") + num(l1s[i] / cart[i]);
    }
    record(10, "poisson distorted: standard + ls:q1 within 1.5x of Cartesian", within,
           "ratios " + detail);
    const double o = last_order(l1s);
    record(10, "poisson distorted: standard + ls:q1 order 2.0", std::abs(o - 2.0) <= 0.25,
           "order " + num(o));

    const std::vector<double> d0 =
        poisson_series(FluxKind::overrelaxed, SchemeConfig::parse("gg:d0"), true, 3);
    const double o_d0 = last_order(d0);
    record(10, "poisson distorted: overrelaxed + gg:d0 fails to converge", o_d0 <= 0.5,
           "order " + num(o_d0));
}

// ---------------------------------------------------------------- properties

Mesh parallelogram_mesh(int n, const Vec2& dxi, const Vec2& deta) {
    std::vector<Vec2> verts;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) verts.push_back(double(i) * dxi + double(j) * deta);
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::vector<int>> cells;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return build_mesh(verts, cells);
}

void criterion_11(EllipticGenerator& elliptic) {
    std::vector<std::pair<std::string, Mesh>> meshes;
    GridSpec cart;
    cart.base_n = 4;
    cart.level = 2;
    meshes.emplace_back("cartesian", gen_cartesian(cart));
    GridSpec pert;
    pert.family = GridFamily::perturbed;
    pert.base_n = 4;
    pert.level = 1;
    pert.seed = 42;
    meshes.emplace_back("perturbed", gen_perturbed(pert));
    GridSpec comp;
    comp.family = GridFamily::composite;
    comp.level = 1;
    meshes.emplace_back("composite", gen_composite(comp));
    meshes.emplace_back("elliptic", elliptic.mesh(2));

    for (const auto& [name, m] : meshes) {
        double closure_worst = 0.0, div_worst = 0.0;
        for (std::size_t c = 0; c < m.cells.size(); ++c) {
            Vec2 closure{0, 0};
            double per = 0.0, div_x = 0.0, div_y = 0.0;
            for (int fi : m.cells[c].faces) {
                const Face& f = m.faces[fi];
                const double s = m.face_sign(fi, static_cast<int>(c));
                closure += s * f.area * f.normal;
                per += f.area;
                div_x += f.centroid.x * f.area * s * f.normal.x;
                div_y += f.centroid.y * f.area * s * f.normal.y;
            }
            closure_worst = std::max(closure_worst, norm(closure) / per);
            div_worst = std::max({div_worst, std::abs(div_x / m.cells[c].volume - 1.0),
                                  std::abs(div_y / m.cells[c].volume - 1.0)});
        }
        record(11, name + ": cell closure sum(S n) = 0", closure_worst <= 1e-12,
               num(closure_worst));
        record(11, name + ": coordinate divergence identity", div_worst <= 1e-10,
               num(div_worst));

        const AnalyticField lin = AnalyticField::linear(0.4, 2.0, -1.5);
        const ScalarField lphi = sample(lin, m);
        double lin_worst = 0.0;
        for (const double q : {0.0, 1.0, 1.5, 2.0, 3.0}) {
            const GradientField g = least_squares(m, lphi, q);
            for (const Vec2& v : g)
                lin_worst = std::max(lin_worst, norm(v - Vec2{2.0, -1.5}) / norm(Vec2{2.0, -1.5}));
        }
        record(11, name + ": least-squares linear exactness (any q)", lin_worst <= 1e-11,
               num(lin_worst));

        const ScalarField cphi = sample(AnalyticField::constant(3.7), m);
        double const_worst = 0.0;
        for (const Vec2& v : green_gauss(m, cphi, 1)) const_worst = std::max(const_worst, norm(v));
        record(11, name + ": green-gauss constant exactness", const_worst <= 1e-13 * 3.7,
               num(const_worst));
    }

    // parallelogram reduction: gg = ls = central reference
    const Mesh para = parallelogram_mesh(8, Vec2{0.125, 0.0}, Vec2{0.0625, 0.125});
    const ScalarField pphi = sample(AnalyticField::tanh2d(), para);
    const GradientField gg = green_gauss(para, pphi, 0);
    const GradientField ls = least_squares(para, pphi, 1.5);
    double reduction_worst = 0.0;
    for (int c = 0; c < static_cast<int>(para.cells.size()); ++c) {
        bool interior = true;
        for (int fi : para.cells[c].faces)
            if (para.faces[fi].is_boundary()) interior = false;
        if (!interior) continue;
        const Vec2 ref = reference_parallelogram_gradient(para, pphi, c);
        reduction_worst = std::max({reduction_worst, norm(gg[c] - ref), norm(ls[c] - ref)});
    }
    record(11, "parallelogram grid: gg = ls = central reference", reduction_worst <= 1e-12,
           num(reduction_worst));

    // equal-angle stencils, q = 3/2: F=5 second order, F=3 first order
    const AnalyticField f = AnalyticField::tanh2d();
    const Vec2 P{0.42, 0.63};
    const Vec2 exact = f.gradient(P);
    auto halving_order = [&](int F) {
        std::vector<double> errors;
        for (int r = 0; r <= 6; ++r) {
            const double dist = 0.2 * std::ldexp(1.0, -r);
            std::vector<LsEntry> stencil;
            for (int k = 0; k < F; ++k) {
                const double theta = 0.3 + 2.0 * std::numbers::pi * k / F;
                const Vec2 d{dist * std::cos(theta), dist * std::sin(theta)};
                stencil.push_back({d.x, d.y, f.value(P + d) - f.value(P), ls_weight_sq(dist, 1.5)});
            }
            errors.push_back(norm(ls_solve(stencil, "equal-angle") - exact));
        }
        return tail_order(errors);
    };
    const double f5 = halving_order(5);
    const double f3 = halving_order(3);
    record(11, "equal-angle F=5 stencil: order 2.0", std::abs(f5 - 2.0) <= 0.2, "order " + num(f5));
    record(11, "equal-angle F=3 stencil: order 1.0", std::abs(f3 - 1.0) <= 0.2, "order " + num(f3));
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();

    EllipticGridSpec espec;
    espec.solver_n = 129; // levels up to 5 at desk scale
    EllipticGenerator elliptic(espec);

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6(elliptic);
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(elliptic);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("\n%d checks, %d failures (%.1f s)\n", g_checks, g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}

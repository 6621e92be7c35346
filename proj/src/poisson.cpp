#include "fvgrad/poisson.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fvgrad/errors.hpp"
#include "fvgrad/parallel.hpp"

namespace fvgrad {

PoissonProblem PoissonProblem::tanh_problem() {
    PoissonProblem p;
    p.exact = AnalyticField::tanh2d();
    p.source = [](Vec2 v) {
        const double tx = std::tanh(v.x), ty = std::tanh(v.y);
        return 2.0 * tx * ty * (2.0 - tx * tx - ty * ty);
    };
    p.dirichlet = [f = p.exact](Vec2 v) { return f.value(v); };
    return p;
}

PoissonProblem PoissonProblem::sin_problem() {
    using std::numbers::pi;
    PoissonProblem p;
    p.exact = AnalyticField::sin2d();
    p.source = [](Vec2 v) {
        return 2.0 * pi * pi * std::sin(pi * v.x) * std::sin(pi * v.y);
    };
    p.dirichlet = [f = p.exact](Vec2 v) { return f.value(v); };
    return p;
}

PoissonProblem PoissonProblem::linear_problem(double a, double b, double c) {
    PoissonProblem p;
    p.exact = AnalyticField::linear(a, b, c);
    p.source = [](Vec2) { return 0.0; };
    p.dirichlet = [f = p.exact](Vec2 v) { return f.value(v); };
    return p;
}

double flux_overrelaxed(const Vec2& P, const Vec2& N, const Vec2& normal, double area, double k,
                        double phi_P, double phi_N, const Vec2& grad_at_cprime) {
    const double dn = dot(N - P, normal);
    if (!(dn > 0.0)) throw MeshError("flux_overrelaxed: inverted face geometry");
    const Vec2 d = normalized(N - P);
    const Vec2 d_star = d / dot(d, normal);
    const Vec2 t_star = normal - d_star;
    return -area * k * (phi_N - phi_P) / dn - area * k * dot(grad_at_cprime, t_star);
}

double flux_standard(const Vec2& P, const Vec2& N, const Vec2& c_f, const Vec2& normal,
                     double area, double k, double phi_P, double phi_N, const Vec2& grad_P,
                     const Vec2& grad_N) {
    const double len = norm(N - P);
    const Vec2 Pp = c_f - 0.5 * len * normal;
    const Vec2 Np = c_f + 0.5 * len * normal;
    const double phi_Pp = phi_P + dot(grad_P, Pp - P);
    const double phi_Np = phi_N + dot(grad_N, Np - N);
    return -area * k * (phi_Np - phi_Pp) / len;
}

double flux_boundary(const Vec2& P, const Vec2& c_f, const Vec2& normal, double area, double k,
                     double phi_P, double phi_b, const Vec2& grad_P) {
    const Vec2 P_f = c_f + dot(P - c_f, normal) * normal;
    const double dist = norm(c_f - P_f);
    if (!(dist > 0.0)) throw MeshError("flux_boundary: cell centre lies on the boundary face");
    const double phi_Pf = phi_P + dot(grad_P, P_f - P);
    return -area * k * (phi_b - phi_Pf) / dist;
}

void LinearSystem::apply(const Mesh& mesh, const std::vector<double>& x,
                         std::vector<double>& y) const {
    for (std::size_t c = 0; c < x.size(); ++c) y[c] = diag[c] * x[c];
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const Face& f = mesh.faces[fi];
        if (f.is_boundary()) continue;
        const double a = face_coeff[fi];
        y[f.owner] -= a * x[f.neighbour];
        y[f.neighbour] -= a * x[f.owner];
    }
}

LinearSystem assemble(const Mesh& mesh, const PoissonProblem& problem, const FluxScheme& scheme,
                      const ScalarField& iterate, const GradientField& gradients) {
    const double k = problem.conductivity;
    LinearSystem sys;
    sys.diag.assign(mesh.cells.size(), 0.0);
    sys.face_coeff.assign(mesh.faces.size(), 0.0);
    sys.rhs.assign(mesh.cells.size(), 0.0);

    for (std::size_t c = 0; c < mesh.cells.size(); ++c)
        sys.rhs[c] = problem.source(mesh.cells[c].centroid) * mesh.cells[c].volume;

    // per-face explicit parts; scattered afterwards so the result does not
    // depend on the face visit order
    std::vector<double> expl(mesh.faces.size(), 0.0);
    parallel_for(mesh.faces.size(), [&](std::size_t fi) {
        const Face& f = mesh.faces[fi];
        if (f.is_boundary()) {
            const Vec2& P = mesh.cells[f.owner].centroid;
            const Vec2 P_f = f.centroid + dot(P - f.centroid, f.normal) * f.normal;
            const double dist = norm(f.centroid - P_f);
            if (!(dist > 0.0))
                throw MeshError("assemble: degenerate boundary face " + std::to_string(fi));
            // D = a phi_P - a phi_b + a g_P.(P_f - P) with a = S k / dist;
            // the known terms move to the right-hand side
            sys.face_coeff[fi] = f.area * k / dist;
            const double phi_b = iterate.boundary[mesh.boundary_index[fi]];
            expl[fi] = sys.face_coeff[fi] * (phi_b - dot(gradients[f.owner], P_f - P));
            return;
        }
        const Vec2& P = mesh.cells[f.owner].centroid;
        const Vec2& N = mesh.cells[f.neighbour].centroid;
        if (scheme.kind == FluxKind::overrelaxed) {
            const double dn = dot(N - P, f.normal);
            if (!(dn > 0.0))
                throw MeshError("assemble: inverted geometry at face " + std::to_string(fi));
            sys.face_coeff[fi] = f.area * k / dn;
            const Vec2 d = normalized(N - P);
            const Vec2 t_star = f.normal - d / dot(d, f.normal);
            const Vec2 g =
                f.alpha * gradients[f.owner] + (1.0 - f.alpha) * gradients[f.neighbour];
            expl[fi] = f.area * k * dot(g, t_star);
        } else {
            const double len = norm(N - P);
            sys.face_coeff[fi] = f.area * k / len;
            const Vec2 Pp = f.centroid - 0.5 * len * f.normal;
            const Vec2 Np = f.centroid + 0.5 * len * f.normal;
            expl[fi] = (f.area * k / len) *
                       (dot(gradients[f.neighbour], Np - N) - dot(gradients[f.owner], Pp - P));
        }
    });

    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const Face& f = mesh.faces[fi];
        if (f.is_boundary()) {
            sys.diag[f.owner] += sys.face_coeff[fi];
            sys.rhs[f.owner] += expl[fi];
            sys.face_coeff[fi] = 0.0; // boundary faces carry no off-diagonal
        } else {
            sys.diag[f.owner] += sys.face_coeff[fi];
            sys.diag[f.neighbour] += sys.face_coeff[fi];
            // the explicit term enters the two balances with opposite signs
            sys.rhs[f.owner] += expl[fi];
            sys.rhs[f.neighbour] -= expl[fi];
        }
    }
    return sys;
}

namespace {

/// Unpreconditioned conjugate gradient, warm-started from x. Runs until the
/// residual 2-norm falls below stop_abs, the rounding floor is reached (no
/// improvement over 50 iterations) or the iteration cap hits; the outer
/// deferred-correction loop judges the overall convergence.
long conjugate_gradient(const Mesh& mesh, const LinearSystem& sys, std::vector<double>& x,
                        double stop_abs, long max_iter) {
    const std::size_t n = x.size();
    const double stop2 = stop_abs * stop_abs;
    std::vector<double> r(n), p(n), Ap(n);
    sys.apply(mesh, x, Ap);
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = sys.rhs[i] - Ap[i];
        rr += r[i] * r[i];
    }
    if (rr <= stop2) return 0;
    p = r;
    double best = rr;
    int no_progress = 0;
    for (long it = 1; it <= max_iter; ++it) {
        sys.apply(mesh, p, Ap);
        double pAp = 0.0;
        for (std::size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (!(pAp > 0.0))
            throw NumericalError("conjugate gradient: matrix not positive definite");
        const double alpha = rr / pAp;
        double rr_next = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rr_next += r[i] * r[i];
        }
        if (rr_next <= stop2) return it;
        if (rr_next < 0.9999 * best) {
            best = rr_next;
            no_progress = 0;
        } else if (++no_progress >= 100) {
            return it; // rounding floor
        }
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return max_iter;
}

} // namespace

SolveReport solve_poisson(const Mesh& mesh, const PoissonProblem& problem,
                          const FluxScheme& scheme, const SolverControls& controls) {
    SolveReport report;
    report.solution.cell.assign(mesh.cells.size(), 0.0);
    report.solution.boundary.resize(mesh.boundary_faces.size());
    for (std::size_t b = 0; b < mesh.boundary_faces.size(); ++b)
        report.solution.boundary[b] =
            problem.dirichlet(mesh.faces[mesh.boundary_faces[b]].centroid);

    double scale = 0.0;
    for (std::size_t c = 0; c < mesh.cells.size(); ++c)
        scale = std::max(scale,
                         std::abs(problem.source(mesh.cells[c].centroid) * mesh.cells[c].volume));
    if (scale == 0.0) scale = 1.0;

    const long max_inner = controls.max_inner > 0
                               ? controls.max_inner
                               : static_cast<long>(20.0 * std::sqrt(double(mesh.cells.size()))) + 100;

    std::vector<double> residual_history;
    std::vector<double> Ax(mesh.cells.size());
    for (int outer = 0; outer < controls.max_outer; ++outer) {
        const GradientField grads = compute_gradient(mesh, report.solution, scheme.gradient);
        const LinearSystem sys = assemble(mesh, problem, scheme, report.solution, grads);

        sys.apply(mesh, report.solution.cell, Ax);
        double res = 0.0;
        for (std::size_t c = 0; c < mesh.cells.size(); ++c)
            res = std::max(res, std::abs(sys.rhs[c] - Ax[c]));
        report.residual = res / scale;
        report.outer_iterations = outer;
        if (report.residual < controls.outer_tolerance) {
            report.converged = true;
            break;
        }
        residual_history.push_back(report.residual);
        if (static_cast<int>(residual_history.size()) > controls.stagnation_window) {
            const double then =
                residual_history[residual_history.size() - 1 - controls.stagnation_window];
            if (report.residual > then * controls.stagnation_factor &&
                report.residual > controls.outer_tolerance) {
                report.stagnated = true;
                break;
            }
        }

        // the linear solve must land comfortably below the outer threshold;
        // the CG floor exit handles levels where that sits near rounding
        double rhs_norm = 0.0;
        for (const double v : sys.rhs) rhs_norm += v * v;
        rhs_norm = std::sqrt(rhs_norm);
        const double stop_abs = std::min(controls.inner_tolerance * rhs_norm,
                                         0.05 * controls.outer_tolerance * scale);
        std::vector<double> next = report.solution.cell;
        conjugate_gradient(mesh, sys, next, stop_abs, max_inner);
        if (controls.relaxation == 1.0) {
            report.solution.cell = std::move(next);
        } else {
            for (std::size_t c = 0; c < mesh.cells.size(); ++c)
                report.solution.cell[c] += controls.relaxation * (next[c] - report.solution.cell[c]);
        }
    }

    // discretisation errors vs the manufactured solution
    double sum = 0.0, mx = 0.0;
    for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
        const double e = std::abs(report.solution.cell[c] - problem.exact.value(mesh.cells[c].centroid));
        sum += e;
        mx = std::max(mx, e);
    }
    report.eps_mean = sum / static_cast<double>(mesh.cells.size());
    report.eps_max = mx;
    return report;
}

} // namespace fvgrad

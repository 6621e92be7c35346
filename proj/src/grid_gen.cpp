#include "fvgrad/grid_gen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "fvgrad/errors.hpp"
#include "fvgrad/rng.hpp"

namespace fvgrad {

namespace {

void check_spec(const GridSpec& spec) {
    if (spec.base_n < 2) throw std::invalid_argument("grid base_n must be >= 2");
    if (spec.level < 0) throw std::invalid_argument("grid level must be >= 0");
    if (!(spec.domain.hi.x > spec.domain.lo.x) || !(spec.domain.hi.y > spec.domain.lo.y))
        throw std::invalid_argument("grid domain box is empty");
}

/// Structured quad mesh from an (n+1)x(n+1) row-major vertex lattice.
Mesh quad_lattice_mesh(int n, const std::vector<Vec2>& verts) {
    std::vector<std::vector<int>> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    return build_mesh(verts, cells);
}

} // namespace

GridFamily parse_grid_family(const std::string& name) {
    if (name == "cartesian") return GridFamily::cartesian;
    if (name == "perturbed") return GridFamily::perturbed;
    if (name == "composite") return GridFamily::composite;
    if (name == "elliptic") return GridFamily::elliptic;
    throw std::invalid_argument("unknown grid family '" + name + "'");
}

std::string to_string(GridFamily family) {
    switch (family) {
        case GridFamily::cartesian: return "cartesian";
        case GridFamily::perturbed: return "perturbed";
        case GridFamily::composite: return "composite";
        case GridFamily::elliptic: return "elliptic";
    }
    return "?";
}

Mesh gen_cartesian(const GridSpec& spec) {
    check_spec(spec);
    const int n = spec.base_n << spec.level;
    const Vec2 lo = spec.domain.lo;
    const double hx = (spec.domain.hi.x - lo.x) / n;
    const double hy = (spec.domain.hi.y - lo.y) / n;
    std::vector<Vec2> verts;
    verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.push_back({lo.x + i * hx, lo.y + j * hy});
    return quad_lattice_mesh(n, verts);
}

Mesh gen_perturbed(const GridSpec& spec) {
    check_spec(spec);
    // perturbed grid r has the resolution of Cartesian grid r+1
    const int n = spec.base_n << (spec.level + 1);
    const Vec2 lo = spec.domain.lo;
    const double hx = (spec.domain.hi.x - lo.x) / n;
    const double hy = (spec.domain.hi.y - lo.y) / n;

    std::vector<Vec2> verts(static_cast<std::size_t>(n + 1) * (n + 1));
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(spec.level);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const std::size_t id = static_cast<std::size_t>(j) * (n + 1) + i;
            SplitMix64 rng(seed, 2 * id); // two draws per vertex stream
            double dx = (2.0 * rng.next_double() - 1.0) * spec.amplitude * hx;
            double dy = (2.0 * rng.next_double() - 1.0) * spec.amplitude * hy;
            const bool on_x_edge = (i == 0 || i == n);
            const bool on_y_edge = (j == 0 || j == n);
            if (spec.variant == PerturbVariant::straight_boundary) {
                if (on_x_edge) dx = 0.0;
                if (on_y_edge) dy = 0.0;
            }
            verts[id] = {lo.x + i * hx + dx, lo.y + j * hy + dy};
        }
    }

    Mesh mesh = quad_lattice_mesh(n, verts);

    // all quads must stay simple and convex; a violation indicates a bound bug
    auto vid = [n](int i, int j) { return static_cast<std::size_t>(j) * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Vec2 q0 = verts[vid(i, j)];
            const Vec2 q1 = verts[vid(i + 1, j)];
            const Vec2 q2 = verts[vid(i + 1, j + 1)];
            const Vec2 q3 = verts[vid(i, j + 1)];
            const bool convex = cross(q1 - q0, q2 - q1) > 0.0 && cross(q2 - q1, q3 - q2) > 0.0 &&
                                cross(q3 - q2, q0 - q3) > 0.0 && cross(q0 - q3, q1 - q0) > 0.0;
            if (!convex)
                throw MeshError("perturbed cell (" + std::to_string(i) + "," + std::to_string(j) +
                                ") is not a convex quadrilateral");
        }
    }
    return mesh;
}

Mesh gen_composite(const GridSpec& spec) {
    if (spec.level < 0) throw std::invalid_argument("grid level must be >= 0");
    const int nc = 8 << spec.level;   // coarse cells per side, spacing 1/nc
    const int nf = 2 * nc;            // fine lattice per side
    const double hf = 1.0 / nf;

    // fine regions of the unit square
    auto is_fine = [](double x, double y) {
        return (x < 0.5 && y > 0.5) || (x > 0.5 && y < 0.5) || (x < 0.25 && y < 0.25) ||
               (x > 0.75 && y > 0.75);
    };

    std::vector<Vec2> verts;
    std::unordered_map<std::uint64_t, int> vert_id; // fine-lattice (i,j) -> id
    auto vid = [&](int i, int j) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
            static_cast<std::uint32_t>(j);
        const auto [it, inserted] = vert_id.try_emplace(key, static_cast<int>(verts.size()));
        if (inserted) verts.push_back({i * hf, j * hf});
        return it->second;
    };

    std::vector<std::vector<int>> cells;
    std::vector<int> levels;
    for (int cj = 0; cj < nc; ++cj) {
        for (int ci = 0; ci < nc; ++ci) {
            const int i0 = 2 * ci, j0 = 2 * cj; // fine-lattice corner
            const double xm = (ci + 0.5) / nc, ym = (cj + 0.5) / nc;
            if (is_fine(xm, ym)) {
                for (int dj = 0; dj < 2; ++dj)
                    for (int di = 0; di < 2; ++di) {
                        cells.push_back({vid(i0 + di, j0 + dj), vid(i0 + di + 1, j0 + dj),
                                         vid(i0 + di + 1, j0 + dj + 1), vid(i0 + di, j0 + dj + 1)});
                        levels.push_back(1);
                    }
            } else {
                // anticlockwise polygon; a hanging vertex is inserted on every
                // edge whose far side is fine
                auto fine_across = [&](double x, double y) {
                    return x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0 && is_fine(x, y);
                };
                std::vector<int> poly;
                const bool split_s = fine_across(xm, ym - 1.0 / nc);
                const bool split_e = fine_across(xm + 1.0 / nc, ym);
                const bool split_n = fine_across(xm, ym + 1.0 / nc);
                const bool split_w = fine_across(xm - 1.0 / nc, ym);
                poly.push_back(vid(i0, j0));
                if (split_s) poly.push_back(vid(i0 + 1, j0));
                poly.push_back(vid(i0 + 2, j0));
                if (split_e) poly.push_back(vid(i0 + 2, j0 + 1));
                poly.push_back(vid(i0 + 2, j0 + 2));
                if (split_n) poly.push_back(vid(i0 + 1, j0 + 2));
                poly.push_back(vid(i0, j0 + 2));
                if (split_w) poly.push_back(vid(i0, j0 + 1));
                cells.push_back(std::move(poly));
                levels.push_back(0);
            }
        }
    }

    Mesh mesh = build_mesh(verts, cells);
    mesh.level = std::move(levels);

    // the interface skeleton is fixed by construction; assert it
    double interface_length = 0.0;
    for (const Face& f : mesh.faces) {
        if (f.is_boundary()) continue;
        if (mesh.level[f.owner] == mesh.level[f.neighbour]) continue;
        interface_length += f.area;
        const Vec2& c = f.centroid;
        const bool on_skeleton = (std::abs(c.y - 0.5) < 1e-12) || (std::abs(c.x - 0.5) < 1e-12) ||
                                 (std::abs(c.y - 0.25) < 1e-12 && c.x < 0.25) ||
                                 (std::abs(c.x - 0.25) < 1e-12 && c.y < 0.25) ||
                                 (std::abs(c.x - 0.75) < 1e-12 && c.y > 0.75) ||
                                 (std::abs(c.y - 0.75) < 1e-12 && c.x > 0.75);
        if (!on_skeleton)
            throw MeshError("composite generator: interface face off the expected skeleton");
    }
    if (std::abs(interface_length - 3.0) > 1e-9)
        throw MeshError("composite generator: interface length " +
                        std::to_string(interface_length) + " instead of 3");
    return mesh;
}

Mesh generate(const GridSpec& spec) {
    switch (spec.family) {
        case GridFamily::cartesian: return gen_cartesian(spec);
        case GridFamily::perturbed: return gen_perturbed(spec);
        case GridFamily::composite: return gen_composite(spec);
        case GridFamily::elliptic: return gen_elliptic(EllipticGridSpec{}, spec.level);
    }
    throw std::invalid_argument("unknown grid family");
}

// --- elliptic -----------------------------------------------------------------

EllipticBoundary EllipticBoundary::sinusoidal(double amplitude) {
    using std::numbers::pi;
    EllipticBoundary b;
    b.bottom = [amplitude](double xi) {
        const double x = 0.5 + 0.5 * std::sin(pi * (xi - 0.5));
        return Vec2{x, amplitude * std::sin(2.0 * pi * x)};
    };
    b.top = [amplitude](double xi) {
        const double x = 0.5 + 0.5 * std::sin(pi * (xi - 0.5));
        return Vec2{x, amplitude * std::sin(2.0 * pi * x) + 1.0};
    };
    b.left = [amplitude](double eta) {
        const double y = 0.5 + 0.5 * std::sin(pi * (eta - 0.5));
        return Vec2{-amplitude * std::sin(2.0 * pi * y), y};
    };
    b.right = [amplitude](double eta) {
        const double y = 0.5 + 0.5 * std::sin(pi * (eta - 0.5));
        return Vec2{-amplitude * std::sin(2.0 * pi * y) + 1.0, y};
    };
    return b;
}

EllipticBoundary EllipticBoundary::identity() {
    EllipticBoundary b;
    b.bottom = [](double xi) { return Vec2{xi, 0.0}; };
    b.top = [](double xi) { return Vec2{xi, 1.0}; };
    b.left = [](double eta) { return Vec2{0.0, eta}; };
    b.right = [](double eta) { return Vec2{1.0, eta}; };
    return b;
}

EllipticGenerator::EllipticGenerator(EllipticGridSpec spec) : spec_(std::move(spec)) {
    const int n = spec_.solver_n;
    if (n < 5 || ((n - 1) & (n - 2)) != 0)
        throw std::invalid_argument("elliptic solver_n must be a power of two plus one");
}

void EllipticGenerator::solve() {
    const int n = spec_.solver_n;
    x_.assign(static_cast<std::size_t>(n) * n, 0.0);
    y_.assign(static_cast<std::size_t>(n) * n, 0.0);
    auto X = [&](int i, int j) -> double& { return x_[static_cast<std::size_t>(j) * n + i]; };
    auto Y = [&](int i, int j) -> double& { return y_[static_cast<std::size_t>(j) * n + i]; };

    const double h = 1.0 / (n - 1);
    // boundary values, then transfinite interpolation as the initial guess
    for (int i = 0; i < n; ++i) {
        const Vec2 b = spec_.boundary.bottom(i * h), t = spec_.boundary.top(i * h);
        X(i, 0) = b.x; Y(i, 0) = b.y;
        X(i, n - 1) = t.x; Y(i, n - 1) = t.y;
    }
    for (int j = 0; j < n; ++j) {
        const Vec2 l = spec_.boundary.left(j * h), r = spec_.boundary.right(j * h);
        X(0, j) = l.x; Y(0, j) = l.y;
        X(n - 1, j) = r.x; Y(n - 1, j) = r.y;
    }
    for (int j = 1; j < n - 1; ++j) {
        const double e = j * h;
        for (int i = 1; i < n - 1; ++i) {
            const double s = i * h;
            const double bx[2] = {X(i, 0), X(i, n - 1)}, by[2] = {Y(i, 0), Y(i, n - 1)};
            const double lx[2] = {X(0, j), X(n - 1, j)}, ly[2] = {Y(0, j), Y(n - 1, j)};
            X(i, j) = (1 - e) * bx[0] + e * bx[1] + (1 - s) * lx[0] + s * lx[1] -
                      ((1 - s) * (1 - e) * X(0, 0) + s * (1 - e) * X(n - 1, 0) +
                       (1 - s) * e * X(0, n - 1) + s * e * X(n - 1, n - 1));
            Y(i, j) = (1 - e) * by[0] + e * by[1] + (1 - s) * ly[0] + s * ly[1] -
                      ((1 - s) * (1 - e) * Y(0, 0) + s * (1 - e) * Y(n - 1, 0) +
                       (1 - s) * e * Y(0, n - 1) + s * e * Y(n - 1, n - 1));
        }
    }

    // point Gauss-Seidel on the transformed equations; the metric factors are
    // evaluated from the current iterate, the cross-derivative term carries no
    // (i,j) contribution, so each visit solves exactly for x_ij, y_ij
    long it = 0;
    for (; it < spec_.max_iterations; ++it) {
        double max_update = 0.0;
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                const double x_xi = 0.5 * (X(i + 1, j) - X(i - 1, j));
                const double x_eta = 0.5 * (X(i, j + 1) - X(i, j - 1));
                const double y_xi = 0.5 * (Y(i + 1, j) - Y(i - 1, j));
                const double y_eta = 0.5 * (Y(i, j + 1) - Y(i, j - 1));
                // spacing factors cancel between g and the difference stencils
                const double g11 = x_xi * x_xi + y_xi * y_xi;
                const double g22 = x_eta * x_eta + y_eta * y_eta;
                const double g12 = x_xi * x_eta + y_xi * y_eta;
                const double denom = 2.0 * (g11 + g22);
                if (!(denom > 0.0))
                    throw NumericalError("elliptic grid solve: degenerate metric at node (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
                const double cross_x = 0.25 * (X(i + 1, j + 1) - X(i + 1, j - 1) -
                                               X(i - 1, j + 1) + X(i - 1, j - 1));
                const double cross_y = 0.25 * (Y(i + 1, j + 1) - Y(i + 1, j - 1) -
                                               Y(i - 1, j + 1) + Y(i - 1, j - 1));
                const double xn = (g22 * (X(i + 1, j) + X(i - 1, j)) +
                                   g11 * (X(i, j + 1) + X(i, j - 1)) - 2.0 * g12 * cross_x) / denom;
                const double yn = (g22 * (Y(i + 1, j) + Y(i - 1, j)) +
                                   g11 * (Y(i, j + 1) + Y(i, j - 1)) - 2.0 * g12 * cross_y) / denom;
                max_update = std::max({max_update, std::abs(xn - X(i, j)), std::abs(yn - Y(i, j))});
                X(i, j) = xn;
                Y(i, j) = yn;
            }
        }
        if (max_update < spec_.tolerance) break;
    }
    if (it >= spec_.max_iterations)
        throw NumericalError("elliptic grid solve did not reach the update tolerance within " +
                             std::to_string(spec_.max_iterations) + " iterations");
    iterations_ = it + 1;
    solved_ = true;
}

Mesh EllipticGenerator::mesh(int level) {
    if (level < 0) throw std::invalid_argument("grid level must be >= 0");
    const int n_cells = 4 << level;
    const int stride_num = spec_.solver_n - 1;
    if (stride_num % n_cells != 0)
        throw std::invalid_argument("elliptic solver_n " + std::to_string(spec_.solver_n) +
                                    " cannot be subsampled for level " + std::to_string(level));
    if (!solved_) solve();
    const int stride = stride_num / n_cells;
    std::vector<Vec2> verts;
    verts.reserve(static_cast<std::size_t>(n_cells + 1) * (n_cells + 1));
    for (int j = 0; j <= n_cells; ++j)
        for (int i = 0; i <= n_cells; ++i) {
            const std::size_t id =
                static_cast<std::size_t>(j) * stride * spec_.solver_n + static_cast<std::size_t>(i) * stride;
            verts.push_back({x_[id], y_[id]});
        }
    return quad_lattice_mesh(n_cells, verts);
}

Mesh gen_elliptic(const EllipticGridSpec& spec, int level) {
    EllipticGenerator gen(spec);
    return gen.mesh(level);
}

} // namespace fvgrad

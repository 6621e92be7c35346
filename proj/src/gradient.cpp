#include "fvgrad/gradient.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fvgrad/errors.hpp"
#include "fvgrad/parallel.hpp"

namespace fvgrad {

std::string SchemeConfig::label() const {
    if (scheme == Kind::green_gauss) return "gg:d" + std::to_string(correctors);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ls:q%g", weight_exponent);
    std::string s(buf);
    if (interface_weight_mod) s += ":iw";
    return s;
}

SchemeConfig SchemeConfig::parse(const std::string& label) {
    SchemeConfig cfg;
    if (label.rfind("gg", 0) == 0) {
        cfg.scheme = Kind::green_gauss;
        const auto pos = label.find(":d");
        cfg.correctors = pos == std::string::npos ? 0 : std::stoi(label.substr(pos + 2));
        return cfg;
    }
    if (label.rfind("ls", 0) == 0) {
        cfg.scheme = Kind::least_squares;
        const auto pos = label.find(":q");
        if (pos == std::string::npos)
            throw std::invalid_argument("least-squares scheme needs a :q<value> suffix: " + label);
        std::size_t used = 0;
        cfg.weight_exponent = std::stod(label.substr(pos + 2), &used);
        cfg.interface_weight_mod = label.find(":iw", pos + 2 + used) != std::string::npos;
        return cfg;
    }
    throw std::invalid_argument("unknown scheme label '" + label + "'");
}

double interpolate_face(const Mesh& mesh, const ScalarField& field, int face) {
    const Face& f = mesh.faces[face];
    if (f.is_boundary()) return field.boundary[mesh.boundary_index[face]];
    return f.alpha * field.cell[f.owner] + (1.0 - f.alpha) * field.cell[f.neighbour];
}

namespace {

/// Surface sum (1/Omega_P) sum_f phi_f S_f n_f from per-face values.
void surface_sum(const Mesh& mesh, const std::vector<double>& face_value, GradientField& out) {
    parallel_for(mesh.cells.size(), [&](std::size_t c) {
        Vec2 acc{0.0, 0.0};
        for (int fi : mesh.cells[c].faces) {
            const Face& f = mesh.faces[fi];
            const double s = mesh.face_sign(fi, static_cast<int>(c));
            acc += (face_value[fi] * f.area * s) * f.normal;
        }
        out[c] = acc / mesh.cells[c].volume;
    });
}

} // namespace

GradientField green_gauss(const Mesh& mesh, const ScalarField& field, int correctors) {
    if (correctors < 0 || correctors > 8)
        throw std::invalid_argument("corrector count must be in [0, 8]");

    std::vector<double> face_value(mesh.faces.size());
    parallel_for(mesh.faces.size(), [&](std::size_t fi) {
        face_value[fi] = interpolate_face(mesh, field, static_cast<int>(fi));
    });

    GradientField grad(mesh.cells.size());
    surface_sum(mesh, face_value, grad);

    std::vector<double> corrected(mesh.faces.size());
    GradientField next(mesh.cells.size());
    for (int step = 0; step < correctors; ++step) {
        parallel_for(mesh.faces.size(), [&](std::size_t fi) {
            const Face& f = mesh.faces[fi];
            if (f.is_boundary()) {
                corrected[fi] = face_value[fi]; // exact value known, never corrected
                return;
            }
            const Vec2 g = f.alpha * grad[f.owner] + (1.0 - f.alpha) * grad[f.neighbour];
            corrected[fi] = face_value[fi] + dot(g, f.centroid - f.c_prime);
        });
        surface_sum(mesh, corrected, next);
        grad.swap(next);
    }
    return grad;
}

double ls_weight_sq(double dr, double q) {
    if (q == 0.0) return 1.0;
    return std::exp(-2.0 * q * std::log(dr));
}

Vec2 ls_solve(std::span<const LsEntry> stencil, const std::string& label) {
    double sxx = 0.0, sxy = 0.0, syy = 0.0, bx = 0.0, by = 0.0;
    for (const LsEntry& e : stencil) {
        sxx += e.dx * e.dx * e.w2;
        sxy += e.dx * e.dy * e.w2;
        syy += e.dy * e.dy * e.w2;
        bx += e.dx * e.dphi * e.w2;
        by += e.dy * e.dphi * e.w2;
    }
    const double det = sxx * syy - sxy * sxy;
    if (!(det > 1e-14 * sxx * syy))
        throw NumericalError("least-squares stencil rank deficient at " + label);
    return Vec2{(syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det};
}

GradientField least_squares(const Mesh& mesh, const ScalarField& field, double weight_exponent,
                            bool interface_weight_mod, bool boundary_in_stencil) {
    if (!std::isfinite(weight_exponent) || weight_exponent < 0.0)
        throw std::invalid_argument("weight exponent must be finite and >= 0");

    GradientField grad(mesh.cells.size());
    parallel_for(mesh.cells.size(), [&](std::size_t c) {
        const Vec2& P = mesh.cells[c].centroid;
        const double phiP = field.cell[c];
        std::vector<LsEntry> stencil;
        stencil.reserve(mesh.cells[c].faces.size());
        for (int fi : mesh.cells[c].faces) {
            const Face& f = mesh.faces[fi];
            LsEntry e;
            if (f.is_boundary()) {
                if (!boundary_in_stencil) continue;
                const Vec2 d = f.centroid - P;
                e = {d.x, d.y, field.boundary[mesh.boundary_index[fi]] - phiP, 0.0};
            } else {
                const int n = mesh.other_cell(fi, static_cast<int>(c));
                const Vec2 d = mesh.cells[n].centroid - P;
                e = {d.x, d.y, field.cell[n] - phiP, 0.0};
            }
            e.w2 = ls_weight_sq(std::hypot(e.dx, e.dy), weight_exponent);
            if (interface_weight_mod && !f.is_boundary() &&
                mesh.level_jump(fi, static_cast<int>(c)) > 0)
                e.w2 *= 0.5; // face touches a finer level: weight scaled by 1/sqrt(2)
            stencil.push_back(e);
        }
        grad[c] = ls_solve(stencil, "cell " + std::to_string(c));
    });
    return grad;
}

GradientField compute_gradient(const Mesh& mesh, const ScalarField& field,
                               const SchemeConfig& config) {
    if (config.scheme == SchemeConfig::Kind::green_gauss)
        return green_gauss(mesh, field, config.correctors);
    return least_squares(mesh, field, config.weight_exponent, config.interface_weight_mod,
                         config.boundary_in_stencil);
}

Vec2 reference_parallelogram_gradient(const Mesh& mesh, const ScalarField& field, int cell) {
    const Cell& c = mesh.cells[cell];
    if (c.faces.size() != 4)
        throw std::invalid_argument("parallelogram reference: cell " + std::to_string(cell) +
                                    " does not have 4 faces");
    Vec2 d[4];
    double phi[4];
    for (int k = 0; k < 4; ++k) {
        const Face& f = mesh.faces[c.faces[k]];
        if (f.is_boundary())
            throw std::invalid_argument("parallelogram reference: cell " + std::to_string(cell) +
                                        " touches the boundary");
        const int n = mesh.other_cell(c.faces[k], cell);
        d[k] = mesh.cells[n].centroid - c.centroid;
        phi[k] = field.cell[n];
    }
    const double h = norm(d[0]);
    if (norm(d[0] + d[2]) > 1e-9 * h || norm(d[1] + d[3]) > 1e-9 * h)
        throw std::invalid_argument("parallelogram reference: neighbours of cell " +
                                    std::to_string(cell) + " are not in opposite pairs");
    const Vec2 dxi = d[0], deta = d[1];
    const double omega = cross(dxi, deta); // parallelogram cell volume
    const double dphi_xi = phi[0] - phi[2];
    const double dphi_eta = phi[1] - phi[3];
    return Vec2{(deta.y * dphi_xi - dxi.y * dphi_eta) / (2.0 * omega),
                (dxi.x * dphi_eta - deta.x * dphi_xi) / (2.0 * omega)};
}

} // namespace fvgrad

#include "fvgrad/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "fvgrad/errors.hpp"

namespace fvgrad {

namespace {

constexpr double kGeomTol = 1e-12; // relative geometry tolerance, fixed

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

/// True if any two non-adjacent edges of the closed polygon intersect.
bool polygon_self_intersects(const std::vector<Vec2>& p) {
    const std::size_t n = p.size();
    auto crosses = [](const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
        const double d1 = cross(b - a, c - a);
        const double d2 = cross(b - a, d - a);
        const double d3 = cross(d - c, a - c);
        const double d4 = cross(d - c, b - c);
        return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (shared endpoint)
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (crosses(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return true;
        }
    }
    return false;
}

/// Reconstructs the anticlockwise vertex cycle of a cell from its ordered
/// face list: consecutive faces share exactly one vertex, which closes the
/// chain.
std::vector<int> cell_vertex_cycle(const Mesh& mesh, int c) {
    const Cell& cell = mesh.cells[c];
    const std::size_t nf = cell.faces.size();
    if (nf < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 faces");

    std::vector<int> cycle;
    cycle.reserve(nf);
    const Face& f0 = mesh.faces[cell.faces[0]];
    const Face& f1 = mesh.faces[cell.faces[1]];
    // orient the first face so that its second vertex is shared with face 1
    int a = f0.vertices[0];
    int b = f0.vertices[1];
    if (b != f1.vertices[0] && b != f1.vertices[1]) std::swap(a, b);
    if (b != f1.vertices[0] && b != f1.vertices[1])
        throw MeshError("cell " + std::to_string(c) + ": faces do not chain");
    cycle.push_back(a);
    int prev = b;
    for (std::size_t i = 1; i < nf; ++i) {
        cycle.push_back(prev);
        const Face& f = mesh.faces[cell.faces[i]];
        if (f.vertices[0] == prev)
            prev = f.vertices[1];
        else if (f.vertices[1] == prev)
            prev = f.vertices[0];
        else
            throw MeshError("cell " + std::to_string(c) + ": faces do not chain");
    }
    if (prev != cycle.front())
        throw MeshError("cell " + std::to_string(c) + ": face loop does not close");
    return cycle;
}

void compute_cell_geometry(Mesh& mesh, int c) {
    const std::vector<int> cycle = cell_vertex_cycle(mesh, c);
    // shoelace in cell-local coordinates; on absolute coordinates the cross
    // products cancel catastrophically for small cells far from the origin
    const Vec2 origin = mesh.vertices[cycle[0]].position;
    double area2 = 0.0; // twice the signed area
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Vec2 p = mesh.vertices[cycle[i]].position - origin;
        const Vec2 q = mesh.vertices[cycle[(i + 1) % cycle.size()]].position - origin;
        const double w = cross(p, q);
        area2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if (!(area2 > 0.0))
        throw MeshError("cell " + std::to_string(c) +
                        " is degenerate or not anticlockwise (signed area " +
                        std::to_string(0.5 * area2) + ")");
    Cell& cell = mesh.cells[c];
    cell.volume = 0.5 * area2;
    cell.centroid = origin + Vec2{cx / (3.0 * area2), cy / (3.0 * area2)};
}

} // namespace

void compute_geometry(Mesh& mesh) {
    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
        compute_cell_geometry(mesh, c);

    mesh.clamp_count = 0;
    mesh.boundary_faces.clear();
    mesh.boundary_index.assign(mesh.faces.size(), -1);

    for (int i = 0; i < static_cast<int>(mesh.faces.size()); ++i) {
        Face& f = mesh.faces[i];
        const Vec2& a = mesh.vertices[f.vertices[0]].position;
        const Vec2& b = mesh.vertices[f.vertices[1]].position;
        f.centroid = 0.5 * (a + b);
        f.area = norm(b - a);
        if (!(f.area > 0.0))
            throw MeshError("face " + std::to_string(i) + " has zero length");
        // the stored vertex order is the owner's anticlockwise traversal, so
        // the clockwise rotation of the edge vector points outward of the
        // owner -- also for nonconvex cells, where a centroid test would fail
        f.normal = rot_cw(b - a) / f.area;

        if (f.is_boundary()) {
            f.c_prime = f.centroid;
            f.alpha = 1.0;
            mesh.boundary_index[i] = static_cast<int>(mesh.boundary_faces.size());
            mesh.boundary_faces.push_back(i);
            continue;
        }
        const Vec2& P = mesh.cells[f.owner].centroid;
        const Vec2& N = mesh.cells[f.neighbour].centroid;
        const Vec2 d = N - P;
        const double d2 = dot(d, d);
        if (!(d2 > 0.0))
            throw MeshError("face " + std::to_string(i) + ": coincident cell centroids");
        double t = dot(f.centroid - P, d) / d2;
        if (t < 0.0 || t > 1.0) {
            t = std::clamp(t, 0.0, 1.0);
            f.clamped = true;
            ++mesh.clamp_count;
        } else {
            f.clamped = false;
        }
        f.c_prime = P + t * d;
        f.alpha = 1.0 - t; // = ||c' - N|| / ||N - P||
    }
}

Mesh build_mesh(std::vector<Vec2> vertex_positions,
                const std::vector<std::vector<int>>& cell_vertex_lists,
                const BoundarySpec& boundary) {
    Mesh mesh;
    mesh.vertices.reserve(vertex_positions.size());
    for (const Vec2& p : vertex_positions) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw MeshError("vertex with non-finite coordinates");
        mesh.vertices.push_back({p});
    }

    std::unordered_map<std::uint64_t, int> face_of_edge;
    face_of_edge.reserve(cell_vertex_lists.size() * 4);

    mesh.cells.resize(cell_vertex_lists.size());
    for (int c = 0; c < static_cast<int>(cell_vertex_lists.size()); ++c) {
        const std::vector<int>& poly = cell_vertex_lists[c];
        if (poly.size() < 3)
            throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
        Cell& cell = mesh.cells[c];
        cell.faces.reserve(poly.size());
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const int a = poly[k];
            const int b = poly[(k + 1) % poly.size()];
            if (a == b) throw MeshError("cell " + std::to_string(c) + " repeats a vertex");
            const auto [it, inserted] = face_of_edge.try_emplace(
                edge_key(a, b), static_cast<int>(mesh.faces.size()));
            if (inserted) {
                Face f;
                f.vertices = {a, b}; // owner traversal order
                f.owner = c;
                mesh.faces.push_back(f);
            } else {
                Face& f = mesh.faces[it->second];
                if (f.neighbour >= 0 || f.owner == c)
                    throw MeshError("non-manifold edge (" + std::to_string(a) + "," +
                                    std::to_string(b) + ") shared by more than two cells");
                f.neighbour = c;
            }
            cell.faces.push_back(it->second);
        }
    }

    // boundary patches
    std::unordered_map<std::uint64_t, std::string> explicit_patch;
    for (const auto& [verts, name] : boundary.faces)
        explicit_patch[edge_key(verts[0], verts[1])] = name;
    std::unordered_map<std::string, int> patch_id;
    auto intern_patch = [&](const std::string& name) {
        const auto [it, inserted] = patch_id.try_emplace(name, static_cast<int>(mesh.patch_names.size()));
        if (inserted) mesh.patch_names.push_back(name);
        return it->second;
    };
    for (int i = 0; i < static_cast<int>(mesh.faces.size()); ++i) {
        Face& f = mesh.faces[i];
        if (!f.is_boundary()) continue;
        const auto it = explicit_patch.find(edge_key(f.vertices[0], f.vertices[1]));
        if (it != explicit_patch.end())
            f.patch = intern_patch(it->second);
        else if (!boundary.default_patch.empty())
            f.patch = intern_patch(boundary.default_patch);
        else
            throw MeshError("open boundary face " + std::to_string(i) +
                            " not assigned to a patch");
    }

    compute_geometry(mesh);

    const ValidationReport report = validate_mesh(mesh);
    if (!report.ok()) {
        std::string what = "mesh validation failed:";
        for (const std::string& v : report.violations) what += "\n  " + v;
        throw MeshError(what);
    }
    return mesh;
}

FaceQuality face_quality(const Vec2& P, const Vec2& N, const Vec2& c_f,
                         const Vec2& c_prime, const Vec2& normal) {
    const Vec2 d = N - P;
    const double len = norm(d);
    if (!(len > 0.0)) throw MeshError("face quality: coincident cell centroids");
    const double cosang = std::clamp(dot(d, normal) / len, -1.0, 1.0);
    const Vec2 m = 0.5 * (P + N);
    return FaceQuality{std::acos(cosang), norm(c_prime - m) / len, norm(c_f - c_prime) / len};
}

QualityMetrics quality_metrics(const Mesh& mesh) {
    QualityMetrics q;
    const std::size_t nf = mesh.faces.size();
    q.non_orthogonality.resize(nf);
    q.unevenness.resize(nf);
    q.skewness.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        const Face& f = mesh.faces[i];
        const Vec2& P = mesh.cells[f.owner].centroid;
        // boundary faces: c_f stands in for the missing neighbour centre
        const Vec2 N = f.is_boundary() ? f.centroid : mesh.cells[f.neighbour].centroid;
        const Vec2 cp = f.is_boundary() ? f.centroid : f.c_prime;
        const FaceQuality fq = face_quality(P, N, f.centroid, cp, f.normal);
        q.non_orthogonality[i] = fq.non_orthogonality;
        q.unevenness[i] = fq.unevenness;
        q.skewness[i] = fq.skewness;
    }
    return q;
}

ValidationReport validate_mesh(const Mesh& mesh) {
    ValidationReport report;
    auto flag = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };

    if (!mesh.level.empty() && mesh.level.size() != mesh.cells.size())
        flag("level array size does not match cell count");

    for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
        const Cell& cell = mesh.cells[c];
        if (!(cell.volume > 0.0))
            flag("cell " + std::to_string(c) + ": non-positive volume");
        Vec2 closure{0.0, 0.0};
        double perimeter = 0.0;
        double div_x = 0.0, div_y = 0.0;
        for (int fi : cell.faces) {
            const Face& f = mesh.faces[fi];
            const double s = mesh.face_sign(fi, c);
            closure += s * f.area * f.normal;
            perimeter += f.area;
            div_x += f.centroid.x * f.area * s * f.normal.x;
            div_y += f.centroid.y * f.area * s * f.normal.y;
        }
        if (norm(closure) > kGeomTol * perimeter)
            flag("cell " + std::to_string(c) + ": face normals do not close (|sum S n| = " +
                 std::to_string(norm(closure)) + ")");
        // divergence-theorem identity on the coordinate fields
        if (std::abs(div_x / cell.volume - 1.0) > 1e-10 ||
            std::abs(div_y / cell.volume - 1.0) > 1e-10)
            flag("cell " + std::to_string(c) + ": coordinate divergence identity violated");
        try {
            const std::vector<int> cycle = cell_vertex_cycle(mesh, c);
            std::vector<Vec2> poly;
            poly.reserve(cycle.size());
            for (int v : cycle) poly.push_back(mesh.vertices[v].position);
            if (polygon_self_intersects(poly))
                flag("cell " + std::to_string(c) + ": polygon is not simple");
        } catch (const MeshError& e) {
            flag(e.what());
        }
    }

    for (int i = 0; i < static_cast<int>(mesh.faces.size()); ++i) {
        const Face& f = mesh.faces[i];
        if (f.owner < 0) {
            flag("face " + std::to_string(i) + ": no owner");
            continue;
        }
        const Vec2 a = mesh.vertices[f.vertices[0]].position;
        const Vec2 b = mesh.vertices[f.vertices[1]].position;
        if (norm(f.normal - rot_cw(b - a) / norm(b - a)) > 1e-10)
            flag("face " + std::to_string(i) +
                 ": normal inconsistent with the owner vertex order");
        if (f.is_boundary()) {
            if (f.patch < 0) flag("face " + std::to_string(i) + ": boundary face without patch");
            continue;
        }
        if (f.alpha < 0.0 || f.alpha > 1.0)
            flag("face " + std::to_string(i) + ": interpolation factor outside [0,1]");
        const Vec2& P = mesh.cells[f.owner].centroid;
        const Vec2& N = mesh.cells[f.neighbour].centroid;
        const Vec2 d = N - P;
        if (!f.clamped &&
            std::abs(dot(f.centroid - f.c_prime, d)) > kGeomTol * dot(d, d))
            flag("face " + std::to_string(i) + ": c' is not the foot of c_f on the P-N segment");
        const int jump = std::abs(mesh.cell_level(f.owner) - mesh.cell_level(f.neighbour));
        if (jump > 1)
            flag("face " + std::to_string(i) + ": refinement level jump of " +
                 std::to_string(jump) + " across the face");
    }
    return report;
}

} // namespace fvgrad

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fvgrad/geometry.hpp"

namespace fvgrad {

struct Vertex {
    Vec2 position;
};

/// A straight mesh face (an edge segment in 2D). Faces are stored once and
/// shared between their two cells; `owner` is the cell that first registered
/// the face and `normal` points outward of it. For boundary faces `neighbour`
/// is -1 and `patch` identifies the boundary patch instead.
struct Face {
    std::array<int, 2> vertices{-1, -1}; // in owner traversal order
    int owner = -1;
    int neighbour = -1;
    int patch = -1;

    // geometry cache, filled by compute_geometry()
    Vec2 centroid;        // c_f, the segment midpoint
    double area = 0.0;    // S_f, the segment length
    Vec2 normal;          // unit, outward of owner
    Vec2 c_prime;         // closest point to c_f on the owner-neighbour segment
    double alpha = 0.0;   // ||c' - N_f|| / ||N_f - P||, the owner weight in
                          // linear interpolation to c'
    bool clamped = false; // c' projection fell outside [P, N_f]

    bool is_boundary() const { return neighbour < 0; }
};

struct Cell {
    std::vector<int> faces; // anticlockwise
    Vec2 centroid;          // P
    double volume = 0.0;    // Omega_P (area in 2D)
};

/// Per-interior-face irregularity measures. Boundary faces report the
/// non-orthogonality of the P-c_f connector; their unevenness is 0.5 by the
/// c_f-stands-in-for-N_f convention and their skewness is zero.
struct QualityMetrics {
    std::vector<double> non_orthogonality; // radians
    std::vector<double> unevenness;
    std::vector<double> skewness;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Face-addressed cell-centred polygonal mesh. Immutable after construction;
/// any number of readers may use it concurrently.
struct Mesh {
    std::vector<Vertex> vertices;
    std::vector<Face> faces;
    std::vector<Cell> cells;
    std::vector<std::string> patch_names;
    std::vector<int> level; // per-cell refinement level, all 0 for single-level meshes

    // derived, filled by compute_geometry()
    std::vector<int> boundary_faces;  // face ids
    std::vector<int> boundary_index;  // per face: compact boundary slot or -1
    int clamp_count = 0;              // c' projections clamped to a segment endpoint

    int cell_level(int cell) const { return level.empty() ? 0 : level[cell]; }

    /// +1 if `cell` owns the face, -1 if it is the neighbour.
    int face_sign(int face, int cell) const { return faces[face].owner == cell ? 1 : -1; }

    /// The cell on the other side of an interior face.
    int other_cell(int face, int cell) const {
        const Face& f = faces[face];
        return f.owner == cell ? f.neighbour : f.owner;
    }

    /// Level difference across an interior face, neighbour side minus `cell`
    /// side. Positive means the other side is finer.
    int level_jump(int face, int cell) const {
        return cell_level(other_cell(face, cell)) - cell_level(cell);
    }
};

/// Boundary patch assignment for build_mesh(). Faces that end up with no
/// neighbour are matched against `faces` (vertex pairs, order-insensitive)
/// and fall back to `default_patch`; if that is empty the build fails.
struct BoundarySpec {
    std::string default_patch = "boundary";
    std::vector<std::pair<std::array<int, 2>, std::string>> faces;
};

/// Builds a mesh from polygons given as anticlockwise vertex-id lists. Shared
/// edges must match vertex pairs exactly; to embed hanging nodes the coarser
/// polygon lists the hanging vertex so that each edge segment becomes its own
/// face. Geometry is computed and the validity checks are run; a mesh that
/// fails them is not returned.
Mesh build_mesh(std::vector<Vec2> vertex_positions,
                const std::vector<std::vector<int>>& cell_vertex_lists,
                const BoundarySpec& boundary = BoundarySpec{});

/// Fills all geometry caches from the topology: polygon centroids and areas by
/// the shoelace decomposition, face centroids/lengths/normals, the foot points
/// c' and interpolation factors. Throws MeshError on zero-area cells or
/// zero-length faces.
void compute_geometry(Mesh& mesh);

QualityMetrics quality_metrics(const Mesh& mesh);

/// Report-only check of the mesh invariants: face-normal closure per cell,
/// outward normals, interpolation factors in [0,1], c' orthogonality, the
/// divergence identity on the coordinate fields, and 2:1 level balance.
ValidationReport validate_mesh(const Mesh& mesh);

/// Non-orthogonality / unevenness / skewness of a single face from its raw
/// geometry; quality_metrics() applies this per face.
struct FaceQuality {
    double non_orthogonality;
    double unevenness;
    double skewness;
};
FaceQuality face_quality(const Vec2& P, const Vec2& N, const Vec2& c_f,
                         const Vec2& c_prime, const Vec2& normal);

} // namespace fvgrad
